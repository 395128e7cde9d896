"""Pure-Python versions of the inner loops.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension.  Polynomials are lists of residues, lowest degree
first, with trailing zeros removed.
"""

from __future__ import annotations


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(a, b, p: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % p
    return _trim(out)


def poly_sub(a, b, p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] - v) % p
    return _trim(out)


def poly_mul(a, b, p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([v % p for v in out])


def poly_divmod(a, b, p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _trim(r)
    inv = pow(b[-1], p - 2, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] % p
        if c:
            c = c * inv % p
            q[k] = c
            for j in range(db + 1):
                r[k + j] = (r[k + j] - c * b[j]) % p
    return _trim(q), _trim([v % p for v in r[:db]])


def poly_eval(a, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def cyclic_mul(a, b) -> list[int]:
    """Product in Z[C_n] (cyclic convolution) for arbitrary-size integers."""
    n = len(a)
    out = [0] * n
    for i in range(n):
        ai = a[i]
        if ai:
            k = i
            for j in range(n):
                bj = b[j]
                if bj:
                    out[k] += ai * bj
                k += 1
                if k == n:
                    k = 0
    return out


# ---------------------------------------------------------------------------
# Bitmask scans for the subset duality.  Bit j of a mask is residue j.


def mask_star(m: int, p: int) -> int:
    full = (1 << p) - 1
    c = m ^ full
    out = 0
    for j in range(p):
        if c >> j & 1:
            out |= 1 << ((-j) % p)
    return out


def mask_rot(m: int, a: int, p: int) -> int:
    a %= p
    full = (1 << p) - 1
    return ((m << a) | (m >> (p - a))) & full if a else m


def mask_canon(m: int, p: int) -> int:
    return min(mask_rot(m, a, p) for a in range(p))


def involution_scan(p: int) -> tuple[int, int]:
    bad = 0
    for m in range(1 << p):
        if mask_star(mask_star(m, p), p) != m:
            bad += 1
    return 1 << p, bad


def necklace_scan(p: int) -> tuple[int, int, int]:
    orbits = bad_shift = bad_orbit = 0
    a = [0] * (p + 1)
    t = 1
    while True:
        if p % t == 0:
            m = 0
            for i in range(1, p + 1):
                m = (m << 1) | a[i]
            orbits += 1
            s = mask_star(m, p)
            for sh in range(p):
                if mask_star(mask_rot(m, sh, p), p) != mask_rot(s, -sh, p):
                    bad_shift += 1
            c2 = mask_canon(mask_star(mask_canon(s, p), p), p)
            if c2 != m:
                bad_orbit += 1
        t = p
        while t > 0 and a[t] == 1:
            t -= 1
        if t == 0:
            break
        a[t] = 1
        for i in range(t + 1, p + 1):
            a[i] = a[i - t]
    return orbits, bad_shift, bad_orbit
