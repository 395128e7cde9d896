# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_kernels_py`` for the reference semantics."""

from libc.stdlib cimport malloc, free


cdef list _trim(list c):
    cdef Py_ssize_t n = len(c)
    while n and c[n - 1] == 0:
        c.pop()
        n -= 1
    return c


def poly_add(a, b, long long p):
    if len(a) < len(b):
        a, b = b, a
    cdef list out = list(a)
    cdef Py_ssize_t i
    for i in range(len(b)):
        out[i] = (<long long>out[i] + <long long>b[i]) % p
    return _trim(out)


def poly_sub(a, b, long long p):
    cdef Py_ssize_t na = len(a), nb = len(b), n = max(na, nb), i
    cdef list out = [0] * n
    cdef long long v
    for i in range(na):
        out[i] = a[i]
    for i in range(nb):
        v = (<long long>out[i] - <long long>b[i]) % p
        if v < 0:
            v += p
        out[i] = v
    return _trim(out)


def poly_mul(a, b, long long p):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j, n
    if na == 0 or nb == 0:
        return []
    n = na + nb - 1
    cdef long long *ca = <long long *> malloc(na * sizeof(long long))
    cdef long long *cb = <long long *> malloc(nb * sizeof(long long))
    cdef unsigned long long *out = <unsigned long long *> malloc(n * sizeof(unsigned long long))
    cdef unsigned long long ai
    cdef list res
    try:
        for i in range(na):
            ca[i] = a[i]
        for j in range(nb):
            cb[j] = b[j]
        for i in range(n):
            out[i] = 0
        for i in range(na):
            ai = ca[i]
            if ai:
                for j in range(nb):
                    out[i + j] += ai * cb[j]
                    # keep well inside 64 bits even for long inputs
                    if out[i + j] >= 0x4000000000000000ULL:
                        out[i + j] %= p
        res = [<long long>(out[i] % p) for i in range(n)]
    finally:
        free(ca)
        free(cb)
        free(out)
    return _trim(res)


def poly_divmod(a, b, long long p):
    cdef Py_ssize_t nb = len(b), na = len(a), db, k, j
    if nb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = nb - 1
    if na - 1 < db:
        return [], _trim([x % p for x in a])
    cdef long long *r = <long long *> malloc(na * sizeof(long long))
    cdef long long *cb = <long long *> malloc(nb * sizeof(long long))
    cdef long long inv = pow(b[db], p - 2, p)
    cdef long long c
    cdef list q = [0] * (na - db)
    try:
        for k in range(na):
            r[k] = a[k] % p
        for j in range(nb):
            cb[j] = b[j]
        for k in range(na - 1 - db, -1, -1):
            c = r[k + db]
            if c:
                c = c * inv % p
                q[k] = c
                for j in range(db + 1):
                    r[k + j] = (r[k + j] - c * cb[j]) % p
                    if r[k + j] < 0:
                        r[k + j] += p
        rem = [r[k] for k in range(db)]
    finally:
        free(r)
        free(cb)
    return _trim(q), _trim(rem)


def poly_eval(a, long long x, long long p):
    cdef long long acc = 0
    cdef Py_ssize_t i
    for i in range(len(a) - 1, -1, -1):
        acc = (acc * x + <long long>a[i]) % p
    return acc


def cyclic_mul(list a, list b):
    cdef Py_ssize_t n = len(a), i, j, k
    cdef list out = [0] * n
    cdef object ai, bj
    for i in range(n):
        ai = a[i]
        if ai:
            k = i
            for j in range(n):
                bj = b[j]
                if bj:
                    out[k] = out[k] + ai * bj
                k += 1
                if k == n:
                    k = 0
    return out


# ---------------------------------------------------------------------------
# Bitmask scans for the subset duality.  Bit j of a mask is residue j.

cdef unsigned short _REV16[65536]


cdef void _fill_rev16():
    cdef unsigned int v, r, b
    for v in range(65536):
        r = 0
        for b in range(16):
            r |= ((v >> b) & 1u) << (15 - b)
        _REV16[v] = <unsigned short>r


_fill_rev16()


cdef inline unsigned int _rev32(unsigned int v) nogil:
    return (<unsigned int>_REV16[v & 0xFFFFu] << 16) | _REV16[v >> 16]


cdef inline unsigned int _neg(unsigned int m, int p) nogil:
    if p == 1:
        return m
    return (m & 1u) | ((_rev32(m >> 1) >> (33 - p)) << 1)


cdef inline unsigned int _rot(unsigned int m, int a, int p, unsigned int full) nogil:
    if a == 0:
        return m
    return ((m << a) | (m >> (p - a))) & full


cdef inline unsigned int _canon(unsigned int m, int p, unsigned int full) nogil:
    cdef unsigned int best = m, r = m
    cdef int a
    for a in range(1, p):
        r = ((r << 1) | (r >> (p - 1))) & full
        if r < best:
            best = r
    return best


def mask_star(unsigned int m, int p):
    cdef unsigned int full = (1u << p) - 1u if p < 32 else 0xFFFFFFFFu
    return _neg(m ^ full, p)


def mask_rot(unsigned int m, int a, int p):
    cdef unsigned int full = (1u << p) - 1u
    return _rot(m, a % p, p, full)


def mask_canon(unsigned int m, int p):
    cdef unsigned int full = (1u << p) - 1u
    return _canon(m, p, full)


def involution_scan(int p):
    """Count masks m in [0, 2^p) with star(star(m)) != m."""
    if p < 1 or p > 31:
        raise ValueError("p must lie in [1, 31]")
    cdef unsigned int full = (1u << p) - 1u
    cdef unsigned long long m, total = 1ULL << p, bad = 0
    cdef unsigned int m32
    with nogil:
        for m in range(total):
            m32 = <unsigned int>m
            bad += _neg(_neg(m32 ^ full, p) ^ full, p) != m32
    return int(total), int(bad)


def necklace_scan(int p):
    """Visit every rotation orbit once (as its minimal mask).

    For each orbit representative m checks star(rot_a m) == rot_{-a} star(m)
    for every shift a, and that the orbit-level star is an involution.
    Returns (orbits, shift_failures, orbit_failures).
    """
    if p < 2 or p > 31:
        raise ValueError("p must lie in [2, 31]")
    cdef unsigned int full = (1u << p) - 1u
    cdef int a[33]
    cdef int t, i
    cdef unsigned int m, s, cs, c2, r, rs
    cdef unsigned long long orbits = 0, bad_shift = 0, bad_orbit = 0
    cdef int sh
    # iterative FKM generation of binary necklaces (prenecklace successor)
    for i in range(p + 1):
        a[i] = 0
    with nogil:
        t = 1
        while True:
            if p % t == 0:
                m = 0
                for i in range(1, p + 1):
                    m = (m << 1) | <unsigned int>a[i]
                orbits += 1
                s = _neg(m ^ full, p)
                r = m
                rs = s
                for sh in range(p):
                    # r = rot_sh(m), rs = rot_{-sh}(star m)
                    bad_shift += _neg(r ^ full, p) != rs
                    r = ((r << 1) | (r >> (p - 1))) & full
                    rs = ((rs >> 1) | (rs << (p - 1))) & full
                cs = _canon(s, p, full)
                c2 = _canon(_neg(cs ^ full, p), p, full)
                if c2 != m:
                    bad_orbit += 1
            # successor
            t = p
            while t > 0 and a[t] == 1:
                t -= 1
            if t == 0:
                break
            a[t] = 1
            for i in range(t + 1, p + 1):
                a[i] = a[i - t]
    return int(orbits), int(bad_shift), int(bad_orbit)
