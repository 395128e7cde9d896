"""Exact evaluation of the Verlinde-type count of dormant sl_n opers.

The count at genus g is

    p^{(n-1)(g-1)-1} * sum over n-subsets {z_1..z_n} of p-th roots of unity of
        prod_i z_i^{(n-1)(g-1)} / prod_{i != j} (z_i - z_j)^{g-1}.

Writing z_i = zeta^{e_i}, the root-of-unity prefactor cancels against the
z_j factored out of each difference, and 1/(zeta^d - 1) = S_d / p with
S_d = sum_k k zeta^{dk}.  The fast path therefore sums integer products of
T_d = S_d S_{-d} in the group ring Z[C_p] over subsets containing 0 (the
rotation-reduced sum) and reduces modulo Phi_p once at the end.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from itertools import combinations
from math import comb

from .cyclotomic import CyclotomicRational
from .errors import DomainError, NotInteger, PreconditionViolated
from .fpcalc import check_prime
from .kernels import cyclic_mul


def check_parameters(p: int, n: int, g: int) -> None:
    check_prime(p)
    if g < 1:
        raise PreconditionViolated("genus must be at least 1")
    if not 1 < n <= p - 1:
        raise PreconditionViolated(f"need 1 < n <= p - 1, got n={n}, p={p}")
    if p <= n * (g - 1):
        raise PreconditionViolated(f"need p > n(g-1), got p={p}, n={n}, g={g}")


@lru_cache(maxsize=None)
def _pair_kernels(p: int, e: int) -> tuple:
    """T_d^e in Z[C_p] for d = 0..p-1 (index 0 unused)."""
    S = []
    for d in range(p):
        v = [0] * p
        for k in range(p):
            v[d * k % p] += k
        S.append(v)
    out = [None]
    for d in range(1, p):
        T = cyclic_mul(S[d], S[(-d) % p])
        P = [1] + [0] * (p - 1)
        for _ in range(e):
            P = cyclic_mul(P, T)
        out.append(P)
    return tuple(out)


def _subset_sum(p: int, n: int, e: int, first: int) -> list[int]:
    """Sum over subsets {0, first, ...} of prod_{i<j} T_{e_j - e_i}^e."""
    kern = _pair_kernels(p, e)
    total = [0] * p

    def rec(chosen: list[int], acc: list[int], start: int) -> None:
        if len(chosen) == n:
            for k in range(p):
                total[k] += acc[k]
            return
        need = n - len(chosen)
        for x in range(start, p - need + 1):
            nxt = acc
            for c in chosen:
                nxt = cyclic_mul(nxt, kern[x - c])
            chosen.append(x)
            rec(chosen, nxt, x + 1)
            chosen.pop()

    start = [1] + [0] * (p - 1)
    if n == 1:
        return start
    rec([0, first], cyclic_mul(start, kern[first]), first + 1)
    return total


def _chunk(args):
    return _subset_sum(*args)


def rotation_reduced_sum(p: int, n: int, g: int, workers: int = 1) -> list[int]:
    """Group-ring value of the sum over n-subsets containing 0, chunked by the second element."""
    e = g - 1
    tasks = [(p, n, e, first) for first in range(1, p - n + 2)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, tasks))
    else:
        parts = [_chunk(t) for t in tasks]
    total = [0] * p
    for part in parts:
        for k in range(p):
            total[k] += part[k]
    return total


def verlinde_degree(p: int, n: int, g: int, workers: int = 1) -> int:
    check_parameters(p, n, g)
    total = rotation_reduced_sum(p, n, g, workers)
    reduced = [total[k] - total[p - 1] for k in range(p - 1)]
    if any(reduced[1:]):
        raise NotInteger(f"sum is not rational for p={p}, n={n}, g={g}")
    num = reduced[0]
    den = n * p ** ((n - 1) ** 2 * (g - 1))
    if num % den:
        raise NotInteger(f"value {num}/{den} is not an integer")
    value = num // den
    if value < 0:
        raise NotInteger(f"negative count {value}")
    return value


def verlinde_direct(p: int, n: int, g: int) -> int:
    """Unreduced evaluation: literal summand over all n-subsets in Q(zeta_p)."""
    check_parameters(p, n, g)
    zetas = [CyclotomicRational.zeta(p, k) for k in range(p)]
    pre = (n - 1) * (g - 1)
    total = CyclotomicRational.integer(p, 0)
    inv_cache: dict = {}
    for subset in combinations(range(p), n):
        num = CyclotomicRational.integer(p, 1)
        for i in subset:
            num = num * zetas[i * pre % p]
        den = CyclotomicRational.integer(p, 1)
        for i in subset:
            for j in subset:
                if i != j:
                    den = den * (zetas[i] - zetas[j])
        key = den.coeffs
        if key not in inv_cache:
            inv_cache[key] = den.inverse()
        total = total + num * inv_cache[key] ** (g - 1)
    scale = pre - 1
    value = total * (CyclotomicRational.integer(p, p) ** scale)
    out = value.is_rational_integer()
    if out is None:
        raise NotInteger(f"direct sum is not a rational integer: {value!r}")
    return out


def verlinde_symmetry_check(p: int, n: int, g: int = 2) -> bool:
    if g != 2:
        raise DomainError("the rank duality is checked at genus 2")
    return verlinde_degree(p, n, g) == verlinde_degree(p, p - n, g)


def subset_count(p: int, n: int) -> int:
    """Number of subsets in the rotation-reduced enumeration."""
    return comb(p - 1, n - 1)
