"""Determinant data: a rank, a line bundle B and a connection on T^{k0} B^n.

Here ``k0 = n(n-1)/2``.  The connection is recorded by ``omega0``, the
``d``-coefficient of the connection in the affine generator of
``T^{k0} (x) B^n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import DomainError, InternalInconsistency
from ..fpcalc import ExponentMultiset
from ..funcfield import INF, RF, Poly, RatMatrix, as_rf
from .base import LineBundleDatum, LineConnection, MarkedLine
from .connection import LogConnection


@dataclass(frozen=True)
class DeterminantData:
    n: int
    B: LineBundleDatum
    omega0: RF

    @property
    def base(self) -> MarkedLine:
        return self.B.base

    @property
    def p(self) -> int:
        return self.B.p

    @property
    def k0(self) -> int:
        return self.n * (self.n - 1) // 2

    def line(self) -> LineBundleDatum:
        return self.B.power(self.n).tensor(LineBundleDatum.tangent(self.base, self.k0))

    def line_connection(self) -> LineConnection:
        return LineConnection(self.line(), self.omega0)

    def connection(self) -> LogConnection:
        return self.line_connection().to_connection()

    def is_dormant(self) -> bool:
        return self.connection().is_dormant()

    def exponents(self) -> tuple[ExponentMultiset, ...]:
        return self.connection().all_exponents()

    def exponent_values(self) -> tuple[int, ...]:
        return tuple(e.entries[0] for e in self.exponents())


def _minimal_st(p: int, n: int) -> tuple[int, int]:
    k0 = n * (n - 1) // 2
    for t in range(p):
        if (n * t + k0) % p == 0:
            return (n * t + k0) // p, t
    raise DomainError(f"no solution of p s = n t + n(n-1)/2 for n={n}, p={p}")


def _twist_multiplicity(p: int, n: int, a: int) -> int:
    if n % p == 0:
        if a % p:
            raise DomainError(f"exponent {a} is not attainable with n divisible by p")
        return 0
    return a * pow(n, -1, p) % p


def construct(base: MarkedLine, n: int, exponents: Sequence[int], st: tuple[int, int] | None = None) -> DeterminantData:
    """Dormant determinant data with prescribed exponents at the marked points.

    ``st`` overrides the pair (s, t) with ``p s = n t + n(n-1)/2``; by
    default the smallest non-negative solution is used.  B is
    ``T^t(-sum m_i sigma_i)`` where ``n m_i = a_i`` mod p, and the
    connection makes the frame ``d^{ps}`` of ``T^{ps}`` horizontal.
    """
    p = base.p
    if not 1 <= n <= p:
        raise DomainError(f"need 1 <= n <= p, got n={n}")
    if len(exponents) != base.r:
        raise DomainError(f"expected {base.r} exponents, got {len(exponents)}")
    k0 = n * (n - 1) // 2
    if st is None:
        s, t = _minimal_st(p, n)
    else:
        s, t = st
        if p * s != n * t + k0:
            raise DomainError(f"(s, t) = {st} does not satisfy p s = n t + n(n-1)/2")
    mult = [_twist_multiplicity(p, n, a) for a in exponents]
    B = LineBundleDatum(base, t, tuple((pt, -m) for pt, m in zip(base.points, mult)))
    psi = RF.const(p, 1)
    for pt, m in zip(base.points, mult):
        if pt != INF and m:
            psi = psi * as_rf(Poly.linear(p, pt), p) ** (n * m)
    omega0 = base.field.apply(psi) / psi
    data = DeterminantData(n, B, omega0)
    conn = data.connection()
    if not conn.is_dormant():
        raise InternalInconsistency("constructed determinant data is not dormant")
    got = data.exponent_values()
    want = tuple(a % p for a in exponents)
    if got != want:
        raise InternalInconsistency(f"constructed exponents {got} differ from requested {want}")
    return data


def canonical(B: LineBundleDatum) -> DeterminantData:
    """Rank-p data on T^{p(p-1)/2} B^p, whose affine generator is horizontal."""
    return DeterminantData(B.p, B, RF.const(B.p, 0))


def dual(U: DeterminantData) -> DeterminantData:
    """Data of the dual: B becomes T^{-(n-1)} B^{-1} and the connection is dualized."""
    B = U.B.dual().tensor(LineBundleDatum.tangent(U.base, -(U.n - 1)))
    return DeterminantData(U.n, B, -U.omega0)


def triangle(U: DeterminantData) -> DeterminantData:
    """Data of the rank p-n kernel oper: B becomes T^n B."""
    B = U.B.tensor(LineBundleDatum.tangent(U.base, U.n))
    return DeterminantData(U.p - U.n, B, -U.omega0)


def star(U: DeterminantData) -> DeterminantData:
    """Composite of triangle and dual: B becomes T^{-(p-1)} B^{-1}."""
    return dual(triangle(U))


def tensor(U: DeterminantData, L: LineConnection) -> DeterminantData:
    """Data after tensoring the oper with a line bundle with connection."""
    return DeterminantData(U.n, U.B.tensor(L.bundle), U.omega0 + L.omega * U.n)


def connection_matrix(U: DeterminantData) -> RatMatrix:
    return U.connection().A_d
