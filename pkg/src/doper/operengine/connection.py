"""Logarithmic connections on vector bundles over the marked line.

A connection is stored by the matrix ``A_d`` of ``nabla_d`` (``d = h d/dx``)
in the affine frame, so the log condition at the finite marked points is
just polynomiality of ``A_d``.  At infinity the same connection is written in
the frame ``G`` and the log field ``t d/dt = u d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..errors import InternalInconsistency, NonSplitCharPoly
from ..fpcalc import ExponentMultiset
from ..funcfield import INF, RF, RatMatrix, as_rf, charpoly, kron, residue_at, roots_with_multiplicity
from .base import LogVectorField, MarkedLine, symbolic_power


def ore_power(A_d: RatMatrix, h: RF, e: int) -> list[RatMatrix]:
    """Coefficients M_j of (d + A_d)^e = sum_j M_j d^j as differential operators.

    Uses the commutation rule d * M = M d + d(M) entrywise.
    """
    p, n = A_d.p, A_d.nrows
    zero = RatMatrix.zeros(p, n, n)
    coeffs = [RatMatrix.identity(p, n)]
    for _ in range(e):
        new = [zero] * (len(coeffs) + 1)
        for j, M in enumerate(coeffs):
            new[j] = new[j] + M.derive(h) + A_d @ M
            new[j + 1] = new[j + 1] + M
        coeffs = new
    return coeffs


def p_curvature_matrix(A_d: RatMatrix, h) -> RatMatrix:
    """Matrix of nabla_D^p - nabla_{D^[p]} for D = h d/dx in the given frame.

    ``h`` and ``A_d`` may be rational, which is how O-linearity in the vector
    field is checked.  Consistency of the operator expansion is verified and
    an :class:`InternalInconsistency` raised otherwise.
    """
    p = A_d.p
    h = as_rf(h, p)
    g = symbolic_power(LogVectorField(p, h))
    coeffs = ore_power(A_d, h, p)
    n = A_d.nrows
    if coeffs[p] != RatMatrix.identity(p, n):
        raise InternalInconsistency("leading coefficient of the p-th power is not the identity")
    for j in range(1, p):
        if not coeffs[j].is_zero():
            raise InternalInconsistency(f"coefficient of d^{j} in the p-th power does not vanish")
    return coeffs[0] - A_d.scale(g)


@dataclass(frozen=True, eq=False)
class LogConnection:
    """A vector bundle with a log connection on a marked line.

    ``A_d`` is the matrix of ``nabla_d`` in the affine frame and ``G`` holds
    the frame at infinity as columns in affine coordinates.
    """

    base: MarkedLine
    A_d: RatMatrix
    G: RatMatrix

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def rank(self) -> int:
        return self.A_d.nrows

    @cached_property
    def A(self) -> RatMatrix:
        """dx-coefficient of the connection form."""
        return self.A_d.scale(self.base.h_rf.inverse())

    @cached_property
    def degree(self) -> int:
        return -int(self.G.det().order_at(INF))

    @cached_property
    def A_infinity(self) -> RatMatrix:
        """dx-coefficient of the connection in the frame G."""
        G = self.G
        return G.inverse() @ (self.A @ G + G.derive())

    @cached_property
    def A_infinity_log(self) -> RatMatrix:
        """Matrix of nabla_{t d/dt} in the frame G."""
        return self.A_infinity.scale(self.base.u * self.base.h_rf)

    def has_log_poles(self) -> bool:
        if not self.A_d.is_polynomial():
            return False
        return self.A_infinity_log.min_order_at(INF) >= 0

    def apply(self, v: RatMatrix) -> RatMatrix:
        """nabla_d applied to the columns of v (affine coordinates)."""
        return v.derive(self.base.h_rf) + self.A_d @ v

    def monodromy(self, i: int) -> list[list[int]]:
        """Residue matrix at the i-th marked point."""
        pt = self.base.points[i]
        mat = self.A_infinity if pt == INF else self.A
        return [[residue_at(v, pt) for v in row] for row in mat.rows]

    def exponents(self, i: int) -> ExponentMultiset:
        """Eigenvalues of the residue at the i-th marked point, with multiplicity."""
        mu = self.monodromy(i)
        f = charpoly(mu, self.p)
        roots = roots_with_multiplicity(f)
        if roots is None:
            raise NonSplitCharPoly(f"residue at {self.base.points[i]} has non-split characteristic polynomial {f}")
        return ExponentMultiset(self.p, tuple(roots))

    def all_exponents(self) -> tuple[ExponentMultiset, ...]:
        return tuple(self.exponents(i) for i in range(self.base.r))

    @cached_property
    def p_curvature(self) -> RatMatrix:
        return p_curvature_matrix(self.A_d, self.base.h_rf)

    def p_curvature_along(self, f) -> RatMatrix:
        """p-curvature for the vector field f * d."""
        f = as_rf(f, self.p)
        return p_curvature_matrix(self.A_d.scale(f), self.base.h_rf * f)

    def is_dormant(self) -> bool:
        return self.p_curvature.is_zero()

    def det(self) -> "LogConnection":
        tr = self.A_d.trace()
        return LogConnection(self.base, RatMatrix(self.p, [[tr]], 1), RatMatrix(self.p, [[self.G.det()]], 1))

    def dual(self) -> "LogConnection":
        return LogConnection(self.base, -self.A_d.T(), self.G.inverse().T())

    def tensor(self, other: "LogConnection") -> "LogConnection":
        n, m = self.rank, other.rank
        eye_n = RatMatrix.identity(self.p, n)
        eye_m = RatMatrix.identity(self.p, m)
        A = kron(self.A_d, eye_m) + kron(eye_n, other.A_d)
        return LogConnection(self.base, A, kron(self.G, other.G))

    def gauge(self, P: RatMatrix) -> "LogConnection":
        """The same connection in the affine frame given by the columns of P."""
        A = P.inverse() @ self.apply(P)
        return LogConnection(self.base, A, P.inverse() @ self.G)
