"""GL_n opers with fixed determinant, the rank-p oper D^Psi_B and dualities.

An oper is a log connection with a full flag of sub-bundles
``F = F^0 > F^1 > ... > F^{n-1} > 0`` satisfying Griffiths transversality
with isomorphic Kodaira-Spencer maps, an identification of the last piece
with a line bundle B (recorded by the affine generator ``b``) and
determinant data describing ``det F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from ..errors import DomainError, NotDormant, OperAxiomFailure, SaturationFailure
from ..fpcalc import ExponentMultiset, complement, star as star_multiset
from ..funcfield import (
    INF,
    RF,
    RatMatrix,
    hermite_kernel_basis,
    is_saturated,
    saturate_at_infinity,
    subbundle_degree,
)
from . import detdata
from .base import LineBundleDatum, LineConnection, MarkedLine
from .connection import LogConnection, ore_power
from .detdata import DeterminantData


@dataclass(frozen=True, eq=False)
class OperData:
    """An oper in the affine frame of its underlying bundle.

    ``flag[j]`` is a saturated polynomial basis of ``F^j`` (``flag[0]`` spans
    everything) and ``b`` is the image of the affine generator of B, spanning
    ``F^{n-1}``.
    """

    conn: LogConnection
    flag: tuple
    b: RatMatrix
    det: DeterminantData

    @property
    def base(self) -> MarkedLine:
        return self.conn.base

    @property
    def p(self) -> int:
        return self.conn.p

    @property
    def n(self) -> int:
        return self.conn.rank

    @property
    def B(self) -> LineBundleDatum:
        return self.det.B

    @cached_property
    def flag_degrees(self) -> tuple[int, ...]:
        return tuple(subbundle_degree(self.conn.G, K) for K in self.flag)

    @cached_property
    def degree(self) -> int:
        return self.conn.degree

    def is_dormant(self) -> bool:
        return self.conn.is_dormant()

    def exponents(self) -> tuple[ExponentMultiset, ...]:
        return self.conn.all_exponents()

    @cached_property
    def eta_frame(self) -> RatMatrix:
        """Columns b, nabla b, ..., nabla^{n-1} b."""
        cols = [self.b]
        for _ in range(self.n - 1):
            cols.append(self.conn.apply(cols[-1]))
        out = cols[0]
        for c in cols[1:]:
            out = out.hstack(c)
        return out


@dataclass
class OperReport:
    rank: int
    degree: int
    flag_degrees: tuple
    dormant: bool | None = None
    exponents: tuple = ()
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _fail(axiom: str, detail: str):
    raise OperAxiomFailure(axiom, detail)


def oper_check(F: OperData, require_dormant: bool = False) -> OperReport:
    """Verify the oper axioms; raises :class:`OperAxiomFailure` on the first failure."""
    conn, n, p = F.conn, F.n, F.p
    if conn.G.shape != (n, n) or conn.A_d.shape != (n, n):
        _fail("shape", "connection and frame must be square of the same size")
    if not conn.A_d.is_polynomial():
        _fail("log poles", "the connection has non-logarithmic poles at a finite point")
    if conn.A_infinity_log.min_order_at(INF) < 0:
        _fail("log poles", "the connection has a non-logarithmic pole at infinity")
    if len(F.flag) != n:
        _fail("flag", f"expected {n} flag pieces, got {len(F.flag)}")
    for j, K in enumerate(F.flag):
        if K.shape != (n, n - j):
            _fail("flag", f"piece {j} has shape {K.shape}, expected {(n, n - j)}")
        if K.rank() != n - j:
            _fail("flag", f"piece {j} does not have rank {n - j}")
        if not is_saturated(K):
            _fail("flag", f"piece {j} is not a saturated sub-bundle")
        if j and not F.flag[j - 1].contains_columns(K):
            _fail("flag", f"piece {j} is not contained in piece {j - 1}")
    for j in range(1, n):
        image = conn.apply(F.flag[j])
        if not F.flag[j - 1].contains_columns(image):
            _fail("transversality", f"nabla maps piece {j} outside piece {j - 1}")
        if F.flag[j].contains_columns(image):
            _fail("kodaira-spencer", f"graded map at step {j} vanishes")
    degs = F.flag_degrees
    gr = [degs[j] - (degs[j + 1] if j + 1 < n else 0) for j in range(n)]
    tdeg = F.base.tangent_degree
    for j in range(1, n):
        if gr[j] + tdeg != gr[j - 1]:
            _fail("kodaira-spencer", f"graded map at step {j} is not an isomorphism (degrees {gr[j]} + {tdeg} != {gr[j - 1]})")
    if F.b.shape != (n, 1) or not F.flag[n - 1].contains_columns(F.b):
        _fail("eta", "b does not lie in the last flag piece")
    ratio = F.flag[n - 1].solve(F.b)[0, 0]
    if not ratio.is_constant() or ratio.is_zero():
        _fail("eta", "b is not a generator of the last flag piece")
    if degs[n - 1] != F.B.degree:
        _fail("eta", f"last flag piece has degree {degs[n - 1]}, B has degree {F.B.degree}")
    if F.det.n != n:
        _fail("determinant", f"determinant data has rank {F.det.n}")
    dE = F.eta_frame.det()
    if not dE.is_constant() or dE.is_zero():
        _fail("determinant", "b, nabla b, ... do not form a unimodular frame")
    if conn.A_d.trace() != F.det.omega0:
        _fail("determinant", "trace of the connection differs from the determinant connection")
    if F.degree != F.det.line().degree:
        _fail("determinant", f"bundle degree {F.degree} differs from {F.det.line().degree}")
    report = OperReport(n, F.degree, degs)
    if require_dormant:
        report.dormant = F.is_dormant()
        if not report.dormant:
            raise NotDormant("the oper has non-vanishing p-curvature")
        report.exponents = F.exponents()
    return report


# ---------------------------------------------------------------------------
# constructions


def standard_flag(p: int, n: int) -> tuple:
    eye = RatMatrix.identity(p, n)
    return tuple(eye.select_cols(range(n - j)) for j in range(n))


def _frame_from_generator(base: MarkedLine, A_d: RatMatrix, g0: RF) -> RatMatrix:
    """Infinity frame v_0 = g0 e_0, v_{j+1} = u nabla_d v_j (columns)."""
    p, n = base.p, A_d.nrows
    h, u = base.h_rf, base.u
    zero = RF.const(p, 0)
    v = RatMatrix.column(p, [g0] + [zero] * (n - 1))
    cols = [v]
    for _ in range(n - 1):
        v = (v.derive(h) + A_d @ v).scale(u)
        cols.append(v)
    out = cols[0]
    for c in cols[1:]:
        out = out.hstack(c)
    return out


def _to_rf(c, p: int) -> RF:
    if isinstance(c, RF):
        return c
    if isinstance(c, int):
        return RF.const(p, c)
    return RF(c)


def companion_oper(det: DeterminantData, coeffs: Sequence, validate: bool = False) -> OperData:
    """The oper with frame ``e_k = nabla^k b`` and ``nabla e_{n-1} = sum_k c_k e_k``.

    The flag is ``F^j = span(e_0, ..., e_{n-1-j})`` and the frame at infinity
    is generated from the generator of B at infinity by the log field there.
    """
    base, n, p = det.base, det.n, det.p
    if len(coeffs) != n:
        raise DomainError(f"need {n} coefficients, got {len(coeffs)}")
    zero = RF.const(p, 0)
    one = RF.const(p, 1)
    A = [[zero] * n for _ in range(n)]
    for k in range(n - 1):
        A[k + 1][k] = one
    for k, c in enumerate(coeffs):
        A[k][n - 1] = _to_rf(c, p)
    A_d = RatMatrix(p, A, n)
    G = _frame_from_generator(base, A_d, det.B.infinity_ratio)
    F = OperData(LogConnection(base, A_d, G), standard_flag(p, n), RatMatrix.column(p, [one] + [zero] * (n - 1)), det)
    if validate:
        oper_check(F)
    return F


def rank1_oper(det: DeterminantData) -> OperData:
    """A rank-one oper is just the line bundle B with its connection."""
    if det.n != 1:
        raise DomainError("rank1_oper needs determinant data of rank one")
    return companion_oper(det, [det.omega0], validate=True)


def build_DPsi(B: LineBundleDatum, validate: bool = True) -> OperData:
    """The canonical dormant rank-p oper attached to B.

    The affine frame is b, d b, ..., d^{p-1} b, with ``d^p = g d`` giving the
    companion matrix.  The flag is ``F^j = span(e_0, ..., e_{p-1-j})``.
    """
    base, p = B.base, B.p
    g = base.field.symbolic_power
    zero = RF.const(p, 0)
    one = RF.const(p, 1)
    A = [[zero] * p for _ in range(p)]
    for j in range(p - 1):
        A[j + 1][j] = one
    A[1][p - 1] = g
    A_d = RatMatrix(p, A, p)
    G = _frame_from_generator(base, A_d, B.infinity_ratio)
    conn = LogConnection(base, A_d, G)
    F = OperData(conn, standard_flag(p, p), RatMatrix.column(p, [one] + [zero] * (p - 1)), detdata.canonical(B))
    if validate:
        oper_check(F, require_dormant=True)
        full = ExponentMultiset(p, tuple(range(p)))
        for i, e in enumerate(F.exponents()):
            if e != full:
                raise OperAxiomFailure("exponents", f"exponents at {base.points[i]} are {e}, expected all of F_p")
    return F


# ---------------------------------------------------------------------------
# dualities


def _hcat(cols: Sequence[RatMatrix]) -> RatMatrix:
    out = cols[0]
    for c in cols[1:]:
        out = out.hstack(c)
    return out


def eta_tilde(F: OperData) -> RatMatrix:
    """Matrix of the surjection D^Psi_B -> F sending d^j b to nabla^j b (n x p)."""
    if not F.is_dormant():
        raise NotDormant("the surjection from D^Psi_B needs a dormant oper")
    p = F.p
    cols = [F.b]
    for _ in range(p - 1):
        cols.append(F.conn.apply(cols[-1]))
    E = _hcat(cols)
    if E.rank() != F.n:
        raise SaturationFailure("eta-tilde is not generically surjective")
    return E


def eta_tilde_via_ore(F: OperData) -> RatMatrix:
    """The same matrix as :func:`eta_tilde`, column by column from operator expansions.

    Column j is computed independently as sum_k M_k d^k(b) where
    (d + A)^j = sum_k M_k d^k, starting from the last column.
    """
    if not F.is_dormant():
        raise NotDormant("the surjection from D^Psi_B needs a dormant oper")
    p, h = F.p, F.base.h_rf
    derivs = [F.b]
    for _ in range(p - 1):
        derivs.append(derivs[-1].derive(h))
    cols = []
    for j in reversed(range(p)):
        coeffs = ore_power(F.conn.A_d, h, j)
        col = RatMatrix.zeros(p, F.n, 1)
        for k, M in enumerate(coeffs):
            col = col + M @ derivs[k]
        cols.append(col)
    return _hcat(cols[::-1])


def eta_tilde_is_horizontal(F: OperData, D: OperData, E: RatMatrix) -> bool:
    """Whether E intertwines the connections of D^Psi_B and F."""
    return E @ D.conn.A_d == E.derive(F.base.h_rf) + F.conn.A_d @ E


def dualize_triangle(F: OperData, D: OperData | None = None) -> OperData:
    """The kernel of D^Psi_B -> F as a dormant rank p-n oper."""
    p, n, base = F.p, F.n, F.base
    if n >= p:
        raise DomainError("the kernel construction needs n < p")
    if D is None:
        D = build_DPsi(F.B, validate=False)
    E = eta_tilde(F)
    if not eta_tilde_is_horizontal(F, D, E):
        raise SaturationFailure("eta-tilde is not horizontal")
    K = hermite_kernel_basis(E)
    m = p - n
    if K.ncols != m:
        raise SaturationFailure(f"kernel has rank {K.ncols}, expected {m}")
    A_ker = K.solve(D.conn.apply(K))
    if not A_ker.is_polynomial():
        raise SaturationFailure("kernel is not preserved by the connection")
    Q = saturate_at_infinity(D.conn.G, K)
    G_ker = K.solve(Q)
    conn = LogConnection(base, A_ker, G_ker)
    flag = [RatMatrix.identity(p, m)]
    for j in range(1, m):
        # K-coordinates of the part of Ker inside span(e_0, ..., e_{p-1-j})
        flag.append(hermite_kernel_basis(K.select_rows(range(p - j, p))))
    last = flag[m - 1]
    image = K @ last
    c = image[n, 0]
    if not c.is_constant() or c.is_zero() or any(not image[i, 0].is_zero() for i in range(n + 1, p)):
        raise SaturationFailure("last kernel piece does not project isomorphically onto T^n B")
    b = last.scale(c.inverse())
    out = OperData(conn, tuple(flag), b, detdata.triangle(F.det))
    return out


def dualize_nabla(F: OperData) -> OperData:
    """The dual oper: dual connection with the annihilator flag."""
    p, n, conn = F.p, F.n, F.conn
    dconn = conn.dual()
    flag = [RatMatrix.identity(p, n)]
    for j in range(1, n):
        flag.append(hermite_kernel_basis(F.flag[n - j].T()))
    k0 = flag[n - 1]
    top = F.eta_frame.select_cols([n - 1])
    s = (k0.T() @ top)[0, 0]
    if not s.is_constant() or s.is_zero():
        raise SaturationFailure("pairing of the dual generator with nabla^{n-1} b is not a unit")
    b = k0.scale(s.inverse())
    return OperData(dconn, tuple(flag), b, detdata.dual(F.det))


def star_oper(F: OperData, check: bool = True) -> OperData:
    """The rank p-n oper obtained by the kernel construction followed by dualizing."""
    out = dualize_nabla(dualize_triangle(F))
    if check:
        oper_check(out, require_dormant=True)
    return out


def expected_star_exponents(F: OperData) -> tuple[ExponentMultiset, ...]:
    """Exponents the star of F must have: complement, then negation."""
    return tuple(star_multiset(e) for e in F.exponents())


def expected_triangle_exponents(F: OperData) -> tuple[ExponentMultiset, ...]:
    return tuple(complement(e) for e in F.exponents())


def tensor_line_oper(F: OperData, L: LineConnection) -> OperData:
    """F tensored with a line bundle with log connection."""
    p, n = F.p, F.n
    eye = RatMatrix.identity(p, n)
    A = F.conn.A_d + eye.scale(L.omega)
    G = F.conn.G.scale(L.bundle.infinity_ratio)
    conn = LogConnection(F.base, A, G)
    return OperData(conn, F.flag, F.b, detdata.tensor(F.det, L))


# ---------------------------------------------------------------------------
# isomorphism


def find_isomorphism(F1: OperData, F2: OperData) -> RatMatrix | None:
    """An isomorphism of opers F1 -> F2 as a matrix in affine frames, or None.

    Opers with the same determinant data and compatible generators are
    rigid: any isomorphism sends nabla^k b1 to nabla^k b2, so the only
    candidate is E2 E1^{-1}.  It is accepted when it is a bundle
    isomorphism on both charts that intertwines connections and flags.
    """
    if F1.p != F2.p or F1.n != F2.n or F1.base != F2.base:
        return None
    if F1.det.B != F2.det.B or F1.det.omega0 != F2.det.omega0:
        return None
    E1, E2 = F1.eta_frame, F2.eta_frame
    if E1.det().is_zero() or E2.det().is_zero():
        return None
    alpha = E2 @ E1.inverse()
    if not alpha.is_polynomial():
        return None
    d = alpha.det()
    if not d.is_constant() or d.is_zero():
        return None
    at_inf = F2.conn.G.inverse() @ alpha @ F1.conn.G
    if at_inf.min_order_at(INF) < 0 or at_inf.det().order_at(INF) != 0:
        return None
    if alpha @ F1.conn.A_d != alpha.derive(F1.base.h_rf) + F2.conn.A_d @ alpha:
        return None
    for K1, K2 in zip(F1.flag, F2.flag):
        if not K2.contains_columns(alpha @ K1):
            return None
    return alpha


def opers_isomorphic(F1: OperData, F2: OperData) -> bool:
    return find_isomorphism(F1, F2) is not None


def unique_gl_pminus1(det1: DeterminantData, base: MarkedLine | None = None) -> OperData:
    """The dormant GL_{p-1} oper attached to rank-one determinant data.

    Its determinant data is the star of ``det1``.
    """
    if base is not None and base != det1.base:
        raise DomainError("determinant data lives on a different marked line")
    if not det1.is_dormant():
        raise NotDormant("determinant data must be dormant")
    return star_oper(rank1_oper(det1))
