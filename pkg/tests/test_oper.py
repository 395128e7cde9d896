from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doper.errors import NotDormant, OperAxiomFailure
from doper.fpcalc import ExponentMultiset, complement, multiset_shift
from doper.fpcalc import star as star_multiset
from doper.funcfield import INF, RF, RatMatrix
from doper.operengine import (
    MarkedLine,
    brute_force_sl2,
    build_DPsi,
    companion_oper,
    dualize_nabla,
    dualize_triangle,
    dump_oper,
    eta_tilde,
    eta_tilde_via_ore,
    find_isomorphism,
    load_oper,
    oper_check,
    opers_isomorphic,
    rank1_oper,
    star_oper,
    tensor_line_oper,
    unique_gl_pminus1,
)
from doper.operengine import detdata
from doper.operengine.base import LineBundleDatum, LineConnection
from doper.operengine.oper import eta_tilde_is_horizontal, expected_star_exponents


def log_degree(n: int, B: LineBundleDatum) -> int:
    """Degree of T^{n(n-1)/2} (x) B^n with the log tangent bundle."""
    return n * (n - 1) // 2 * B.base.tangent_degree + n * B.degree


def kernel_degree(p: int, n: int, B: LineBundleDatum) -> int:
    return log_degree(p, B) - log_degree(n, B)


def sample_bundles(base: MarkedLine):
    return [
        LineBundleDatum.tangent(base, 1),
        LineBundleDatum.trivial(base),
        LineBundleDatum(base, -1, ((0, 2), (INF, -1))),
    ]


# --- the canonical rank-p oper -------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_dpsi_is_a_dormant_oper_with_full_exponents(p):
    base = MarkedLine.standard(p)
    for B in sample_bundles(base):
        D = build_DPsi(B)
        report = oper_check(D, require_dormant=True)
        assert report.dormant
        full = ExponentMultiset(p, tuple(range(p)))
        assert all(e == full for e in D.exponents())
        assert D.degree == log_degree(p, B)


def test_dpsi_on_four_points():
    base = MarkedLine.parse(5, "0,1,2,inf")
    D = build_DPsi(LineBundleDatum.tangent(base, 1))
    assert D.is_dormant()
    assert D.degree == log_degree(5, D.B)


@pytest.mark.xfail(strict=True, reason="closed form assumes a tangent bundle of degree 2 - 2g")
def test_dpsi_degree_matches_non_log_closed_form(line3):
    B = LineBundleDatum.tangent(line3, 1)
    D = build_DPsi(B)
    p = 3
    assert D.degree == p * (p - 1) + p * B.degree


# --- rank one ------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.data())
def test_rank1_oper_exponents(p, data):
    base = MarkedLine.standard(p)
    a = tuple(data.draw(st.integers(0, p - 1)) for _ in range(3))
    F = rank1_oper(detdata.construct(base, 1, a))
    assert F.is_dormant()
    assert tuple(e.entries for e in F.exponents()) == tuple((v,) for v in a)
    oper_check(F, require_dormant=True)


# --- the map from D^Psi ----------------------------------------------------


def test_eta_tilde_of_dpsi_is_identity(line5):
    D = build_DPsi(LineBundleDatum.tangent(line5, 1))
    assert eta_tilde(D) == RatMatrix.identity(5, 5)


def rank_one_and_two_opers(p):
    base = MarkedLine.standard(p)
    opers = [rank1_oper(detdata.construct(base, 1, (1, 2, 0)))]
    opers += brute_force_sl2(p).opers[:3]
    return opers


@pytest.mark.parametrize("p", [3, 5])
def test_eta_tilde_is_surjective_horizontal_and_unique(p):
    for F in rank_one_and_two_opers(p):
        D = build_DPsi(F.B, validate=False)
        E = eta_tilde(F)
        assert E.rank() == F.n
        assert eta_tilde_is_horizontal(F, D, E)
        # a second connection-compatible map with the same value on the generator
        assert eta_tilde_via_ore(F) == E


def test_eta_tilde_needs_dormancy(line5):
    U = detdata.construct(line5, 2, (0, 0, 0))
    x = RF.x(5)
    F = companion_oper(U, [x, RF.const(5, 0)])
    assert not F.is_dormant()
    with pytest.raises(NotDormant):
        eta_tilde(F)


# --- kernel and dual --------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_kernel_of_rank_one_oper(p):
    base = MarkedLine.standard(p)
    U = detdata.construct(base, 1, (0, 1, 2 % p))
    F = rank1_oper(U)
    K = dualize_triangle(F)
    assert K.n == p - 1
    assert K.is_dormant()
    oper_check(K, require_dormant=True)
    assert K.degree == kernel_degree(p, 1, F.B)
    assert K.exponents() == tuple(complement(e) for e in F.exponents())


def test_kernel_of_twisted_line_at_p3():
    base = MarkedLine.standard(3)
    U = detdata.construct(base, 1, (0, 0, 0))
    L = LineConnection.from_divisor_twist(base, [(0, -1), (1, -1)])
    F = tensor_line_oper(rank1_oper(U), L)
    assert F.B.degree == -2
    K = dualize_triangle(F)
    assert K.n == 2
    assert K.degree == kernel_degree(3, 1, F.B)


def test_dual_twice_is_isomorphic(line5):
    F = brute_force_sl2(5).opers[0]
    back = dualize_nabla(dualize_nabla(F))
    oper_check(back, require_dormant=True)
    assert back.conn.A_d == F.conn.A_d
    assert opers_isomorphic(F, back)


@pytest.mark.parametrize("p", [3, 5])
def test_star_of_rank_one(p):
    base = MarkedLine.standard(p)
    F = rank1_oper(detdata.construct(base, 1, (1, 0, p - 1)))
    S = star_oper(F)
    assert S.n == p - 1
    assert S.exponents() == expected_star_exponents(F)
    assert S.degree == -kernel_degree(p, 1, F.B)
    assert S.det == detdata.star(F.det)
    back = star_oper(S)
    assert back.det == F.det
    assert find_isomorphism(F, back) is not None


def test_star_of_rank_two_is_involutive():
    for F in brute_force_sl2(5).opers:
        S = star_oper(F)
        assert S.exponents() == tuple(star_multiset(e) for e in F.exponents())
        assert opers_isomorphic(star_oper(S), F)


def test_star_and_line_tensor_observables():
    p = 5
    base = MarkedLine.standard(p)
    L = LineConnection.from_divisor_twist(base, [(1, 1)]).tensor(LineConnection.frobenius_tangent(base, 1))
    F = brute_force_sl2(p).opers[1]
    lhs = star_oper(tensor_line_oper(F, L))
    rhs = tensor_line_oper(star_oper(F), L.dual())
    assert lhs.exponents() == rhs.exponents()
    assert lhs.degree == rhs.degree
    assert lhs.n == rhs.n
    assert lhs.det == rhs.det


def test_star_and_line_tensor_isomorphic_at_p3():
    p = 3
    base = MarkedLine.standard(p)
    F = rank1_oper(detdata.construct(base, 1, (0, 1, 2)))
    L = LineConnection.from_divisor_twist(base, [(0, 1)])
    lhs = star_oper(tensor_line_oper(F, L))
    rhs = tensor_line_oper(star_oper(F), L.dual())
    assert opers_isomorphic(lhs, rhs)


def test_tensor_shifts_exponents(line5):
    F = brute_force_sl2(5).opers[2]
    L = LineConnection.from_divisor_twist(line5, [(0, -2)])
    G = tensor_line_oper(F, L)
    oper_check(G, require_dormant=True)
    shifts = L.to_connection().all_exponents()
    for e, s, out in zip(F.exponents(), shifts, G.exponents()):
        assert out == multiset_shift(e, s.entries[0])


# --- uniqueness in rank p - 1 ------------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_rank_p_minus_one_oper_is_unique(p):
    base = MarkedLine.standard(p)
    U = detdata.construct(base, 1, (2 % p, 0, 1))
    first = unique_gl_pminus1(U)
    assert first.n == p - 1
    assert first.exponents() == tuple(star_multiset(e) for e in U.exponents())
    other = unique_gl_pminus1(detdata.construct(base, 1, (2 % p, 0, 1), st=(1, p)))
    L = LineConnection.frobenius_tangent(base, 1)
    assert opers_isomorphic(other, tensor_line_oper(first, L.dual()))


# --- oper axiom failures -----------------------------------------------------


def test_oper_check_rejects_broken_flag(line5):
    F = brute_force_sl2(5).opers[0]
    eye = RatMatrix.identity(5, 2)
    bad = dataclasses.replace(F, flag=(eye, eye.select_cols([1])))
    with pytest.raises(OperAxiomFailure) as exc:
        oper_check(bad)
    assert exc.value.axiom in ("transversality", "kodaira-spencer", "eta")


def test_oper_check_rejects_non_log_pole(line5):
    F = brute_force_sl2(5).opers[0]
    x = RF.x(5)
    A = F.conn.A_d + RatMatrix(5, [[1 / x, 0], [0, 0]])
    bad = dataclasses.replace(F, conn=dataclasses.replace(F.conn, A_d=A))
    with pytest.raises(OperAxiomFailure) as exc:
        oper_check(bad)
    assert exc.value.axiom == "log poles"


def test_oper_check_rejects_scaled_generator(line5):
    F = brute_force_sl2(5).opers[0]
    x = RF.x(5)
    bad = dataclasses.replace(F, b=F.b.scale(x))
    with pytest.raises(OperAxiomFailure) as exc:
        oper_check(bad)
    assert exc.value.axiom == "eta"


def test_oper_check_rejects_wrong_determinant(line5):
    F = brute_force_sl2(5).opers[0]
    x = RF.x(5)
    det = dataclasses.replace(F.det, omega0=F.det.omega0 + x)
    with pytest.raises(OperAxiomFailure) as exc:
        oper_check(dataclasses.replace(F, det=det))
    assert exc.value.axiom == "determinant"


def test_oper_check_requires_dormancy_when_asked(line5):
    U = detdata.construct(line5, 2, (0, 0, 0))
    F = companion_oper(U, [RF.x(5), RF.const(5, 0)], validate=True)
    with pytest.raises(NotDormant):
        oper_check(F, require_dormant=True)


# --- serialization -------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_serialization_round_trip(p):
    base = MarkedLine.standard(p)
    for F in [build_DPsi(LineBundleDatum.tangent(base, 1)), star_oper(rank1_oper(detdata.construct(base, 1, (1, 0, 0))))]:
        text = dump_oper(F)
        G = load_oper(text)
        assert dump_oper(G) == text
        assert opers_isomorphic(F, G)
        oper_check(G, require_dormant=True)


@pytest.mark.xfail(strict=True, reason="closed form assumes a tangent bundle of degree 2 - 2g")
def test_kernel_degree_matches_non_log_closed_form(line3):
    F = rank1_oper(detdata.construct(line3, 1, (0, 0, 0)))
    K = dualize_triangle(F)
    p, n = 3, 1
    assert K.degree == (p - n) * (p + n - 1 + F.B.degree)
