from __future__ import annotations

import random
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doper.errors import DomainError, NoUnit, NotAssociative
from doper.fpcalc import RadiusClass, enumerate_radii, iota, radius_star, w_label
from doper.fusion import (
    ThreePointTable,
    build_fusion_ring,
    fusion_ring,
    genus_degree,
    sl2_table,
    sl2_three_point,
    table_for,
    transport_star,
    verify_factorization,
)
from doper.operengine import brute_force_sl2_count

SQRT5 = mpmath.sqrt(5)


def test_three_point_examples():
    assert sl2_three_point(5, 0, 0, 0) == 1
    assert sl2_three_point(5, 1, 0, 0) == 0
    assert sl2_three_point(5, 1, 1, 1) == 1
    with pytest.raises(DomainError):
        sl2_three_point(5, 2, 0, 0)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_table_is_symmetric_and_matches_labels(p):
    T = sl2_table(p)
    m = len(T.basis)
    for i, j, k in product(range(m), repeat=3):
        v = T.N(i, j, k)
        assert v == T.N(j, k, i) == T.N(k, j, i)
        assert v == sl2_three_point(p, i, j, k)
    assert T.basis == tuple(w_label(p, a) for a in range(m))


def test_transport_at_p5():
    T = sl2_table(5)
    S = transport_star(T)
    assert S.n == 3
    assert S.ordered_mass() == T.ordered_mass() == 5
    assert transport_star(S) == T


@pytest.mark.parametrize("p", [5, 7, 11])
def test_transported_table_is_indexed_by_iota(p):
    S = table_for(p, p - 2)
    for a, rho in enumerate(S.basis):
        assert rho == iota(p, a)
    for i, j, k in product(range(len(S.basis)), repeat=3):
        assert S.N(i, j, k) == sl2_three_point(p, i, j, k)


def test_table_only_for_supported_ranks():
    with pytest.raises(DomainError):
        table_for(11, 4)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_json_round_trip_is_byte_exact(p):
    for n in {2, p - 2}:
        if n < 1:
            continue
        T = table_for(p, n)
        text = T.to_json()
        again = ThreePointTable.from_json(text)
        assert again == T
        assert again.to_json() == text


def test_fibonacci_ring():
    R = fusion_ring(5)
    assert R.rank == 2
    assert R.unit == 0
    assert R.product(1, 1) == [1, 1]
    assert R.casimir == [2, 1]
    chis = sorted(float(row[1]) for row in R.characters.values)
    assert chis[0] == pytest.approx(float((1 - SQRT5) / 2), abs=1e-10)
    assert chis[1] == pytest.approx(float((1 + SQRT5) / 2), abs=1e-10)
    cas = sorted(float(R.characters.evaluate(c, R.casimir)) for c in range(2))
    assert cas[0] == pytest.approx(float((5 - SQRT5) / 2), abs=1e-10)
    assert cas[1] == pytest.approx(float((5 + SQRT5) / 2), abs=1e-10)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_rings_have_unit_and_are_associative(p):
    for n in {2, p - 2}:
        R = fusion_ring(p, n)
        assert R.rank == (p - 1) // 2
        assert R.casimir[R.unit] >= 1
        assert all(c >= 0 for c in R.casimir)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_characters_are_multiplicative_and_casimir_nonzero(p):
    R = fusion_ring(p)
    table = R.characters
    assert len(table) == R.rank
    with mpmath.workdps(table.dps):
        for c, row in enumerate(table.values):
            assert abs(row[R.unit] - 1) < 1e-20
            assert abs(table.evaluate(c, R.casimir)) > 1e-6
            for i, j in product(range(R.rank), repeat=2):
                lhs = table.evaluate(c, R.product(i, j))
                assert abs(lhs - row[i] * row[j]) < 1e-20


def test_build_rejects_bad_tables():
    basis = (RadiusClass(7, (0, 1)), RadiusClass(7, (0, 2)))
    with pytest.raises(NoUnit):
        build_fusion_ring(ThreePointTable(7, 2, basis, {(1, 1, 1): 1}))
    basis3 = basis + (RadiusClass(7, (0, 3)),)
    # unit e0, e1 e1 = e2 e2 = e0, e1 e2 = 0: (e1 e2) e2 = 0 but e1 (e2 e2) = e1
    values = {(0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1}
    with pytest.raises(NotAssociative):
        build_fusion_ring(ThreePointTable(7, 2, basis3, values))


def test_genus_degree_examples():
    R = fusion_ring(5)
    assert genus_degree(R, 2) == 5
    w0, w1 = w_label(5, 0), w_label(5, 1)
    assert genus_degree(R, 0, [w0, w0, w0]) == 1
    assert genus_degree(R, 0, [w1, w1, w1, w1]) == 2
    assert genus_degree(R, 0, [w1, w1, w1, w1], method="factorization") == 2
    with pytest.raises(DomainError):
        genus_degree(R, 0, [w0, w0])
    with pytest.raises(DomainError):
        genus_degree(R, 1, [w0], method="factorization")


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_kernel_property(p):
    R = fusion_ring(p)
    repeated = RadiusClass(p, (0, 0))
    w0 = w_label(p, 0)
    for g in (0, 1, 2):
        assert genus_degree(R, g, [repeated, w0, w0]) == 0


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_genus_zero_three_points_reproduce_table(p):
    R = fusion_ring(p)
    labels = range(R.rank)
    for a, b, c in product(labels, repeat=3):
        radii = [w_label(p, x) for x in (a, b, c)]
        assert genus_degree(R, 0, radii) == sl2_three_point(p, a, b, c)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_degree_duality_under_star(p):
    R, S = fusion_ring(p, 2), fusion_ring(p, p - 2)
    rng = random.Random(p)
    classes = enumerate_radii(p, 2)
    for g in range(4):
        for r in range(5):
            if g == 0 and r < 3:
                continue
            for _ in range(5):
                radii = [rng.choice(classes) for _ in range(r)]
                starred = [radius_star(x) if x in R.basis else RadiusClass(p, (0,) * (p - 2)) for x in radii]
                assert genus_degree(R, g, radii) == genus_degree(S, g, starred)


@pytest.mark.parametrize("p", [5, 7])
def test_genus_zero_matches_brute_force(p):
    R = fusion_ring(p)
    classes = enumerate_radii(p, 2)
    for triple in product(classes, repeat=3):
        assert genus_degree(R, 0, list(triple)) == brute_force_sl2_count(p, triple)


def test_factorization_examples():
    R5, R7 = fusion_ring(5), fusion_ring(7)
    w1 = w_label(5, 1)
    assert verify_factorization(R5, 0, 0, [w1, w1], [w1, w1])
    assert verify_factorization(R7, 0, 2, [w_label(7, 0), w_label(7, 1), w_label(7, 1)], [])
    w0 = w_label(5, 0)
    assert verify_factorization(R5, 1, 1, [w0], [w0])


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.data())
def test_factorization_identity(p, data):
    R = fusion_ring(p)
    g1 = data.draw(st.integers(0, 2))
    g2 = data.draw(st.integers(0, 2))
    x = data.draw(st.lists(st.integers(0, R.rank - 1), min_size=max(0, 2 - 2 * g1), max_size=3))
    y = data.draw(st.lists(st.integers(0, R.rank - 1), min_size=max(0, 2 - 2 * g2), max_size=3))
    assert verify_factorization(R, g1, g2, x, y)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.data())
def test_genus_zero_methods_agree(p, data):
    R = fusion_ring(p)
    idx = data.draw(st.lists(st.integers(0, R.rank - 1), min_size=3, max_size=6))
    assert genus_degree(R, 0, idx) == genus_degree(R, 0, idx, method="factorization")
