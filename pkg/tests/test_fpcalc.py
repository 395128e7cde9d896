from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doper.errors import DomainError, NotDistinctClass, RepeatedEntries
from doper.fpcalc import (
    ExponentMultiset,
    RadiusClass,
    check_prime,
    complement,
    decode_multiset,
    decode_radius,
    enumerate_radii,
    exponent_lift,
    f_set_embeddings,
    iota,
    multiset_shift,
    negate,
    radius_canonicalize,
    radius_star,
    shift_vector,
    star,
    star_vector,
    w_inverse,
    w_label,
)

PRIMES = [3, 5, 7, 11, 13]


@st.composite
def subsets(draw, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    entries = draw(st.sets(st.integers(0, p - 1)))
    return ExponentMultiset(p, tuple(entries))


def test_check_prime_rejects_bad_values():
    for bad in (1, 2, 4, 9, 65537, -3):
        with pytest.raises(DomainError):
            check_prime(bad)
    assert check_prime(65521) == 65521


def test_multiset_is_sorted_mod_p():
    assert ExponentMultiset(5, (7, -1, 0)).entries == (0, 2, 4)


def test_encode_decode_round_trip():
    m = ExponentMultiset(7, (3, 1, 1))
    assert m.encode() == "p=7:[1,1,3]"
    assert decode_multiset(m.encode()) == m
    assert decode_radius("p=5:[3,4]") == RadiusClass(5, (0, 1))


def test_star_examples():
    assert star(ExponentMultiset(5, (0, 1))).entries == (1, 2, 3)
    assert star(ExponentMultiset(3, ())).entries == (0, 1, 2)
    assert star(ExponentMultiset(3, (0, 1, 2))).entries == ()


def test_complement_rejects_repeats():
    with pytest.raises(RepeatedEntries):
        complement(ExponentMultiset(5, (1, 1)))


@settings(max_examples=200)
@given(subsets())
def test_star_is_involution(tau):
    assert star(star(tau)) == tau
    assert len(star(tau)) == tau.p - len(tau)


@settings(max_examples=200)
@given(subsets(), st.integers(-50, 50))
def test_star_turns_shift_into_opposite_shift(tau, a):
    assert star(multiset_shift(tau, a)) == multiset_shift(star(tau), -a)


@settings(max_examples=100)
@given(subsets())
def test_negate_is_involution(tau):
    assert negate(negate(tau)) == tau


def test_vector_versions():
    taus = (ExponentMultiset(5, (0,)), ExponentMultiset(5, (1, 2)))
    assert shift_vector(taus, (1, 2)) == (ExponentMultiset(5, (1,)), ExponentMultiset(5, (3, 4)))
    assert star_vector(star_vector(taus)) == taus
    with pytest.raises(DomainError):
        shift_vector(taus, (1,))


def test_radius_canonicalize_picks_lexicographic_minimum():
    assert radius_canonicalize(ExponentMultiset(7, (3, 5))).rep == (0, 2)
    assert radius_canonicalize(ExponentMultiset(5, (1, 4))).rep == (0, 2)


def test_enumerate_radii_counts():
    assert len(enumerate_radii(5, 2, distinct_only=True)) == 2
    assert len(enumerate_radii(7, 2, distinct_only=True)) == 3
    # classes of 3-subsets of F_7 up to rotation: C(7,3)/7
    assert len(enumerate_radii(7, 3, distinct_only=True)) == 5
    # all classes of 2-multisets of F_5: (5 + C(5,2)) / 5
    assert len(enumerate_radii(5, 2)) == 3


def test_exponent_lift_has_requested_sum():
    rho = RadiusClass(7, (0, 1, 3))
    for a in range(7):
        lift = exponent_lift(rho, a)
        assert sum(lift.entries) % 7 == a
        assert radius_canonicalize(lift) == rho


def test_radius_star_examples():
    assert radius_star(RadiusClass(5, (0, 1))).rep == (0, 1, 2)
    with pytest.raises(NotDistinctClass):
        radius_star(RadiusClass(5, (0, 0)))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_radius_star_is_involution_on_distinct_classes(p):
    for n in range(2, p - 1):
        for rho in enumerate_radii(p, n, distinct_only=True):
            back = radius_star(radius_star(rho))
            assert back == rho
            assert radius_star(rho).n == p - n


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_label_embeddings_match_under_star(p):
    labels, iota_map, w_map = f_set_embeddings(p)
    assert len(set(w_map.values())) == len(labels)
    for a in labels:
        assert radius_star(w_map[a]) == iota_map[a]
        assert w_inverse(w_label(p, a)) == a
        assert iota(p, a).n == p - 2


def test_w_labels_cover_distinct_rank_two_classes():
    for p in (5, 7, 11):
        assert set(w_label(p, a) for a in range((p - 1) // 2)) == set(enumerate_radii(p, 2, distinct_only=True))
