from __future__ import annotations

import importlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doper import _kernels_py, kernels

try:
    _compiled = importlib.import_module("doper._kernels")
except ImportError:  # extension not built in this environment
    _compiled = None

BACKENDS = [_kernels_py] + ([_compiled] if _compiled is not None else [])
needs_compiled = pytest.mark.skipif(_compiled is None, reason="compiled kernels not built")

coeffs = st.lists(st.integers(0, 12), max_size=9)


def test_backend_name_is_reported():
    assert kernels.BACKEND in ("python", "cython")


@pytest.mark.parametrize("impl", BACKENDS)
def test_poly_mul_small(impl):
    # (x + 1)^2 = x^2 + 2x + 1 over F_5
    assert impl.poly_mul([1, 1], [1, 1], 5) == [1, 2, 1]


@pytest.mark.parametrize("impl", BACKENDS)
def test_poly_divmod_identity(impl):
    a, b = [3, 0, 1, 4], [2, 1]
    q, r = impl.poly_divmod(a, b, 7)
    back = impl.poly_add(impl.poly_mul(q, b, 7), r, 7)
    assert back == [3, 0, 1, 4]
    assert len(r) < len(b)


@needs_compiled
@settings(max_examples=300, deadline=None)
@given(coeffs, coeffs, st.sampled_from([3, 5, 7, 13]))
def test_compiled_matches_python(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    py, cy = _kernels_py, _compiled
    assert py.poly_add(a, b, p) == cy.poly_add(a, b, p)
    assert py.poly_sub(a, b, p) == cy.poly_sub(a, b, p)
    assert py.poly_mul(a, b, p) == cy.poly_mul(a, b, p)
    if any(b):
        assert py.poly_divmod(a, b, p) == cy.poly_divmod(a, b, p)
    for x in range(p):
        assert py.poly_eval(a, x, p) == cy.poly_eval(a, x, p)


@needs_compiled
@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-(10**30), 10**30), min_size=5, max_size=5), st.lists(st.integers(-(10**30), 10**30), min_size=5, max_size=5))
def test_cyclic_mul_matches_on_big_integers(a, b):
    assert _kernels_py.cyclic_mul(a, b) == _compiled.cyclic_mul(a, b)


def test_cyclic_mul_is_group_ring_product():
    # x^2 * x^4 = x^6 = x^1 in Z[C_5]
    a = [0, 0, 1, 0, 0]
    b = [0, 0, 0, 0, 1]
    assert kernels.cyclic_mul(a, b) == [0, 1, 0, 0, 0]


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_mask_star_matches_set_definition(impl, p):
    for m in range(1 << p):
        members = {j for j in range(p) if m >> j & 1}
        expected = {(-j) % p for j in range(p) if j not in members}
        got = impl.mask_star(m, p)
        assert {j for j in range(p) if got >> j & 1} == expected


@pytest.mark.parametrize("impl", BACKENDS)
def test_mask_canon_is_min_rotation(impl):
    p = 7
    for m in range(1 << p):
        c = impl.mask_canon(m, p)
        assert c == min(impl.mask_rot(m, a, p) for a in range(p))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_scans_agree_between_backends(p):
    for impl in BACKENDS:
        total, bad = impl.involution_scan(p)
        assert (total, bad) == (1 << p, 0)
    results = {impl.necklace_scan(p) for impl in BACKENDS}
    assert len(results) == 1
    orbits, bad_shift, bad_orbit = results.pop()
    assert bad_shift == 0 and bad_orbit == 0
    # number of binary necklaces of prime length p
    assert orbits == (2**p - 2) // p + 2


def test_fallback_is_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, DOPER_PURE_PYTHON="1")
    code = "from doper import BACKEND; from doper.verlinde import verlinde_degree; print(BACKEND, verlinde_degree(7, 2, 2))"
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True, text=True)
    assert out.stdout.split() == ["python", "14"]
