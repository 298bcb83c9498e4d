import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from usurycap import kernels
from usurycap import _pykernels

ints = st.integers(-(10**30), 10**30)
cy = kernels.BACKENDS.get("cython")
needs_cython = pytest.mark.skipif(cy is None, reason="compiled kernels not built")


def test_fallback_selected_or_compiled():
    assert kernels.BACKEND in kernels.BACKENDS
    assert kernels.homog_eval is kernels.BACKENDS[kernels.BACKEND].homog_eval


def test_python_values():
    # 1 - 3x + 2x^2 at 1/2 -> 0; homogeneous form at 1/3 -> 9 - 9 + 2 = 2
    assert _pykernels.homog_eval([1, -3, 2], 1, 2) == 0
    assert _pykernels.homog_eval([1, -3, 2], 1, 3) == 2
    assert _pykernels.sign_variations([1, 0, -2, 0, 3, 4]) == 2
    assert _pykernels.chain_variations([[1, 1], [-1]], 0, 1) == 1


@needs_cython
@given(st.lists(ints, max_size=30), st.integers(-(10**6), 10**6), st.integers(1, 10**6))
def test_homog_eval_parity(coeffs, num, den):
    assert cy.homog_eval(coeffs, num, den) == _pykernels.homog_eval(coeffs, num, den)


@needs_cython
@given(st.lists(ints, max_size=40))
def test_sign_variations_parity(values):
    assert cy.sign_variations(values) == _pykernels.sign_variations(values)


@needs_cython
@given(st.lists(st.lists(ints, min_size=1, max_size=8), max_size=8), st.integers(-50, 50), st.integers(1, 50))
def test_chain_variations_parity(chain, num, den):
    assert cy.chain_variations(chain, num, den) == _pykernels.chain_variations(chain, num, den)


@needs_cython
@given(
    st.lists(st.tuples(st.floats(0, 20), st.floats(-1e6, 1e6)), min_size=1, max_size=12),
    st.lists(st.floats(0, 10), min_size=1, max_size=50),
)
def test_npv_grid_parity(pairs, grid):
    t = np.array([p[0] for p in pairs])
    a = np.array([p[1] for p in pairs])
    s = np.array(grid)
    np.testing.assert_allclose(cy.npv_grid(t, a, s), _pykernels.npv_grid(t, a, s), rtol=1e-12, atol=1e-9)
