import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from purbound.linalg import EigenSolverError, hermitian_eig, singular_values


def random_hermitian(rng, batch, n=4):
    a = rng.normal(size=(batch, n, n)) + 1j * rng.normal(size=(batch, n, n))
    return a + np.conj(np.swapaxes(a, 1, 2))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_hermitian_eig_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, 3)
    w, v = hermitian_eig(a)
    ref = np.linalg.eigvalsh(a)
    np.testing.assert_allclose(np.sort(w, axis=1), ref, atol=1e-11)
    np.testing.assert_allclose(a @ v, v * w[:, None, :], atol=1e-11)
    eye = np.conj(np.swapaxes(v, 1, 2)) @ v
    np.testing.assert_allclose(eye, np.broadcast_to(np.eye(4), eye.shape), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_singular_values_match_numpy(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2, n, n)) + 1j * rng.normal(size=(2, n, n))
    np.testing.assert_allclose(singular_values(a), np.linalg.svd(a, compute_uv=False), atol=1e-11)


def test_single_matrix_and_input_untouched():
    a = np.diag([3.0, 1.0, 2.0, 0.5]).astype(complex)
    a[0, 1] = a[1, 0] = 0.25
    keep = a.copy()
    w, v = hermitian_eig(a)
    assert w.shape == (4,) and v.shape == (4, 4)
    np.testing.assert_array_equal(a, keep)
    sv = singular_values(a)
    assert np.all(np.diff(sv) <= 0)
    np.testing.assert_array_equal(a, keep)


def test_tiny_singular_values_keep_relative_accuracy():
    a = np.diag([1.0, 1e-9, 1e-13, 0.0]).astype(complex)
    q, _ = np.linalg.qr(np.random.default_rng(1).normal(size=(4, 4)))
    sv = singular_values(q @ a @ q.T)
    np.testing.assert_allclose(sv, [1.0, 1e-9, 1e-13, 0.0], atol=1e-15)


def test_deterministic():
    rng = np.random.default_rng(7)
    a = random_hermitian(rng, 5)
    w1, v1 = hermitian_eig(a)
    w2, v2 = hermitian_eig(a)
    assert np.array_equal(w1, w2) and np.array_equal(v1, v2)


def test_iteration_cap_raises_with_diagnostics():
    rng = np.random.default_rng(3)
    with pytest.raises(EigenSolverError) as info:
        hermitian_eig(random_hermitian(rng, 1), max_iter=1)
    assert info.value.iterations >= 1 and info.value.residual > 0
