import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from specind import _kernels
from specind.errors import DetailedBalanceError, NonSymmetricError
from specind.levels import WalkKernel
from specind.numerics import Spectrum, gap, multiset_match, reversible_spectrum, sym_eigen


def _kernel(P, pi):
    return WalkKernel(np.asarray(P, float), list(range(len(pi))), None, np.asarray(pi, float), True, "t")


@pytest.mark.parametrize("m, expected", [
    (np.eye(3), [1, 1, 1]),
    ([[0, 1], [1, 0]], [1, -1]),
    ([[1, -0.5], [-0.5, 1]], [1.5, 0.5]),
])
def test_sym_eigen_small(m, expected):
    assert np.allclose(sym_eigen(np.array(m, float)).eigenvalues, expected, atol=1e-13)


def test_sym_eigen_rejects_nonsymmetric():
    with pytest.raises(NonSymmetricError):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


def _sym(n, seed):
    a = np.random.default_rng(seed).standard_normal((n, n))
    return (a + a.T) / 2


@pytest.mark.parametrize("name", sorted(_kernels.backends()))
@pytest.mark.parametrize("n", [1, 2, 5, 17, 40])
def test_jacobi_matches_lapack_on_both_backends(name, n):
    m = _sym(n, n)
    w, v, sweeps = _kernels.backends()[name].jacobi_eigh(m.copy(), 1e-13, 100)[:3]
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(m), atol=1e-10)
    # eigenvectors are orthonormal and diagonalise m
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-10)
    assert np.allclose(m @ v, v * w, atol=1e-9)


def test_backends_agree():
    bk = _kernels.backends()
    if len(bk) < 2:
        pytest.skip("compiled core not built")
    m = _sym(30, 7)
    a = np.sort(bk["python"].jacobi_eigh(m.copy(), 1e-13, 100)[0])
    b = np.sort(bk["compiled"].jacobi_eigh(m.copy(), 1e-13, 100)[0])
    assert np.max(np.abs(a - b)) < 1e-11


sym_mats = st.integers(1, 12).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-10, 10, allow_nan=False, allow_subnormal=False)))


@given(sym_mats)
def test_trace_equals_eigenvalue_sum(a):
    m = (a + a.T) / 2
    s = sym_eigen(m)
    assert abs(s.eigenvalues.sum() - np.trace(m)) <= 1e-8 * max(1.0, np.abs(m).sum())
    assert np.all(np.diff(s.eigenvalues) <= 0)
    assert np.allclose(s.eigenvalues, np.linalg.eigvalsh(m)[::-1], atol=1e-8 * max(1.0, np.abs(m).max()))


def _random_reversible(n, seed):
    rng = np.random.default_rng(seed)
    w = rng.random((n, n)) + 0.05
    w = (w + w.T) / 2
    pi = w.sum(1) / w.sum()
    return w / w.sum(1, keepdims=True), pi


@given(st.integers(2, 10), st.integers(0, 10**6))
def test_reversible_spectrum_similarity_invariance(n, seed):
    P, pi = _random_reversible(n, seed)
    s = reversible_spectrum(_kernel(P, pi))
    direct = np.sort(np.linalg.eigvals(P).real)[::-1]
    assert multiset_match(s.eigenvalues, direct) < 1e-8
    assert abs(s.eigenvalues.sum() - np.trace(P)) < 1e-8
    # returned eigenvectors are right eigenvectors of P
    assert np.allclose(P @ s.eigenvectors, s.eigenvectors * s.eigenvalues, atol=1e-8)


def test_reversible_spectrum_examples(edge):
    from specind.levels import local_walk
    assert np.allclose(reversible_spectrum(_kernel(np.eye(3), [1 / 3] * 3)).eigenvalues, 1)
    assert np.allclose(reversible_spectrum(_kernel([[0, 1], [1, 0]], [0.5, 0.5])).eigenvalues, [1, -1])
    assert np.allclose(reversible_spectrum(local_walk(edge)).eigenvalues, [1, 0.5, -0.5, -1], atol=1e-12)


def test_reversible_spectrum_rejects_unbalanced():
    P = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], float)
    with pytest.raises(DetailedBalanceError):
        reversible_spectrum(_kernel(P, [1 / 3] * 3))


def _spec(vals):
    return Spectrum(np.array(vals, float), 0.0, None, 0)


def test_gap_examples():
    g = gap(_spec([1, 0.5, -0.5, -1]))
    assert (g.gamma, g.absolute_gamma, g.lambda_star) == pytest.approx((0.5, 0.0, 1.0))
    g = gap(_spec([1, 0]))
    assert g.gamma == 1 and g.absolute_gamma == 1
    assert gap(_spec([1, 0.75, 0.25, 0])).gamma == pytest.approx(0.25)


def test_gap_reports_unsnapped_values():
    g = gap(_spec([1, 1 - 1e-11, 0.2]))
    assert g.reducible
    assert g.lambda_2 == 1 - 1e-11


def test_multiset_match():
    assert multiset_match([1, 2], [2, 1]) == 0
    assert multiset_match([1, 2], [1]) == np.inf
    assert multiset_match([1.0, 2.0], [1.0, 2.5]) == pytest.approx(0.5)
