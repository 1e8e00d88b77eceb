from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_hardcore
from specind.generators import cycle_graph, empty_graph, erdos_renyi, path_graph
from specind.gibbs import Graph, Pinning, build_hardcore, enumerate_pinnings
from specind.influence import (covariance_matrix, influence_matrix, influence_spectrum, scaled_covariance,
                               spectral_independence)


def brute_influence(graph, lam, pinning):
    """Psi over free vertices straight from conditional probabilities of the enumerated table."""
    table = {c: p for c, p in brute_hardcore(graph, lam).items() if all(c[v] == s for v, s in pinning)}
    pinned = {v for v, _ in pinning}

    def pr(cond, j):
        rows = {c: p for c, p in table.items() if all(c[v] == s for v, s in cond)}
        tot = sum(rows.values())
        return sum(p for c, p in rows.items() if c[j] == 1) / tot

    free = [v for v in range(graph.n) if v not in pinned and len({c[v] for c in table}) == 2]
    return free, [[Fraction(1) if i == j else pr([(i, 1)], j) - pr([(i, 0)], j) for j in free] for i in free]


def power_lambda_max(m, iters=4000):
    """Dominant eigenvalue by plain power iteration from a generic start (positive spectrum assumed)."""
    x = np.random.default_rng(0).random(len(m)) + 0.1
    for _ in range(iters):
        x = m @ x
        x /= np.linalg.norm(x)
    return float(x @ (m @ x) / (x @ x))


def test_edge_influence_and_covariance(edge):
    psi = influence_matrix(edge)
    assert psi.exact == [[1, Fraction(-1, 2)], [Fraction(-1, 2), 1]]
    cov = covariance_matrix(edge)
    assert cov.exact == [[Fraction(2, 9), Fraction(-1, 9)], [Fraction(-1, 9), Fraction(2, 9)]]
    assert np.allclose(influence_spectrum(psi, edge).eigenvalues, [1.5, 0.5], atol=1e-13)


def test_path3_influence(path3):
    psi = influence_matrix(path3)
    assert psi.exact[0][2] == Fraction(1, 6)
    assert psi.exact[0][1] == Fraction(-1, 3)


def test_product_distribution(product3):
    psi = influence_matrix(product3)
    assert np.array_equal(psi.entries, np.eye(3))
    cov = covariance_matrix(product3)
    assert np.count_nonzero(cov.entries - np.diag(np.diag(cov.entries))) == 0
    assert np.allclose(influence_spectrum(psi, product3).eigenvalues, 1)
    assert spectral_independence(product3).eta == 0


def test_single_free_vertex(path3):
    tau = Pinning({0: 0, 1: 0})
    cov = covariance_matrix(path3, tau)
    assert cov.free_vertices == (2,)
    assert cov.exact == [[Fraction(1, 2) * Fraction(1, 2)]]
    assert np.allclose(influence_spectrum(influence_matrix(path3, tau), path3, tau).eigenvalues, [1])


def test_frozen_vertices_removed(edge):
    psi = influence_matrix(edge, {0: 1})
    assert psi.free_vertices == () and psi.frozen == {1: 0}
    assert psi.degenerate


def test_eta_edge_and_witness(edge):
    rep = spectral_independence(edge)
    assert rep.eta == pytest.approx(0.5, abs=1e-12)
    assert rep.witness_pinning == Pinning()
    doc = rep.to_json()
    assert set(doc) >= {"eta", "b", "witness_pinning", "per_level_max"}


def test_eta_path3_against_power_iteration(path3):
    rep = spectral_independence(path3)
    cov = covariance_matrix(path3)
    lam = power_lambda_max(scaled_covariance(cov).entries)
    assert rep.eta == pytest.approx(lam - 1, abs=1e-8)


graphs5 = st.integers(2, 5).flatmap(lambda n: st.integers(0, 10**6).map(lambda s: erdos_renyi(n, 0.5, s)))
lams = st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(2)])


@given(graphs5, lams, st.data())
def test_influence_matches_brute_force(g, lam, data):
    s = build_hardcore(g, lam)
    k = data.draw(st.integers(0, g.n))
    tau = data.draw(st.sampled_from(enumerate_pinnings(s, k)))
    free, oracle = brute_influence(g, lam, tau)
    psi = influence_matrix(s, tau)
    assert list(psi.free_vertices) == free
    assert psi.exact == oracle


@given(graphs5, lams)
def test_factorisation_psd_and_diagonal(g, lam):
    s = build_hardcore(g, lam)
    for k in range(g.n + 1):
        for tau in enumerate_pinnings(s, k):
            psi = influence_matrix(s, tau)
            if psi.degenerate:
                continue
            assert psi.exact == scaled_covariance(covariance_matrix(s, tau)).exact
            assert all(psi.exact[i][i] == 1 for i in range(psi.size))
            assert influence_spectrum(psi, s, tau).eigenvalues[-1] >= -1e-10


@given(graphs5, lams)
def test_symmetrised_spectrum_matches_power_iteration(g, lam):
    s = build_hardcore(g, lam)
    psi = influence_matrix(s)
    if psi.size < 2:
        return
    ev = influence_spectrum(psi, s).eigenvalues
    if ev[0] - abs(ev[-1]) > 1e-6 and ev[0] - ev[1] > 1e-6:
        assert power_lambda_max(psi.entries) == pytest.approx(ev[0], abs=1e-8)
    # also against a general nonsymmetric eigensolver
    assert np.allclose(np.sort(np.linalg.eigvals(psi.entries).real), np.sort(ev), atol=1e-8)


def test_float_mode_factorisation():
    s = build_hardcore(cycle_graph(5), 0.8)
    for k in range(4):
        for tau in enumerate_pinnings(s, k):
            psi = influence_matrix(s, tau)
            if psi.degenerate:
                continue
            sc = scaled_covariance(covariance_matrix(s, tau)).entries
            assert np.max(np.abs(psi.entries - sc)) <= 1e-12


@pytest.mark.parametrize("n", range(1, 7))
def test_eta_zero_on_edgeless(n):
    assert spectral_independence(build_hardcore(empty_graph(n), Fraction(1, 3))).eta <= 1e-9


def test_eta_grows_with_activity_on_path():
    etas = [spectral_independence(build_hardcore(path_graph(4), lam)).eta for lam in (Fraction(1, 4), 1, 4)]
    assert etas == sorted(etas)
