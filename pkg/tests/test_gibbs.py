from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_hardcore
from specind.errors import CapExceeded, Caps, InvalidPinning
from specind.generators import complete_graph, cycle_graph, empty_graph, erdos_renyi, path_graph
from specind.gibbs import (Graph, Pinning, TableError, build_hardcore, condition, enumerate_pinnings,
                           free_frozen_split, load_table, marginal, marginal_bound)


def graphs(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * 2).map(
            lambda es: Graph(n, sorted({(min(u, v), max(u, v)) for u, v in es if u != v}))))


activities = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 3)])


# graph validation

def test_graph_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])


def test_graph_rejects_out_of_range_vertex():
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_graph_normalises_edge_order():
    assert Graph(3, [(2, 1), (1, 0)]).edges == ((0, 1), (1, 2))


# hard-core construction

def test_edge_support_and_partition_function(edge):
    assert {tuple(c) for c in edge.configs.tolist()} == {(0, 0), (0, 1), (1, 0)}
    assert edge.partition_value == 3
    assert all(edge.prob(c) == Fraction(1, 3) for c in [(0, 0), (0, 1), (1, 0)])
    assert edge.prob((1, 1)) == 0


@pytest.mark.parametrize("lam", [Fraction(1, 3), Fraction(1), Fraction(5, 2)])
def test_single_vertex_occupation_probability(lam):
    s = build_hardcore(Graph(1, []), lam)
    assert s.prob((1,)) == lam / (1 + lam)


def test_triangle_partition_function():
    assert build_hardcore(complete_graph(3), 2).partition_value == 7


def test_configs_are_lexicographic():
    s = build_hardcore(path_graph(4), 1)
    rows = [tuple(r) for r in s.configs.tolist()]
    assert rows == sorted(rows)


@given(graphs(), activities)
def test_hardcore_matches_brute_force(g, lam):
    s = build_hardcore(g, lam)
    oracle = brute_hardcore(g, lam)
    assert s.size == len(oracle)
    assert all(s.prob(c) == p for c, p in oracle.items())
    assert sum(s.exact_probs()) == 1


@given(graphs())
def test_support_is_downward_closed(g):
    s = build_hardcore(g, 1)
    support = {tuple(c) for c in s.configs.tolist()}
    for c in support:
        for v in range(g.n):
            if c[v]:
                assert c[:v] + (0,) + c[v + 1:] in support


def test_float_activity_gives_float_mode():
    s = build_hardcore(path_graph(3), 0.7)
    assert not s.exact
    assert abs(s.probs.sum() - 1) < 1e-12


def test_cap_exceeded_reports_limit():
    with pytest.raises(CapExceeded) as ei:
        build_hardcore(path_graph(12), 1, Caps(max_states=1000))
    assert ei.value.limit == 1000 and ei.value.required == 4096


# tables

def test_table_two_point_uniform():
    s = load_table([("0", 1), ("1", 1)])
    assert s.exact_probs() == [Fraction(1, 2), Fraction(1, 2)]


def test_table_zero_weight_drops():
    s = load_table([("00", 2), ("01", 0), ("10", 2)])
    assert s.size == 2 and s.exact_probs() == [Fraction(1, 2)] * 2


def test_table_round_trip_matches_hardcore():
    hc = build_hardcore(cycle_graph(5), Fraction(2, 3))
    again = load_table([(b, Fraction(p)) for b, p in hc.to_csv_rows()])
    assert again.same_table(hc)


@pytest.mark.parametrize("records", [
    [],
    [("00", 1), ("00", 2)],
    [("00", -1), ("01", 1)],
    [("00", 0)],
    [("02", 1)],
    [("0", 1), ("01", 1)],
])
def test_table_rejects_bad_input(records):
    with pytest.raises(TableError):
        load_table(records)


# conditioning

def test_condition_empty_is_identity(path3):
    assert condition(path3, {}).same_table(path3)


def test_condition_edge_pin_a_occupied(edge):
    c = condition(edge, {0: 1})
    assert [tuple(r) for r in c.configs.tolist()] == [(1, 0)]
    assert c.prob((1, 0)) == 1


def test_condition_path_pin_a_empty(path3):
    c = condition(path3, {0: 0})
    assert {tuple(r) for r in c.configs.tolist()} == {(0, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert all(p == Fraction(1, 3) for p in c.exact_probs())


def test_condition_invalid_pinning(edge):
    with pytest.raises(InvalidPinning):
        condition(edge, {0: 1, 1: 1})


@given(graphs(5), st.data())
def test_condition_is_consistent(g, data):
    s = build_hardcore(g, 1)
    pins = enumerate_pinnings(s, min(2, g.n))
    tau = data.draw(st.sampled_from(pins))
    items = list(tau)
    t1, t2 = Pinning(items[:1]), Pinning(items[1:])
    twice = condition(condition(s, t1), t2)
    once = condition(s, tau)
    assert twice.same_table(once)
    assert sum(once.exact_probs()) == 1


# marginals

def test_marginals(edge, path3):
    assert marginal(edge, 0, 1) == Fraction(1, 3)
    assert marginal(build_hardcore(Graph(1, []), 1), 0, 1) == Fraction(1, 2)
    assert marginal(path3, 1, 1) == Fraction(1, 5)


# pinnings

def test_enumerate_pinnings_edge(edge):
    assert enumerate_pinnings(edge, 0) == [Pinning()]
    assert len(enumerate_pinnings(edge, 1)) == 4
    top = enumerate_pinnings(edge, 2)
    assert len(top) == 3 and Pinning({0: 1, 1: 1}) not in top


@given(graphs(6))
def test_top_level_pinnings_equal_support(g):
    s = build_hardcore(g, 1)
    assert len(enumerate_pinnings(s, g.n)) == s.size


@given(graphs(5))
def test_pinning_counts_match_brute_force(g):
    s = build_hardcore(g, 1)
    support = {tuple(c) for c in s.configs.tolist()}
    for k in range(g.n + 1):
        expect = {tuple((v, c[v]) for v in S) for S in combinations(range(g.n), k) for c in support}
        assert set(enumerate_pinnings(s, k)) == expect


def test_free_frozen_split(edge, path3):
    assert free_frozen_split(edge, {0: 1}) == ((), {1: 0})
    assert free_frozen_split(edge, {}) == ((0, 1), {})
    assert free_frozen_split(path3, {1: 1}) == ((), {0: 0, 2: 0})


def test_pinning_repr_and_labels():
    p = Pinning({2: 1, 0: 0})
    assert list(p) == [(0, 0), (2, 1)]
    assert p.labels() == (0, 5)
    assert Pinning.from_labels((5, 0)) == p


# marginal bound

def test_marginal_bound_examples(edge):
    assert marginal_bound(build_hardcore(Graph(1, []), 1)) == Fraction(1, 2)
    assert marginal_bound(edge) == Fraction(1, 3)


def test_marginal_bound_ignores_zero_marginals():
    # a frozen vertex has marginal 1 for its forced spin and 0 for the other; the 0 is excluded
    s = build_hardcore(path_graph(3), 1)
    b = marginal_bound(s)
    assert 0 < b <= Fraction(1, 5)
    brute = min(
        p for tau_k in range(3) for tau in enumerate_pinnings(s, tau_k)
        for v in range(3) if v not in tau.as_dict() for sp in (0, 1)
        if (p := condition(s, tau).pinning_prob(Pinning({v: sp}))) > 0)
    assert b == brute


@given(st.integers(1, 6), st.integers(0, 30))
def test_er_graphs_normalised(n, seed):
    s = build_hardcore(erdos_renyi(n, 0.5, seed), Fraction(1, 2))
    assert sum(s.exact_probs()) == 1


def test_edgeless_system_is_product():
    s = build_hardcore(empty_graph(3), Fraction(1, 2))
    p1 = Fraction(1, 3)
    for c in s.configs.tolist():
        k = sum(c)
        assert s.prob(c) == p1 ** k * (1 - p1) ** (3 - k)
    assert np.isclose(s.probs.sum(), 1)
