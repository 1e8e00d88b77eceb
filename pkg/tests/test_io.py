import json
from fractions import Fraction

import pytest

from specind import io
from specind import matroid as mt
from specind.errors import InputError, MatroidAxiomError
from specind.generators import complete_graph, cycle_graph, graph_preset, matroid_preset
from specind.gibbs import Graph, build_hardcore


def test_graph_round_trip(tmp_path):
    g = cycle_graph(5)
    p = tmp_path / "g.json"
    io.write_graph(g, p)
    h = io.read_graph(p)
    assert h.n == 5 and sorted(h.edges) == sorted(g.edges)


def test_graph_json_error_location():
    with pytest.raises(InputError) as ei:
        io.parse_graph('{"n": 3,\n  "edges": [[0, 1],, ]}', "g.json")
    e = ei.value
    assert e.source == "g.json" and e.line == 2 and e.column is not None
    assert str(e).startswith("g.json:2:")


@pytest.mark.parametrize("doc", [[1, 2], {"n": -1, "edges": []}, {"n": 2, "edges": "x"},
                                 {"n": 2, "edges": [[0, 5]]}, {"n": 2, "edges": [[0, 0]]}, {"edges": []}])
def test_graph_validation(doc):
    with pytest.raises(InputError):
        io.graph_from_json(doc)


def test_missing_file():
    with pytest.raises(InputError, match="cannot read"):
        io.read_graph("/nonexistent/graph.json")


def test_table_round_trip(tmp_path):
    s = build_hardcore(cycle_graph(4), Fraction(2, 3))
    p = tmp_path / "t.csv"
    io.write_table(s, p)
    t = io.read_table(p)
    assert t.same_table(s)
    assert t.exact


def test_table_parsing_skips_header_and_comments():
    text = "config,weight\n# a comment\n\n00,1\n01,1/2\n10,1/2\n"
    s = io.parse_table(text)
    assert s.n == 2 and s.size == 3
    assert s.prob((0, 1)) == Fraction(1, 4)


@pytest.mark.parametrize("text, line", [("00,1\n01\n", 2), ("00,1\n01,abc\n", 2), ("0,1\n1,x\n", 2)])
def test_table_errors_have_lines(text, line):
    with pytest.raises(InputError) as ei:
        io.parse_table(text, "t.csv")
    assert ei.value.line == line


def test_table_semantic_error():
    with pytest.raises(InputError):
        io.parse_table("00,1\n011,1\n")


@pytest.mark.parametrize("spec, rank, nbases", [
    ({"kind": "uniform", "n": 4, "r": 2}, 2, 6),
    ({"kind": "graphic", "edges": [[0, 1], [1, 2], [0, 2]]}, 2, 3),
    ({"kind": "graphic", "graph": {"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2], [1, 3]]}}, 3, 16),
    ({"kind": "linear", "vectors": [[1, 0], [0, 1], [1, 1]], "prime": 2}, 2, 3),
    ({"kind": "linear", "vectors": [["1/2", 0], [0, 1], [1, 1]]}, 2, 3),
    ({"kind": "transversal", "neighbors": [[0]]}, 1, 1),
    ({"kind": "explicit", "bases": [[0, 1], [0, 2], [1, 2]]}, 2, 3),
    ({"kind": "minor", "op": "dual", "of": {"kind": "uniform", "n": 5, "r": 2}}, 3, 10),
    ({"kind": "minor", "op": "contract", "subset": [0], "of": {"kind": "uniform", "n": 4, "r": 2}}, 1, 3),
    ({"kind": "minor", "op": "restrict", "subset": [0, 1, 2], "of": {"kind": "uniform", "n": 5, "r": 2}}, 2, 3),
    ({"kind": "minor", "op": "truncate", "k": 1, "of": {"kind": "uniform", "n": 4, "r": 3}}, 1, 4),
])
def test_matroid_specs(spec, rank, nbases):
    m = io.matroid_from_spec(spec)
    assert m.rank == rank and len(m.bases()) == nbases
    assert io.parse_matroid(json.dumps(spec)).bases() == m.bases()


@pytest.mark.parametrize("spec, msg", [
    ({}, "kind"),
    ({"kind": "nope"}, "unknown"),
    ({"kind": "uniform", "n": 4}, "missing field 'r'"),
    ({"kind": "uniform", "n": 2, "r": 5}, "uniform"),
    ({"kind": "minor", "op": "rotate", "of": {"kind": "uniform", "n": 2, "r": 1}}, "minor op"),
])
def test_matroid_spec_errors(spec, msg):
    with pytest.raises(InputError, match=msg):
        io.matroid_from_spec(spec)


def test_explicit_spec_invalid_is_axiom_error():
    with pytest.raises(MatroidAxiomError):
        io.matroid_from_spec({"kind": "explicit", "bases": [[1], [2, 3]]})


def test_resolve_matroid_sources(tmp_path):
    assert len(io.resolve_matroid("graphic-K4").bases()) == 16
    assert io.resolve_matroid("uniform-5-3").rank == 3
    assert io.resolve_matroid('{"kind": "uniform", "n": 3, "r": 1}').rank == 1
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"kind": "uniform", "n": 3, "r": 2}))
    assert io.resolve_matroid(str(p)).rank == 2


def test_resolve_graph_sources(tmp_path):
    assert io.resolve_graph("triangle").edges == complete_graph(3).edges
    assert io.resolve_graph("path7").n == 7
    assert io.resolve_graph('{"n": 2, "edges": [[0, 1]]}').n == 2
    with pytest.raises(InputError):
        io.resolve_graph(str(tmp_path / "absent.json"))


def test_presets_build():
    for name in ("graphic-triangle", "graphic-K4", "transversal-demo", "linear-demo"):
        assert mt.axioms_check(io.matroid_from_spec(matroid_preset(name))).passed
    assert io.matroid_from_spec(matroid_preset("transversal-demo")).rank == 4
    assert io.matroid_from_spec(matroid_preset("linear-demo")).rank == 3
    with pytest.raises(KeyError):
        graph_preset("dodecahedron")
