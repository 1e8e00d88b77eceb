"""Readers and writers for graph JSON, weight-table CSV and matroid specs."""
from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from pathlib import Path

from . import matroid as mt
from .errors import InputError, MatroidAxiomError
from .gibbs import Graph, SpinSystem, TableError, load_table


def _loads(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e.msg}", source, e.lineno, e.colno) from None


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read file: {e.strerror}", str(path)) from None


def graph_from_json(doc, source: str = "<input>") -> Graph:
    if not isinstance(doc, dict) or "n" not in doc:
        raise InputError('graph must be an object {"n": int, "edges": [[u, v], ...]}', source)
    n, edges = doc["n"], doc.get("edges", [])
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError(f"'n' must be a nonnegative integer, got {n!r}", source)
    if not isinstance(edges, list) or not all(
            isinstance(e, (list, tuple)) and len(e) == 2 and all(isinstance(x, int) for x in e) for e in edges):
        raise InputError("'edges' must be a list of integer pairs", source)
    try:
        return Graph(n, [tuple(e) for e in edges])
    except ValueError as e:
        raise InputError(str(e), source) from None


def parse_graph(text: str, source: str = "<input>") -> Graph:
    return graph_from_json(_loads(text, source), source)


def read_graph(path) -> Graph:
    return parse_graph(_read(path), str(path))


def write_graph(graph: Graph, path) -> None:
    Path(path).write_text(json.dumps(graph.to_json()) + "\n")


def parse_table(text: str, source: str = "<input>", graph: Graph | None = None) -> SpinSystem:
    """Rows ``bitstring,weight``; blank lines and ``#`` comments are ignored.

    Weights are parsed as exact rationals (``1/3``, ``0.25``, ``7``).
    """
    records = []
    for lineno, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise InputError(f"expected 'bitstring,weight', got {len(row)} fields", source, lineno)
        if lineno == 1 and not set(row[0].strip()) <= {"0", "1"}:
            continue  # header
        try:
            w = Fraction(row[1].strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad weight {row[1]!r}", source, lineno) from None
        records.append((row[0].strip(), w))
    try:
        return load_table(records, graph=graph)
    except TableError as e:
        raise InputError(str(e), source) from None


def read_table(path, graph: Graph | None = None) -> SpinSystem:
    return parse_table(_read(path), str(path), graph)


def write_table(system: SpinSystem, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in system.to_csv_rows():
            w.writerow(row)


# matroids

MINOR_OPS = ("dual", "restrict", "contract", "truncate")


def matroid_from_spec(spec: dict, source: str = "<input>") -> mt.Matroid:
    """Build a matroid from a JSON-style spec.

    Kinds: ``uniform`` (n, r), ``graphic`` (n, edges or graph), ``linear`` (vectors, prime),
    ``transversal`` (neighbors), ``explicit`` (bases, ground_size, validate) and
    ``minor`` (op in dual/restrict/contract/truncate, of, subset or k).
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("matroid spec must be an object with a 'kind' field", source)
    kind = spec["kind"]
    try:
        if kind == "uniform":
            return mt.uniform(int(spec["n"]), int(spec["r"]))
        if kind == "graphic":
            g = spec.get("graph") or {"n": spec.get("n"), "edges": spec.get("edges", [])}
            if g.get("n") is None:
                g = {"n": 1 + max((max(e) for e in g["edges"]), default=-1), "edges": g["edges"]}
            return mt.graphic(graph_from_json(g, source))
        if kind == "linear":
            vecs = [[Fraction(str(x)) for x in v] for v in spec["vectors"]]
            return mt.linear(vecs, spec.get("prime"))
        if kind == "transversal":
            return mt.transversal(spec["neighbors"])
        if kind == "explicit":
            return mt.explicit(spec["bases"], spec.get("ground_size"), bool(spec.get("validate", True)))
        if kind == "minor":
            op = spec.get("op")
            if op not in MINOR_OPS:
                raise InputError(f"minor op must be one of {MINOR_OPS}, got {op!r}", source)
            base = matroid_from_spec(spec["of"], source)
            if op == "dual":
                return mt.dual(base)
            if op == "truncate":
                return mt.truncate(base, int(spec["k"]))
            return getattr(mt, op)(base, spec.get("subset", []))
    except KeyError as e:
        raise InputError(f"matroid spec of kind {kind!r} is missing field {e.args[0]!r}", source) from None
    except MatroidAxiomError:
        raise
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"bad {kind!r} matroid spec: {e}", source) from None
    raise InputError(f"unknown matroid kind {kind!r}", source)


def parse_matroid(text: str, source: str = "<input>") -> mt.Matroid:
    return matroid_from_spec(_loads(text, source), source)


def resolve_matroid(arg: str) -> mt.Matroid:
    """A preset name, a path to a JSON spec, or inline JSON."""
    from .generators import matroid_preset
    try:
        return matroid_from_spec(matroid_preset(arg), arg)
    except KeyError:
        pass
    if arg.lstrip().startswith("{"):
        return parse_matroid(arg, "<inline>")
    return parse_matroid(_read(arg), arg)


def resolve_graph(arg: str) -> Graph:
    from .generators import graph_preset
    try:
        return graph_preset(arg)
    except KeyError:
        pass
    if arg.lstrip().startswith("{"):
        return parse_graph(arg, "<inline>")
    return read_graph(arg)
