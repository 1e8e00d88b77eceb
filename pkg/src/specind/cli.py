"""Command-line entry point: analyze, verify, sample, reliability, sweep.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 an enumeration cap was hit.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Sequence

from . import __version__
from . import dynamics as dyn
from . import levels as lv
from ._kernels import BACKEND
from .errors import CapExceeded, InputError, MatroidAxiomError, NonErgodicError, SpecIndError
from .gibbs import SpinSystem, TableError, build_hardcore
from .influence import spectral_independence
from .io import read_table, resolve_graph, resolve_matroid
from .matroid import reliability, simulate_bases_exchange
from .numerics import gap, reversible_spectrum
from . import verify as vf

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive(text: str) -> Fraction:
    v = _fraction(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _prob(text: str) -> Fraction:
    v = _fraction(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text!r}")
    return v


def _eps(text: str) -> float:
    v = float(_fraction(text))
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1): {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _pos_int(text: str) -> int:
    v = _nonneg_int(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=_nonneg_int, default=0, help="RNG seed (default: %(default)s)")
    p.add_argument("--max-states", type=_pos_int, default=None,
                   help="cap on enumerated configurations; overrides SPECIND_MAX_STATES (default: 1048576)")
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout (default: stdout)")
    p.add_argument("--csv", action="store_true", help="emit the tabular payload as CSV (default: JSON)")


def _add_spin_input(p: argparse.ArgumentParser, flag: str) -> None:
    p.add_argument(flag, dest="graph", default=None, metavar="GRAPH",
                   help="graph: preset (edge, path3, triangle, cycle5, K4, pathN, cycleN, cliqueN, emptyN), "
                        "JSON file or inline JSON (default: none)")
    p.add_argument("--table", default=None, help="weight table CSV with rows 'bitstring,weight' (default: none)")
    p.add_argument("--lambda", dest="lam", type=_positive, default=Fraction(1),
                   help="hard-core activity, exact rationals like 1/2 accepted (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specind", description="Spectral independence, local walks and matroid bases sampling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="influence, local gaps, Glauber/block gaps and mixing times")
    _add_spin_input(p, "--graph")
    p.add_argument("--eps", type=_eps, action="append", default=None,
                   help="TV threshold for exact mixing time; repeatable (default: 1/4)")
    p.add_argument("--alpha", type=_prob, default=None,
                   help="also run the shattering check with blocks of size round(alpha*n) (default: off)")
    _add_common(p)

    p = sub.add_parser("verify", help="run the certification suite; exit 1 if any check fails")
    _add_spin_input(p, "--spin")
    p.add_argument("--matroid", default=None,
                   help="matroid: preset (graphic-triangle, graphic-K4, uniform-N-R, transversal-demo, linear-demo, "
                        "explicit-bad), JSON file or inline JSON (default: none)")
    p.add_argument("--tolerance", type=float, default=vf.TOL_INEQ,
                   help="slack for inequality checks (default: %(default)s)")
    p.add_argument("--probes", type=_pos_int, default=vf.PROBES,
                   help="random probe functions per identity (default: %(default)s)")
    _add_common(p)

    p = sub.add_parser("sample", help="simulate Glauber or bases-exchange dynamics")
    p.add_argument("--hardcore", dest="graph", default=None, metavar="GRAPH",
                   help="graph for hard-core Glauber dynamics (default: none)")
    p.add_argument("--lambda", dest="lam", type=_positive, default=Fraction(1),
                   help="hard-core activity (default: 1)")
    p.add_argument("--matroid", default=None, help="matroid for the bases-exchange walk (default: none)")
    p.add_argument("--steps", type=_nonneg_int, default=10_000, help="number of steps (default: %(default)s)")
    _add_common(p)

    p = sub.add_parser("reliability", help="probability that a p-random subset contains a basis")
    p.add_argument("--matroid", required=True, help="matroid preset, JSON file or inline JSON (required)")
    p.add_argument("--p", dest="p", type=_prob, default=Fraction(1, 2),
                   help="keep probability, exact rationals accepted (default: 1/2)")
    _add_common(p)

    p = sub.add_parser("sweep", help="run suites over a grid of generated instances")
    p.add_argument("--config", required=True, help="sweep config: JSON file or inline JSON (required)")
    p.add_argument("--threads", type=_pos_int, default=1, help="worker processes (default: %(default)s)")
    _add_common(p)
    return parser


@contextmanager
def _caps_override(max_states: int | None):
    key = "SPECIND_MAX_STATES"
    old = os.environ.get(key)
    if max_states is not None:
        os.environ[key] = str(max_states)
    try:
        yield
    finally:
        if max_states is not None:
            if old is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = old


def _clean(x):
    """JSON-safe copy: fractions become floats, non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if hasattr(x, "item") and callable(x.item):
        return _clean(x.item())
    return x


def _emit(args, doc=None, rows: list[Sequence] | None = None) -> None:
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        if args.csv and rows is not None:
            csv.writer(fh, lineterminator="\n").writerows(rows)
        else:
            fh.write(json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n")
    finally:
        if args.output:
            fh.close()


def _load_system(args) -> SpinSystem:
    if args.graph and args.table:
        raise InputError("give either a graph or a table, not both")
    if args.table:
        return read_table(args.table)
    if not args.graph:
        raise InputError("no input: give a graph or --table")
    return build_hardcore(resolve_graph(args.graph), args.lam)


def cmd_analyze(args) -> int:
    system = _load_system(args)
    n = system.n
    si = spectral_independence(system)
    doc: dict = {"n": n, "support_size": system.size, "backend": BACKEND, **si.to_json()}
    if args.graph:
        doc["lambda"] = str(args.lam)
        doc["graph"] = system.graph.to_json()
    gaps = lv.local_gaps(system)
    doc["local_gaps"] = [{"k": g.k, "gamma": g.gamma, "reducible": g.reducible,
                          "witness": None if g.witness is None else {str(v): s for v, s in g.witness}} for g in gaps]
    gammas = [g.gamma for g in gaps]
    doc["random_walk_bound"] = math.prod(gammas) / n if n else None
    G = dyn.glauber_kernel(system)
    blocks = []
    for m in range(1, n + 1):
        B = dyn.block_kernel(system, m)
        blocks.append({"m": m, "gamma": gap(reversible_spectrum(B)).gamma})
    doc["block_gaps"] = blocks
    eps = args.eps or [0.25]
    try:
        doc["glauber"] = dyn.mixing_report(G, eps, n=n).to_json()
    except NonErgodicError as e:
        doc["glauber"] = {"gamma": gap(reversible_spectrum(G)).gamma, "error": str(e)}
    if args.alpha is not None:
        if system.graph is None:
            raise InputError("--alpha needs a graph input")
        m = round(float(args.alpha) * n)
        doc["shattering"] = dyn.shattering_check(system.graph, m, seed=args.seed).to_json()
    rows = [["k", "gamma", "reducible"]] + [[g.k, repr(g.gamma), int(g.reducible)] for g in gaps]
    _emit(args, doc, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    spin = bool(args.graph or args.table)
    if spin == bool(args.matroid):
        raise InputError("give exactly one of --spin/--table or --matroid")
    if args.matroid:
        try:
            m = resolve_matroid(args.matroid)
        except MatroidAxiomError as e:
            doc = {"passed": False, "error": "matroid axioms violated", "message": str(e),
                   "witness": _clean(e.witness)}
            _emit(args, doc, [["check", "status", "witness"], ["matroid_axioms", "fail", json.dumps(_clean(e.witness))]])
            return EXIT_FAIL
        rep = vf.run_matroid_suite(m, args.seed, probes=args.probes, label=args.matroid, slack=args.tolerance)
    else:
        system = _load_system(args)
        meta = {"lambda": str(args.lam)} if args.graph else {}
        rep = vf.run_spin_suite(system, args.seed, probes=args.probes, label=args.graph or args.table, meta=meta,
                                slack=args.tolerance)
    rows = [["name", "instance", "status", "margin", "tol", "reason"]] + [
        [r.name, r.instance, r.status, repr(r.margin), r.tol, r.reason] for r in rep.results]
    doc = rep.to_json()
    doc["failures"] = [{"name": r.name, "instance": r.instance, "margin": r.margin, "notes": r.notes}
                       for r in rep.failures]
    _emit(args, doc, rows)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sample(args) -> int:
    if bool(args.graph) == bool(args.matroid):
        raise InputError("give exactly one of --hardcore or --matroid")
    if args.matroid:
        m = resolve_matroid(args.matroid)
        traj = simulate_bases_exchange(m, args.steps, args.seed, record=args.csv)
        doc = {"walk": "bases_exchange", "steps": args.steps, "seed": args.seed,
               "initial": list(traj.initial), "final": list(traj.final)}
        try:
            doc["tv_to_uniform"] = traj.tv_to_uniform(m.bases()) if args.steps else None
        except CapExceeded:
            doc["tv_to_uniform"] = None
        rows = [["step", "basis"]] + [[t, " ".join(map(str, b))] for t, b in enumerate(traj.states or [])]
    else:
        graph = resolve_graph(args.graph)
        traj = dyn.simulate_glauber(graph, args.lam, args.steps, args.seed, record=args.csv)
        doc = {"walk": "glauber", "lambda": str(args.lam), "steps": args.steps, "seed": args.seed,
               "initial": list(traj.config(traj.initial)), "final": list(traj.config(traj.final))}
        try:
            doc["tv_to_exact"] = traj.tv_to(build_hardcore(graph, args.lam)) if args.steps else None
        except CapExceeded:
            doc["tv_to_exact"] = None
        rows = [["step"] + [f"v{i}" for i in range(graph.n)]] + [
            [t] + list(c) for t, c in enumerate(traj.configs())] if args.csv else None
    _emit(args, doc, rows)
    return EXIT_OK


def cmd_reliability(args) -> int:
    m = resolve_matroid(args.matroid)
    res = reliability(m, args.p)
    doc = {"p": str(args.p), "matroid": m.describe(), **res.to_json()}
    rows = [["p", "dual_formula", "direct_enumeration", "match"],
            [str(args.p), res.to_json()["dual_formula"], res.to_json()["direct_enumeration"], res.match]]
    _emit(args, doc, rows)
    return EXIT_OK


def cmd_sweep(args) -> int:
    text = args.config
    if not text.lstrip().startswith("{"):
        try:
            with open(text) as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read file: {e.strerror}", args.config) from None
    try:
        config = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e.msg}", args.config, e.lineno, e.colno) from None
    if not isinstance(config, dict):
        raise InputError("sweep config must be a JSON object", args.config)
    if "seed" not in config:
        config["seed"] = args.seed
    try:
        result = vf.sweep(config, threads=args.threads)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SpecIndError):
            raise
        raise InputError(f"bad sweep config: {e}", args.config) from None
    doc = {"schema_version": vf.SCHEMA_VERSION, "summary": result.summary(),
           "reports": [r.to_json(full=False) for r in result.reports]}
    rows = [["label", "kind", "passed", "checks", "failures", "skips"]] + [
        [spec["label"], spec["kind"], int(r.passed), len(r.results), len(r.failures), len(r.skips)]
        for spec, r in zip(result.instances, result.reports)]
    _emit(args, doc, rows)
    return EXIT_OK if result.passed else EXIT_FAIL


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "sample": cmd_sample,
            "reliability": cmd_reliability, "sweep": cmd_sweep}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help/--version exit 0, bad flags exit 2 via _Parser.error
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    try:
        with _caps_override(args.max_states):
            return COMMANDS[args.command](args)
    except CapExceeded as e:
        print(f"specind: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, TableError, MatroidAxiomError) as e:
        print(f"specind: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, SpecIndError) as e:
        print(f"specind: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
