"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row reports the best wall time per backend, the speedup and whether
the two backends produced the same answer.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from specind._kernels import backends
from specind.generators import cycle_graph


def best_of(fn, repeat: int):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def jacobi_case(n: int):
    rng = np.random.default_rng(n)
    a = rng.standard_normal((n, n))
    a = (a + a.T) / 2

    def run(mod):
        return lambda: np.sort(mod.jacobi_eigh(a, 1e-13, 100)[0])

    return f"jacobi n={n}", run, lambda x, y: float(np.max(np.abs(x - y))) < 1e-9


def glauber_case(steps: int):
    g = cycle_graph(10)
    nbr = np.ascontiguousarray(g.neighbor_masks(), dtype=np.int64)
    rng = np.random.default_rng(0)
    verts = np.ascontiguousarray(rng.integers(0, g.n, size=steps), dtype=np.int64)
    u = np.ascontiguousarray(rng.random(steps))

    def run(mod):
        def go():
            out = np.empty(steps, dtype=np.int64)
            mod.glauber_hardcore(nbr, np.int64(0), verts, u, 0.5, out)
            return out
        return go

    return f"glauber steps={steps:.0e}", run, np.array_equal


def shatter_case(n: int):
    g = cycle_graph(n)
    nbr = np.ascontiguousarray(g.neighbor_masks(), dtype=np.int64)

    def run(mod):
        return lambda: [mod.shatter_counts(nbr, n, m)[0] for m in range(1, n + 1)]

    return f"shatter n={n} all m", run, lambda x, y: all(np.array_equal(a, b) for a, b in zip(x, y))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller sizes for a smoke run")
    args = ap.parse_args(argv)

    mods = backends()
    if "compiled" not in mods:
        print("compiled core not built; only the fallback is available")
    sizes = [20, 50] if args.quick else [50, 100, 200]
    cases = [jacobi_case(n) for n in sizes]
    cases.append(glauber_case(10**5 if args.quick else 10**6))
    cases.append(shatter_case(10 if args.quick else 12))

    print(f"{'case':<24}{'python s':>12}{'compiled s':>12}{'speedup':>10}  agree")
    for name, run, same in cases:
        tp, op = best_of(run(mods["python"]), args.repeat)
        if "compiled" in mods:
            tc, oc = best_of(run(mods["compiled"]), args.repeat)
            print(f"{name:<24}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x  {same(op, oc)}")
        else:
            print(f"{name:<24}{tp:>12.4f}{'-':>12}{'-':>10}  -")


if __name__ == "__main__":
    main()
