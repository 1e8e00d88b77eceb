"""Named graph families and matroid presets used by the CLI and sweeps."""
from __future__ import annotations

import numpy as np

from .gibbs import Graph
from . import matroid as mt


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    """Cycle on ``n >= 3`` vertices; smaller ``n`` falls back to a path."""
    return Graph(n, [(i, (i + 1) % n) for i in range(n)]) if n >= 3 else path_graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def empty_graph(n: int) -> Graph:
    return Graph(n, [])


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = rng.random(len(pairs)) < p
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


FAMILIES = {"path": path_graph, "cycle": cycle_graph, "clique": complete_graph, "empty": empty_graph}

GRAPH_PRESETS = {
    "edge": lambda: path_graph(2),
    "path3": lambda: path_graph(3),
    "triangle": lambda: complete_graph(3),
    "cycle5": lambda: cycle_graph(5),
    "K4": lambda: complete_graph(4),
}


def graph_preset(name: str) -> Graph:
    """``edge``, ``path3``, ``triangle``, ``cycle5``, ``K4`` or ``<family><n>`` such as ``path6``."""
    if name in GRAPH_PRESETS:
        return GRAPH_PRESETS[name]()
    for fam, build in FAMILIES.items():
        if name.startswith(fam) and name[len(fam):].isdigit():
            return build(int(name[len(fam):]))
    raise KeyError(name)


MATROID_PRESETS = {
    "graphic-triangle": {"kind": "graphic", "n": 3, "edges": [[0, 1], [1, 2], [0, 2]]},
    "graphic-K4": {"kind": "graphic", "n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]},
    "explicit-bad": {"kind": "explicit", "bases": [[1], [2, 3]], "ground_size": 4, "validate": False},
    "transversal-demo": {"kind": "transversal", "neighbors": [[0, 1], [1, 2], [2, 3], [0, 3], [0]]},
    "linear-demo": {"kind": "linear", "vectors": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1], [1, 1, 1]]},
}


def matroid_preset(name: str) -> dict:
    """Spec dict for a named matroid; ``uniform-N-R`` is parsed on the fly."""
    if name in MATROID_PRESETS:
        return dict(MATROID_PRESETS[name])
    parts = name.split("-")
    if len(parts) == 3 and parts[0] == "uniform" and parts[1].isdigit() and parts[2].isdigit():
        return {"kind": "uniform", "n": int(parts[1]), "r": int(parts[2])}
    raise KeyError(name)


def acceptance_matroids() -> dict[str, mt.Matroid]:
    from .io import matroid_from_spec
    names = ["graphic-triangle", "graphic-K4", "uniform-4-2", "uniform-5-3", "transversal-demo", "linear-demo"]
    return {nm: matroid_from_spec(matroid_preset(nm)) for nm in names}
