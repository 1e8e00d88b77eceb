"""Binary-spin Gibbs distributions by full enumeration.

A :class:`SpinSystem` is an explicit probability table over ``{0,1}^n``.
Rows are kept in lexicographic order of ``(sigma(0), sigma(1), ...)`` with
``0 < 1``. When every input weight is rational the table is held as Python
integers over a common denominator so that conditionals, marginals and
influences can be read off exactly as :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, Caps, InvalidPinning, SpecIndError, default_caps

Number = Fraction | float


class TableError(SpecIndError, ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        norm = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def neighbors(self, v: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})

    def neighbor_masks(self) -> np.ndarray:
        masks = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            masks[u] |= np.int64(1) << np.int64(v)
            masks[v] |= np.int64(1) << np.int64(u)
        return masks

    def is_independent(self, occupied: Iterable[int]) -> bool:
        occ = set(occupied)
        return not any(u in occ and v in occ for u, v in self.edges)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


class Pinning(tuple):
    """Sorted tuple of ``(vertex, spin)`` pairs on distinct vertices.

    Accepts a mapping ``{vertex: spin}`` or an iterable of pairs.
    """

    def __new__(cls, items: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(items, Mapping):
            items = items.items()
        pairs = tuple(sorted((int(v), int(s)) for v, s in items))
        verts = [v for v, _ in pairs]
        if len(set(verts)) != len(verts):
            raise ValueError(f"pinning assigns a vertex twice: {pairs}")
        if any(s not in (0, 1) for _, s in pairs):
            raise ValueError("spins must be 0 or 1")
        return super().__new__(cls, pairs)

    @property
    def level(self) -> int:
        return len(self)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self)

    @property
    def spins(self) -> tuple[int, ...]:
        return tuple(s for _, s in self)

    def as_dict(self) -> dict[int, int]:
        return dict(self)

    def union(self, other: Iterable[tuple[int, int]]) -> "Pinning":
        merged = dict(self)
        for v, s in other:
            if merged.get(v, s) != s:
                raise ValueError(f"conflicting spins at vertex {v}")
            merged[v] = s
        return Pinning(merged)

    def labels(self) -> tuple[int, ...]:
        """Ground-set labels ``2*v + s`` used by the level machinery."""
        return tuple(2 * v + s for v, s in self)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Pinning":
        return cls((lab // 2, lab % 2) for lab in labels)

    def __repr__(self):
        return "Pinning({" + ", ".join(f"{v}: {s}" for v, s in self) + "})"


def _parse_activity(activity) -> Number:
    if isinstance(activity, str):
        return Fraction(activity)
    if isinstance(activity, bool):
        raise TypeError("activity must be numeric")
    if isinstance(activity, Rational):
        return Fraction(activity)
    return float(activity)


def _lex_order(configs: np.ndarray) -> np.ndarray:
    if configs.shape[0] == 0:
        return np.arange(0)
    # np.lexsort treats the last key as primary; vertex 0 must be primary
    return np.lexsort(configs.T[::-1])


@dataclass(eq=False)
class SpinSystem:
    """Explicit distribution on a subset of ``{0,1}^n``.

    ``weights`` holds unnormalised masses: Python ints (exact mode) or floats.
    ``probs`` is always the float64 view ``weights / total``.
    """

    n: int
    configs: np.ndarray
    weights: np.ndarray
    total: object
    partition_value: Number | None = None
    graph: Graph | None = None
    probs: np.ndarray = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.configs = np.ascontiguousarray(self.configs, dtype=np.uint8).reshape(-1, self.n)
        if self.exact:
            self.probs = np.array([w / self.total for w in self.weights], dtype=np.float64)
        else:
            self.probs = np.asarray(self.weights, dtype=np.float64) / float(self.total)
        self._index = {tuple(int(x) for x in row): i for i, row in enumerate(self.configs)}
        if len(self._index) != len(self.configs):
            raise TableError("support configurations must be distinct")

    @property
    def exact(self) -> bool:
        return self.weights.dtype == object

    @property
    def size(self) -> int:
        return len(self.configs)

    def prob(self, config: Sequence[int]) -> Number:
        i = self._index.get(tuple(int(x) for x in config))
        if i is None:
            return Fraction(0) if self.exact else 0.0
        return self.ratio(self.weights[i], self.total)

    def index(self, config: Sequence[int]) -> int:
        return self._index[tuple(int(x) for x in config)]

    def exact_probs(self) -> list[Fraction]:
        if not self.exact:
            raise TypeError("system is in float mode")
        return [Fraction(int(w), int(self.total)) for w in self.weights]

    def ratio(self, a, b) -> Number:
        if self.exact:
            return Fraction(int(a), int(b))
        return float(a) / float(b)

    def mask(self, pinning: Pinning) -> np.ndarray:
        m = np.ones(self.size, dtype=bool)
        for v, s in pinning:
            m &= self.configs[:, v] == s
        return m

    def mass(self, pinning: Pinning):
        """Unnormalised mass of all support configs extending ``pinning``."""
        m = self.mask(pinning)
        if self.exact:
            return sum(int(w) for w in self.weights[m])
        return float(self.weights[m].sum())

    def pinning_prob(self, pinning: Pinning) -> Number:
        return self.ratio(self.mass(pinning), self.total)

    def is_valid(self, pinning: Pinning) -> bool:
        return bool(self.mask(Pinning(pinning)).any())

    def same_table(self, other: "SpinSystem") -> bool:
        if self.n != other.n or self.size != other.size:
            return False
        if not np.array_equal(self.configs, other.configs):
            return False
        if self.exact and other.exact:
            return self.exact_probs() == other.exact_probs()
        return bool(np.allclose(self.probs, other.probs, rtol=0, atol=1e-15))

    def to_csv_rows(self) -> list[tuple[str, str]]:
        out = []
        for row, w in zip(self.configs, self.weights):
            bits = "".join(str(int(x)) for x in row)
            val = str(Fraction(int(w), int(self.total))) if self.exact else repr(float(w) / float(self.total))
            out.append((bits, val))
        return out


def _check_cap(n: int, caps: Caps) -> None:
    if n >= 63 or (1 << n) > caps.max_states:
        raise CapExceeded("configuration space 2^n", 1 << n, caps.max_states)


def independent_set_codes(graph: Graph, caps: Caps | None = None) -> np.ndarray:
    """Bitmask codes (bit v = vertex v occupied) of every independent set."""
    caps = caps or default_caps()
    _check_cap(graph.n, caps)
    xs = np.arange(1 << graph.n, dtype=np.int64)
    ok = np.ones(xs.shape, dtype=bool)
    for u, v in graph.edges:
        ok &= ((xs >> u) & (xs >> v) & 1) == 0
    return xs[ok]


def _codes_to_configs(codes: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def build_hardcore(graph: Graph, activity, caps: Caps | None = None) -> SpinSystem:
    """Hard-core model: ``mu(sigma) = activity**|sigma| / Z`` over independent sets."""
    lam = _parse_activity(activity)
    if lam <= 0:
        raise ValueError("activity must be positive")
    codes = independent_set_codes(graph, caps)
    configs = _codes_to_configs(codes, graph.n)
    configs = configs[_lex_order(configs)]
    sizes = configs.sum(axis=1).astype(int)
    if isinstance(lam, Fraction):
        p, q = lam.numerator, lam.denominator
        weights = np.array([p**k * q ** (graph.n - k) for k in sizes], dtype=object)
        total = sum(int(w) for w in weights)
        z = Fraction(total, q**graph.n)
    else:
        weights = np.array([lam**k for k in sizes], dtype=np.float64)
        total = float(weights.sum())
        z = total
    return SpinSystem(graph.n, configs, weights, total, partition_value=z, graph=graph)


def _parse_config(config, n: int | None) -> tuple[int, ...]:
    if isinstance(config, str):
        bits = tuple(int(c) for c in config.strip())
    else:
        bits = tuple(int(x) for x in config)
    if any(b not in (0, 1) for b in bits):
        raise TableError(f"configuration {config!r} is not binary")
    if n is not None and len(bits) != n:
        raise TableError(f"configuration {config!r} has length {len(bits)}, expected {n}")
    return bits


def load_table(records: Iterable[tuple[object, object]], n: int | None = None,
               graph: Graph | None = None) -> SpinSystem:
    """Build a system from ``(config, weight)`` records; zero weights drop out."""
    records = list(records)
    if not records:
        raise TableError("empty table")
    if n is None:
        n = graph.n if graph is not None else len(_parse_config(records[0][0], None))
    seen: set[tuple[int, ...]] = set()
    rows, ws = [], []
    for cfg, w in records:
        bits = _parse_config(cfg, n)
        if bits in seen:
            raise TableError(f"duplicate configuration {''.join(map(str, bits))}")
        seen.add(bits)
        w = Fraction(w) if isinstance(w, str) else w
        if w < 0:
            raise TableError("weights must be nonnegative")
        rows.append(bits)
        ws.append(w)
    exact = all(isinstance(w, Rational) and not isinstance(w, bool) for w in ws)
    keep = [i for i, w in enumerate(ws) if w > 0]
    if not keep:
        raise TableError("all weights are zero")
    configs = np.array([rows[i] for i in keep], dtype=np.uint8).reshape(-1, n)
    order = _lex_order(configs)
    configs = configs[order]
    kept = [ws[keep[i]] for i in order]
    if exact:
        fr = [Fraction(w) for w in kept]
        den = math.lcm(*(f.denominator for f in fr))
        weights = np.array([int(f * den) for f in fr], dtype=object)
        total = sum(int(w) for w in weights)
        z = Fraction(total, den)
    else:
        weights = np.array([float(w) for w in kept], dtype=np.float64)
        total = float(weights.sum())
        z = total
    return SpinSystem(n, configs, weights, total, partition_value=z, graph=graph)


def condition(system: SpinSystem, pinning) -> SpinSystem:
    """Conditional distribution ``mu_tau`` on the same vertex set."""
    pinning = Pinning(pinning)
    m = system.mask(pinning)
    if not m.any():
        raise InvalidPinning(f"no support configuration extends {pinning!r}")
    weights = system.weights[m]
    total = sum(int(w) for w in weights) if system.exact else float(weights.sum())
    return SpinSystem(system.n, system.configs[m], weights, total,
                      partition_value=system.partition_value, graph=system.graph)


def marginal(system: SpinSystem, vertex: int, spin: int) -> Number:
    if not 0 <= vertex < system.n:
        raise IndexError(f"vertex {vertex} out of range")
    return system.pinning_prob(Pinning({vertex: spin}))


def enumerate_pinnings(system: SpinSystem, k: int, caps: Caps | None = None) -> list[Pinning]:
    """All valid pinnings on exactly ``k`` vertices, ordered by vertex set then spins."""
    caps = caps or default_caps()
    if not 0 <= k <= system.n:
        raise ValueError(f"level {k} outside [0, {system.n}]")
    out: list[Pinning] = []
    for S in itertools.combinations(range(system.n), k):
        proj = np.unique(system.configs[:, list(S)], axis=0) if k else np.zeros((1, 0), np.uint8)
        for row in proj:
            out.append(Pinning(zip(S, (int(x) for x in row))))
        if len(out) > caps.max_pinnings:
            raise CapExceeded(f"pinnings at level {k}", len(out), caps.max_pinnings)
    return out


def free_frozen_split(system: SpinSystem, pinning) -> tuple[tuple[int, ...], dict[int, int]]:
    """Split unpinned vertices into free ones (both spins possible) and frozen ones."""
    pinning = Pinning(pinning)
    m = system.mask(pinning)
    if not m.any():
        raise InvalidPinning(f"no support configuration extends {pinning!r}")
    sub = system.configs[m]
    pinned = set(pinning.vertices)
    free, frozen = [], {}
    for v in range(system.n):
        if v in pinned:
            continue
        vals = np.unique(sub[:, v])
        if len(vals) == 2:
            free.append(v)
        else:
            frozen[v] = int(vals[0])
    return tuple(free), frozen


def marginal_bound(system: SpinSystem, caps: Caps | None = None) -> Number:
    """Smallest positive conditional marginal over every valid pinning.

    The marginal-boundedness condition uses a strict inequality, so the system
    is b-marginally bounded for every b strictly below the returned value.
    Marginals equal to 1 (pinned or frozen vertices) are included.
    """
    best = Fraction(1) if system.exact else 1.0
    for k in range(system.n):
        for tau in enumerate_pinnings(system, k, caps):
            m = system.mask(tau)
            sub = system.configs[m]
            w = system.weights[m]
            tot = sum(int(x) for x in w) if system.exact else float(w.sum())
            for v in range(system.n):
                if v in tau.as_dict():
                    continue
                ones = w[sub[:, v] == 1]
                a = sum(int(x) for x in ones) if system.exact else float(ones.sum())
                for mass in (a, tot - a):
                    if mass > 0:
                        val = system.ratio(mass, tot)
                        if val < best:
                            best = val
    return best
