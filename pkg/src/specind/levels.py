"""Level hierarchy of a weighted pure complex.

Both spin systems and matroids reduce to the same object: a family of
top faces of size ``r`` with positive weights. For a spin system on ``n``
vertices each configuration becomes the face ``{2v + sigma(v)}`` (so a
pinning is a face and ``r = n``); for a matroid the faces are its bases.
Every operator below is expressed through face masses
``mu(F) = sum of weights of top faces containing F``.
"""
from __future__ import annotations

import csv
import itertools
import json
import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import CapExceeded, Caps, DegenerateError, InvalidPinning, default_caps
from .gibbs import Pinning, SpinSystem
from .numerics import Gap, gap, reversible_spectrum

Face = tuple[int, ...]


def _spin_key(face: Face):
    return (tuple(x // 2 for x in face), tuple(x % 2 for x in face))


class Complex:
    """Face masses of a weighted pure complex, organised by level."""

    def __init__(self, tops: Sequence[Face], weights: Sequence, rank: int, kind: str,
                 exact: bool, caps: Caps | None = None):
        self.rank = rank
        self.kind = kind
        self.exact = exact
        self.caps = caps or default_caps()
        zero = 0 if exact else 0.0
        masses: list[dict[Face, object]] = [dict() for _ in range(rank + 1)]
        for top, w in zip(tops, weights):
            w = int(w) if exact else float(w)
            if w <= 0:
                continue
            top = tuple(sorted(top))
            if len(top) != rank:
                raise ValueError(f"face {top} has size {len(top)}, expected {rank}")
            for k in range(rank + 1):
                lvl = masses[k]
                for sub in itertools.combinations(top, k):
                    lvl[sub] = lvl.get(sub, zero) + w
            if sum(len(m) for m in masses) > self.caps.max_pinnings * (rank + 1):
                raise CapExceeded("faces across all levels", sum(len(m) for m in masses),
                                  self.caps.max_pinnings * (rank + 1))
        for k, lvl in enumerate(masses):
            if len(lvl) > self.caps.max_pinnings:
                raise CapExceeded(f"pinnings at level {k}", len(lvl), self.caps.max_pinnings)
        if not masses[0]:
            raise ValueError("complex has no positive-weight face")
        self.masses = masses
        self.total = masses[0][()]
        sort_key: Callable = _spin_key if kind == "spin" else (lambda f: f)
        self.faces = [sorted(lvl, key=sort_key) for lvl in masses]
        self.index = [{f: i for i, f in enumerate(fs)} for fs in self.faces]
        self._children: dict[int, dict[Face, list[tuple[int, Face]]]] = {}
        self._cache: dict = {}

    @classmethod
    def from_system(cls, system: SpinSystem, caps: Caps | None = None) -> "Complex":
        n = system.n
        labels = 2 * np.arange(n)[None, :] + system.configs.astype(np.int64)
        tops = [tuple(int(x) for x in row) for row in labels]
        return cls(tops, list(system.weights), n, "spin", system.exact, caps)

    @classmethod
    def from_bases(cls, bases: Sequence[Sequence[int]], rank: int, caps: Caps | None = None) -> "Complex":
        return cls([tuple(b) for b in bases], [1] * len(bases), rank, "matroid", True, caps)

    # face <-> user-facing keys
    def key(self, face: Face):
        return Pinning.from_labels(face) if self.kind == "spin" else face

    def state_key(self, label: int):
        return (label // 2, label % 2) if self.kind == "spin" else label

    def face_of(self, key) -> Face:
        if self.kind == "spin":
            return tuple(sorted(Pinning(key).labels()))
        return tuple(sorted(int(x) for x in key))

    def mass(self, face: Face):
        face = tuple(sorted(face))
        if len(face) > self.rank:
            return 0 if self.exact else 0.0
        return self.masses[len(face)].get(face, 0 if self.exact else 0.0)

    def ratio(self, a, b) -> float:
        return a / b

    def exact_ratio(self, a, b):
        return Fraction(int(a), int(b)) if self.exact else float(a) / float(b)

    def children(self, k: int) -> dict[Face, list[tuple[int, Face]]]:
        """Map each level-k face to its (added label, level-(k+1) face) extensions."""
        if k not in self._children:
            out: dict[Face, list[tuple[int, Face]]] = {f: [] for f in self.faces[k]}
            if k < self.rank:
                for g in self.faces[k + 1]:
                    for i, x in enumerate(g):
                        out[g[:i] + g[i + 1:]].append((x, g))
            for lst in out.values():
                lst.sort()
            self._children[k] = out
        return self._children[k]

    def extensions(self, face: Face, j: int) -> list[tuple[Face, Face]]:
        """Faces of size ``|face| + j`` containing ``face``, as (difference, full face)."""
        k = len(face)
        if j == 1:
            return [((x,), g) for x, g in self.children(k).get(face, [])]
        if k + j > self.rank:
            return []
        table = self._cache.get(("ext", k, j))
        if table is None:
            table = {}
            for g in self.faces[k + j]:
                for sub in itertools.combinations(g, k):
                    fs = set(sub)
                    table.setdefault(sub, []).append((tuple(x for x in g if x not in fs), g))
            self._cache[("ext", k, j)] = table
        return table.get(face, [])


_complex_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def as_complex(obj, caps: Caps | None = None) -> Complex:
    if isinstance(obj, Complex):
        return obj
    if hasattr(obj, "level_complex"):
        return obj.level_complex()
    if isinstance(obj, SpinSystem):
        cx = _complex_cache.get(obj)
        if cx is None:
            cx = Complex.from_system(obj, caps)
            _complex_cache[obj] = cx
        return cx
    raise TypeError(f"cannot build a level complex from {type(obj).__name__}")


@dataclass
class LevelSpace:
    k: int
    faces: list[Face]
    elements: list
    pi: np.ndarray
    complex: Complex = field(repr=False)

    def __len__(self):
        return len(self.faces)

    def pi_exact(self) -> list:
        cx = self.complex
        c = math.comb(cx.rank, self.k)
        return [cx.exact_ratio(cx.masses[self.k][f], cx.total * c) for f in self.faces]


@dataclass
class WalkKernel:
    matrix: np.ndarray
    states: list
    col_states: list | None = None
    stationary: np.ndarray | None = None
    reversible: bool = False
    name: str = ""

    @property
    def square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1] and self.col_states is None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self):
        return reversible_spectrum(self)

    def gap(self) -> Gap:
        return gap(self.spectrum())

    def write_csv(self, path) -> None:
        """Dense CSV of the matrix plus a ``<path>.states.json`` sidecar."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for row in self.matrix:
                w.writerow([repr(float(x)) for x in row])
        side = {
            "name": self.name,
            "rows": [_jsonable(s) for s in self.states],
            "cols": [_jsonable(s) for s in (self.col_states or self.states)],
            "stationary": None if self.stationary is None else [float(x) for x in self.stationary],
            "reversible": self.reversible,
        }
        with open(f"{path}.states.json", "w") as fh:
            json.dump(side, fh, indent=2)


def _jsonable(state: Hashable):
    if isinstance(state, Pinning):
        return {str(v): s for v, s in state}
    if isinstance(state, tuple):
        return [_jsonable(x) for x in state]
    return state


def _check_level(cx: Complex, k: int, lo: int = 0, hi: int | None = None) -> None:
    hi = cx.rank if hi is None else hi
    if not lo <= k <= hi:
        raise ValueError(f"level {k} outside [{lo}, {hi}]")


def level_space(system, k: int) -> LevelSpace:
    cx = as_complex(system)
    _check_level(cx, k)
    faces = cx.faces[k]
    denom = cx.total * math.comb(cx.rank, k)
    pi = np.array([cx.masses[k][f] / denom for f in faces], dtype=np.float64)
    return LevelSpace(k, faces, [cx.key(f) for f in faces], pi, cx)


def _cached(cx: Complex, key, build):
    if key not in cx._cache:
        cx._cache[key] = build()
    return cx._cache[key]


def down_operator(system, k: int) -> WalkKernel:
    cx = as_complex(system)
    _check_level(cx, k, 1)

    def build():
        rows, cols = cx.faces[k], cx.faces[k - 1]
        col_idx = cx.index[k - 1]
        m = np.zeros((len(rows), len(cols)))
        for i, f in enumerate(rows):
            for j in range(k):
                m[i, col_idx[f[:j] + f[j + 1:]]] += 1.0 / k
        return WalkKernel(m, [cx.key(f) for f in rows], [cx.key(f) for f in cols], name=f"down_{k}")

    return _cached(cx, ("down", k), build)


def up_operator(system, k: int) -> WalkKernel:
    cx = as_complex(system)
    _check_level(cx, k, 0, cx.rank - 1)

    def build():
        rows, cols = cx.faces[k], cx.faces[k + 1]
        row_idx = cx.index[k]
        m = np.zeros((len(rows), len(cols)))
        lo, hi = cx.masses[k], cx.masses[k + 1]
        for j, g in enumerate(cols):
            for t in range(k + 1):
                f = g[:t] + g[t + 1:]
                m[row_idx[f], j] = hi[g] / ((cx.rank - k) * lo[f])
        return WalkKernel(m, [cx.key(f) for f in rows], [cx.key(f) for f in cols], name=f"up_{k}")

    return _cached(cx, ("up", k), build)


def _square(cx: Complex, k: int, m: np.ndarray, name: str) -> WalkKernel:
    sp = level_space(cx, k)
    return WalkKernel(m, sp.elements, None, sp.pi, True, name)


def up_down(system, k: int) -> WalkKernel:
    cx = as_complex(system)
    _check_level(cx, k, 0, cx.rank - 1)
    return _cached(cx, ("updown", k), lambda: _square(
        cx, k, up_operator(cx, k).matrix @ down_operator(cx, k + 1).matrix, f"up_down_{k}"))


def down_up(system, k: int) -> WalkKernel:
    cx = as_complex(system)
    _check_level(cx, k, 1)
    return _cached(cx, ("downup", k), lambda: _square(
        cx, k, down_operator(cx, k).matrix @ up_operator(cx, k - 1).matrix, f"down_up_{k}"))


def down_up_multi(system, i: int, j: int) -> WalkKernel:
    """Walk from level ``i`` down to level ``j`` and back up."""
    cx = as_complex(system)
    _check_level(cx, i, 1)
    if not 0 <= j < i:
        raise ValueError(f"need 0 <= j < i, got i={i}, j={j}")

    def build():
        m = np.eye(len(cx.faces[i]))
        for t in range(i, j, -1):
            m = m @ down_operator(cx, t).matrix
        for t in range(j, i):
            m = m @ up_operator(cx, t).matrix
        return _square(cx, i, m, f"down_up_{i}_{j}")

    return _cached(cx, ("downupmulti", i, j), build)


def up_down_direct(system, k: int) -> WalkKernel:
    """Up-down walk written entrywise from level masses rather than as a product."""
    cx = as_complex(system)
    _check_level(cx, k, 0, cx.rank - 1)
    faces, idx = cx.faces[k], cx.index[k]
    c_k, c_k1 = math.comb(cx.rank, k), math.comb(cx.rank, k + 1)
    m = np.zeros((len(faces), len(faces)))
    for a, f in enumerate(faces):
        pik = cx.masses[k][f] / (cx.total * c_k)
        for _, g in cx.children(k)[f]:
            val = cx.masses[k + 1][g] / (cx.total * c_k1) / ((k + 1) ** 2 * pik)
            for t in range(k + 1):
                m[a, idx[g[:t] + g[t + 1:]]] += val
    return _square(cx, k, m, f"up_down_direct_{k}")


def _face_arg(cx: Complex, pinning) -> Face:
    face = cx.face_of(pinning)
    if cx.mass(face) == 0:
        raise InvalidPinning(f"no top face extends {cx.key(face)!r}")
    return face


def local_walk(system, pinning=()) -> WalkKernel:
    """Local walk on single-label extensions of a face.

    ``Q(x, y) = mu(F+x+y) / ((r-k-1) mu(F+x))`` with zero diagonal blocks and
    stationary distribution ``mu(F+x) / ((r-k) mu(F))``.
    """
    cx = as_complex(system)
    face = _face_arg(cx, pinning)
    return _cached(cx, ("local", face), lambda: _local_walk(cx, face))


def _local_walk(cx: Complex, face: Face) -> WalkKernel:
    k = len(face)
    if cx.rank - k < 2:
        raise DegenerateError(f"local walk needs at least 2 unpinned coordinates; level {k} of {cx.rank}")
    ext = cx.children(k)[face]
    labels = [x for x, _ in ext]
    fm = cx.masses[k][face]
    top = cx.masses[k + 2]
    m = np.zeros((len(ext), len(ext)))
    for a, (x, gx) in enumerate(ext):
        mx = cx.masses[k + 1][gx]
        for b, y in enumerate(labels):
            if x == y:
                continue
            mxy = top.get(tuple(sorted(face + (x, y))), 0)
            if mxy:
                m[a, b] = mxy / ((cx.rank - k - 1) * mx)
    pi = np.array([cx.masses[k + 1][g] / ((cx.rank - k) * fm) for _, g in ext])
    return WalkKernel(m, [cx.state_key(x) for x in labels], None, pi, True, f"local_{k}")


def conditional_level(system, pinning, j: int) -> LevelSpace:
    """Distribution over size-``j`` extensions: ``mu(F+T) / (C(r-k, j) mu(F))``."""
    cx = as_complex(system)
    face = _face_arg(cx, pinning)
    k = len(face)
    if not 0 <= j <= cx.rank - k:
        raise ValueError(f"extension size {j} outside [0, {cx.rank - k}]")
    ext = cx.extensions(face, j)
    denom = math.comb(cx.rank - k, j) * cx.masses[k][face]
    pi = np.array([cx.masses[k + j][g] / denom for _, g in ext])
    return LevelSpace(j, [d for d, _ in ext], [tuple(cx.state_key(x) for x in d) for d, _ in ext], pi, cx)


@dataclass(frozen=True)
class LevelGap:
    k: int
    gamma: float
    witness: object
    reducible: bool
    count: int


def local_gaps(system) -> list[LevelGap]:
    """Worst local-walk gap at each level ``k = 0 .. r-2``; reducible links report 0."""
    cx = as_complex(system)
    out = []
    for k in range(cx.rank - 1):
        best, witness, red = math.inf, None, False
        for f in cx.faces[k]:
            g = local_walk(cx, f if cx.kind == "matroid" else cx.key(f)).gap()
            val = 0.0 if g.reducible else g.gamma
            if val < best:
                best, witness, red = val, cx.key(f), g.reducible
        out.append(LevelGap(k, float(best), witness, red, len(cx.faces[k])))
    return out


def dirichlet(kernel, f, pi=None) -> float:
    p = np.asarray(kernel.matrix if isinstance(kernel, WalkKernel) else kernel, dtype=float)
    if pi is None:
        pi = kernel.stationary
    f = np.asarray(f, dtype=float)
    pi = np.asarray(pi, dtype=float)
    if f.shape != (p.shape[0],) or pi.shape != f.shape:
        raise ValueError(f"function of length {f.shape} does not match state space {p.shape[0]}")
    diff = f[:, None] - f[None, :]
    return 0.5 * float(np.sum(pi[:, None] * p * diff * diff))


def _dist(space) -> np.ndarray:
    return np.asarray(space.pi if isinstance(space, LevelSpace) else space, dtype=float)


def variance(space, f) -> float:
    pi = _dist(space)
    f = np.asarray(f, dtype=float)
    if f.shape != pi.shape:
        raise ValueError(f"function of length {f.shape} does not match distribution {pi.shape}")
    mean = float(pi @ f)
    return float(pi @ (f - mean) ** 2)


def variance_pairwise(space, f) -> float:
    pi = _dist(space)
    f = np.asarray(f, dtype=float)
    if f.shape != pi.shape:
        raise ValueError(f"function of length {f.shape} does not match distribution {pi.shape}")
    diff = f[:, None] - f[None, :]
    return 0.5 * float(pi @ (diff * diff) @ pi)


def project(system, f, k: int) -> np.ndarray:
    """Push a function on level ``k+1`` down to level ``k`` through the up operator."""
    up = up_operator(system, k)
    f = np.asarray(f, dtype=float)
    if f.shape != (up.matrix.shape[1],):
        raise ValueError(f"function of length {f.shape} does not match level {k + 1}")
    return up.matrix @ f


def projections(system, f, top: int) -> dict[int, np.ndarray]:
    """``{top: f, top-1: P_up f, ..., 0: ...}``."""
    out = {top: np.asarray(f, dtype=float)}
    for k in range(top - 1, -1, -1):
        out[k] = project(system, out[k + 1], k)
    return out


def restrict(system, f, pinning, j: int, level: int) -> np.ndarray:
    """Values of a level function on the size-``j`` extensions of ``pinning``."""
    cx = as_complex(system)
    face = _face_arg(cx, pinning)
    idx = cx.index[level]
    return np.array([f[idx[g]] for _, g in cx.extensions(face, j)], dtype=float)
