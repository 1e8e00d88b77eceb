"""Independence-oracle matroids, minors, bases walks, trickle-down and reliability.

Ground sets are ``range(ground_size)``. Minors that shrink the ground set
relabel the surviving elements to ``0..m-1`` and keep the original ids in
``labels``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, Caps, DegenerateError, MatroidAxiomError, default_caps
from .gibbs import Graph
from .levels import Complex, WalkKernel, dirichlet, local_walk
from .numerics import gap, reversible_spectrum

Oracle = Callable[[frozenset], bool]


@dataclass(eq=False)
class Matroid:
    ground_size: int
    oracle: Oracle = field(repr=False)
    kind: str
    params: dict = field(default_factory=dict, repr=False)
    labels: tuple = ()
    caps: Caps = field(default_factory=default_caps, repr=False)

    def __post_init__(self):
        if not self.labels:
            self.labels = tuple(range(self.ground_size))
        self._bases: list[tuple[int, ...]] | None = None
        self._complex: Complex | None = None
        self._rank: int | None = None

    @property
    def ground(self) -> range:
        return range(self.ground_size)

    def is_independent(self, subset: Iterable[int]) -> bool:
        s = frozenset(int(x) for x in subset)
        if any(not 0 <= x < self.ground_size for x in s):
            raise ValueError(f"subset {sorted(s)} leaves the ground set of size {self.ground_size}")
        return bool(self.oracle(s))

    def rank_of(self, subset: Iterable[int]) -> int:
        """Greedy rank: size of a maximal independent subset."""
        cur: list[int] = []
        for x in sorted(set(subset)):
            if self.is_independent(cur + [x]):
                cur.append(x)
        return len(cur)

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = self.rank_of(self.ground)
        return self._rank

    def bases(self) -> list[tuple[int, ...]]:
        """All bases in lexicographic order, by depth-first search with rank pruning."""
        if self._bases is None:
            r, n = self.rank, self.ground_size
            out: list[tuple[int, ...]] = []

            def dfs(start: int, cur: list[int]) -> None:
                if len(cur) == r:
                    out.append(tuple(cur))
                    if len(out) > self.caps.max_bases:
                        raise CapExceeded("bases", len(out), self.caps.max_bases)
                    return
                for e in range(start, n - (r - len(cur)) + 1):
                    nxt = cur + [e]
                    if not self.is_independent(nxt):
                        continue
                    if self.rank_of(nxt + list(range(e + 1, n))) < r:
                        continue
                    dfs(e + 1, nxt)

            dfs(0, [])
            self._bases = out
        return list(self._bases)

    def original(self, elements: Iterable[int]) -> tuple:
        return tuple(self.labels[e] for e in elements)

    def level_complex(self) -> Complex:
        if self._complex is None:
            self._complex = Complex.from_bases(self.bases(), self.rank, self.caps)
        return self._complex

    def independent_sets(self) -> list[frozenset]:
        _subset_cap(self.ground_size, self.caps)
        out = []
        for k in range(self.rank + 1):
            for s in itertools.combinations(self.ground, k):
                fs = frozenset(s)
                if self.oracle(fs):
                    out.append(fs)
        return out

    def describe(self) -> dict:
        return {"kind": self.kind, "ground_size": self.ground_size, **{k: _plain(v) for k, v in self.params.items()}}


def _plain(v):
    if isinstance(v, Matroid):
        return v.describe()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, Fraction):
        return str(v)
    return v


def _subset_cap(n: int, caps: Caps) -> None:
    if n >= 63 or (1 << n) > caps.max_subsets:
        raise CapExceeded("subsets of the ground set", 1 << min(n, 62), caps.max_subsets)


# constructors

def uniform(n: int, r: int, caps: Caps | None = None) -> Matroid:
    if not 0 <= r <= n:
        raise ValueError(f"uniform matroid needs 0 <= r <= n, got n={n}, r={r}")
    return Matroid(n, lambda s: len(s) <= r, "uniform", {"n": n, "r": r}, caps=caps or default_caps())


def _forest(edges: Sequence[tuple[int, int]], s: frozenset) -> bool:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    for e in s:
        u, v = edges[e]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def graphic(graph: Graph | Sequence[Sequence[int]], caps: Caps | None = None) -> Matroid:
    """Cycle matroid; loops and parallel edges are allowed when given as an edge list."""
    if isinstance(graph, Graph):
        edges = list(graph.edges)
    else:
        edges = [(int(u), int(v)) for u, v in graph]
    return Matroid(len(edges), lambda s: _forest(edges, s), "graphic", {"edges": [list(e) for e in edges]},
                   caps=caps or default_caps())


def _rank_rational(vectors: list[list[Fraction]]) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _rank_mod(vectors: list[list[int]], p: int) -> int:
    rows = [[x % p for x in v] for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] * inv % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def linear(vectors: Sequence[Sequence], prime: int | None = None, caps: Caps | None = None) -> Matroid:
    """Column matroid of the given vectors, over the rationals or ``GF(prime)``."""
    if prime is not None:
        if not _is_prime(prime) or prime > 2**31:
            raise ValueError(f"field size {prime} must be a prime at most 2^31")
        vecs = [[int(x) for x in v] for v in vectors]
        oracle = lambda s: _rank_mod([vecs[e] for e in s], prime) == len(s)
    else:
        vecs = [[Fraction(x) for x in v] for v in vectors]
        oracle = lambda s: _rank_rational([vecs[e] for e in s]) == len(s)
    if len({len(v) for v in vecs}) > 1:
        raise ValueError("vectors must share one dimension")
    return Matroid(len(vecs), oracle, "linear", {"vectors": [[str(x) for x in v] for v in vecs], "prime": prime},
                   caps=caps or default_caps())


def _matchable(adj: Sequence[Sequence[int]], s: frozenset) -> bool:
    match: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in match or augment(match[w], seen):
                match[w] = u
                return True
        return False

    return all(augment(u, set()) for u in sorted(s))


def transversal(neighbors: Sequence[Iterable[int]], caps: Caps | None = None) -> Matroid:
    """Left vertices ``i`` with right-neighbour sets ``neighbors[i]``; matchable sets are independent."""
    adj = [sorted(set(int(x) for x in ns)) for ns in neighbors]
    return Matroid(len(adj), lambda s: _matchable(adj, s), "transversal", {"neighbors": adj},
                   caps=caps or default_caps())


def _exchange_witness(bases: set[frozenset]) -> tuple | None:
    for B1 in sorted(bases, key=sorted):
        for B2 in sorted(bases, key=sorted):
            for x in sorted(B1 - B2):
                if not any((B1 - {x}) | {y} in bases for y in B2 - B1):
                    return (sorted(B1), sorted(B2), x)
    return None


def explicit(bases: Iterable[Iterable[int]], ground_size: int | None = None, validate: bool = True,
             caps: Caps | None = None) -> Matroid:
    """Matroid given by its bases; independent sets are subsets of some basis."""
    fam = [frozenset(int(x) for x in b) for b in bases]
    if not fam:
        raise MatroidAxiomError("a matroid needs at least one basis")
    n = ground_size if ground_size is not None else max((max(b) + 1 for b in fam if b), default=0)
    if validate:
        sizes = sorted({len(b) for b in fam})
        if len(sizes) > 1:
            small = next(b for b in fam if len(b) == sizes[0])
            big = next(b for b in fam if len(b) == sizes[-1])
            raise MatroidAxiomError("bases have unequal sizes", (sorted(small), sorted(big)))
        w = _exchange_witness(set(fam))
        if w is not None:
            raise MatroidAxiomError("basis exchange fails", w)
    fset = list(dict.fromkeys(fam))
    return Matroid(n, lambda s: any(s <= b for b in fset), "explicit", {"bases": [sorted(b) for b in fset]},
                   caps=caps or default_caps())


# minors

def dual(m: Matroid) -> Matroid:
    r = m.rank
    E = frozenset(m.ground)
    return Matroid(m.ground_size, lambda s: m.rank_of(E - s) == r, "dual", {"of": m}, m.labels, m.caps)


def restrict(m: Matroid, subset: Iterable[int]) -> Matroid:
    keep = sorted(set(int(x) for x in subset))
    return Matroid(len(keep), lambda s: m.oracle(frozenset(keep[e] for e in s)), "restrict",
                   {"of": m, "subset": keep}, tuple(m.labels[e] for e in keep), m.caps)


def contract(m: Matroid, subset: Iterable[int]) -> Matroid:
    S = frozenset(int(x) for x in subset)
    if not m.is_independent(S):
        raise MatroidAxiomError("contraction set is dependent", sorted(S))
    keep = [e for e in m.ground if e not in S]
    return Matroid(len(keep), lambda s: m.oracle(S | frozenset(keep[e] for e in s)), "contract",
                   {"of": m, "subset": sorted(S)}, tuple(m.labels[e] for e in keep), m.caps)


def truncate(m: Matroid, k: int) -> Matroid:
    if not 0 <= k <= m.rank:
        raise ValueError(f"truncation level {k} outside [0, {m.rank}]")
    return Matroid(m.ground_size, lambda s: len(s) <= k and m.oracle(s), "truncate", {"of": m, "k": k},
                   m.labels, m.caps)


# axioms

@dataclass
class AxiomReport:
    passed: bool
    failures: list[tuple[str, object]]
    checked_sets: int

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked_sets": self.checked_sets,
                "failures": [{"axiom": a, "witness": _plain(w)} for a, w in self.failures]}


def axioms_check(m: Matroid) -> AxiomReport:
    """Exhaustive check of the empty set, downward closure, augmentation and equal basis sizes."""
    _subset_cap(m.ground_size, m.caps)
    n = m.ground_size
    indep: dict[int, list[frozenset]] = {}
    for k in range(n + 1):
        for s in itertools.combinations(range(n), k):
            fs = frozenset(s)
            if m.oracle(fs):
                indep.setdefault(k, []).append(fs)
    failures: list[tuple[str, object]] = []
    if frozenset() not in indep.get(0, []):
        failures.append(("empty_set", []))
    all_ind = {s for lst in indep.values() for s in lst}
    for s in sorted(all_ind, key=lambda x: (len(x), sorted(x))):
        bad = next((e for e in sorted(s) if s - {e} not in all_ind), None)
        if bad is not None:
            failures.append(("downward_closure", (sorted(s), bad)))
            break
    done = False
    for k in sorted(indep):
        for S in indep[k]:
            for T in indep.get(k + 1, []):
                if not any(S | {e} in all_ind for e in T - S):
                    failures.append(("augmentation", (sorted(S), sorted(T))))
                    done = True
                    break
            if done:
                break
        if done:
            break
    maximal = [s for s in all_ind if not any(s | {e} in all_ind for e in range(n) if e not in s)]
    sizes = sorted({len(s) for s in maximal})
    if len(sizes) > 1:
        small = min(maximal, key=lambda s: (len(s), sorted(s)))
        big = max(maximal, key=lambda s: (len(s), [-x for x in sorted(s)]))
        failures.append(("equal_basis_size", (sorted(small), sorted(big))))
    return AxiomReport(not failures, failures, len(all_ind))


# walks

def bases_exchange_kernel(m: Matroid) -> WalkKernel:
    """Drop a uniform element ``e`` of ``B``, add a uniform ``f`` with ``B - e + f`` a basis.

    ``f = e`` is always allowed, so every state has a holding probability.
    """
    B = m.bases()
    idx = {b: i for i, b in enumerate(B)}
    r = m.rank
    P = np.zeros((len(B), len(B)))
    for i, b in enumerate(B):
        if r == 0:
            P[i, i] = 1.0
            continue
        for e in b:
            rest = frozenset(b) - {e}
            F = [f for f in m.ground if f not in rest and m.is_independent(rest | {f})]
            for f in F:
                P[i, idx[tuple(sorted(rest | {f}))]] += 1.0 / (r * len(F))
    pi = np.full(len(B), 1.0 / len(B))
    return WalkKernel(P, [m.original(b) for b in B], None, pi, True, "bases_exchange")


@dataclass
class BasesTrajectory:
    seed: int
    initial: tuple[int, ...]
    final: tuple[int, ...]
    counts: dict[tuple[int, ...], int]
    steps: int
    states: list[tuple[int, ...]] | None = None

    def tv_to_uniform(self, bases: Sequence[tuple[int, ...]]) -> float:
        tot = sum(self.counts.values())
        u = 1.0 / len(bases)
        keys = set(self.counts) | set(bases)
        return 0.5 * sum(abs(self.counts.get(b, 0) / tot - (u if b in set(bases) else 0.0)) for b in keys)


def greedy_basis(m: Matroid) -> tuple[int, ...]:
    cur: list[int] = []
    for e in m.ground:
        if m.is_independent(cur + [e]):
            cur.append(e)
    return tuple(cur)


def simulate_bases_exchange(m: Matroid, steps: int, seed: int = 0, initial: Sequence[int] | None = None,
                            record: bool = False) -> BasesTrajectory:
    """Oracle-driven bases-exchange chain; uses no enumeration of bases."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    cur = tuple(sorted(initial)) if initial is not None else greedy_basis(m)
    if len(cur) != m.rank or not m.is_independent(cur):
        raise ValueError(f"initial set {cur} is not a basis")
    rng = np.random.default_rng(seed)
    r = len(cur)
    pick = rng.random(steps)
    swap = rng.random(steps)
    counts: dict[tuple[int, ...], int] = {}
    kept = [cur] if record else None
    start = cur
    for t in range(steps):
        if r:
            e = cur[int(pick[t] * r)]
            rest = frozenset(cur) - {e}
            F = [f for f in m.ground if f not in rest and m.is_independent(rest | {f})]
            f = F[int(swap[t] * len(F))]
            cur = tuple(sorted(rest | {f}))
        counts[cur] = counts.get(cur, 0) + 1
        if record:
            kept.append(cur)
    if steps == 0:
        counts = {cur: 1}
    return BasesTrajectory(seed, start, cur, counts, steps, kept)


def matroid_local_walk(m: Matroid, S: Iterable[int] = ()) -> WalkKernel:
    """Local walk at independent ``S``: ``Q(a, b)`` proportional to bases containing ``S+a+b``."""
    S = tuple(sorted(int(x) for x in S))
    if not m.is_independent(S):
        raise MatroidAxiomError("link of a dependent set", list(S))
    if len(S) > m.rank - 2:
        raise DegenerateError(f"local walk needs |S| <= r-2 = {m.rank - 2}")
    return local_walk(m.level_complex(), S)


@dataclass
class Rank2Structure:
    loops: list[int]
    classes: list[list[int]]
    lambda2: float


def rank2_structure(m: Matroid) -> Rank2Structure:
    """Loops and parallel classes of a rank-2 matroid; cross-class pairs must all be bases."""
    if m.rank != 2:
        raise ValueError(f"rank-2 structure needs rank 2, got {m.rank}")
    loops = [e for e in m.ground if not m.is_independent([e])]
    rest = [e for e in m.ground if e not in loops]
    classes: list[list[int]] = []
    for e in rest:
        home = [c for c in classes if not m.is_independent([c[0], e])]
        if len(home) > 1:
            raise MatroidAxiomError("parallelism is not transitive", (home[0][0], e, home[1][0]))
        if home:
            home[0].append(e)
        else:
            classes.append([e])
    for c in classes:
        for a, b in itertools.combinations(c, 2):
            if m.is_independent([a, b]):
                raise MatroidAxiomError("parallel class contains an independent pair", (a, b))
    for c1, c2 in itertools.combinations(classes, 2):
        for a in c1:
            for b in c2:
                if not m.is_independent([a, b]):
                    raise MatroidAxiomError("cross-class pair is dependent", (a, b))
    spec = reversible_spectrum(matroid_local_walk(m, ()))
    lam2 = float(spec.eigenvalues[1]) if len(spec) > 1 else 0.0
    return Rank2Structure(loops, classes, lam2)


# trickle-down

TOL_INEQ = 1e-9
TOL_EIGVEC = 1e-8
TOL_IDENTITY = 1e-10


@dataclass
class LinkGap:
    S: tuple[int, ...]
    gamma: float
    lambda2: float
    reducible: bool


@dataclass
class TrickleReport:
    rank: int
    links: list[LinkGap]
    level_min: list[float]
    recursion_margins: list[tuple[tuple[int, ...], float]]
    level_recursion_margins: list[float]
    rank2_lambda2_max: float | None
    final_min_gamma: float
    eigvec_deviation: float
    dirichlet_deviation: float
    expectation_deviation: float
    aborted: bool = False
    witness: tuple | None = None

    @property
    def passed(self) -> bool:
        if self.aborted:
            return False
        ok = all(mg >= -TOL_INEQ for _, mg in self.recursion_margins)
        ok &= all(mg >= -TOL_INEQ for mg in self.level_recursion_margins)
        ok &= self.rank2_lambda2_max is None or self.rank2_lambda2_max <= TOL_INEQ
        ok &= self.final_min_gamma >= 1 - TOL_INEQ
        ok &= self.eigvec_deviation <= TOL_EIGVEC
        ok &= self.dirichlet_deviation <= TOL_IDENTITY and self.expectation_deviation <= TOL_IDENTITY
        return bool(ok)

    def to_json(self) -> dict:
        return {
            "rank": self.rank, "passed": self.passed, "aborted": self.aborted,
            "witness": _plain(self.witness), "level_min_gamma": self.level_min,
            "min_recursion_margin": min((mg for _, mg in self.recursion_margins), default=None),
            "level_recursion_margins": self.level_recursion_margins,
            "rank2_lambda2_max": self.rank2_lambda2_max, "final_min_gamma": self.final_min_gamma,
            "eigvec_deviation": self.eigvec_deviation, "dirichlet_deviation": self.dirichlet_deviation,
            "expectation_deviation": self.expectation_deviation, "links": len(self.links),
        }


def trickle_down_certify(m: Matroid, seed: int = 0, probes: int = 32) -> TrickleReport:
    """Measure every link gap and check the downward recursion, the rank-2 base case,
    the second-eigenvector relation and the two link-decomposition identities."""
    cx = m.level_complex()
    r = m.rank
    links: dict[tuple, LinkGap] = {}
    vecs: dict[tuple, tuple[np.ndarray, list]] = {}
    for k in range(max(r - 1, 0)):
        for S in cx.faces[k]:
            Q = local_walk(cx, S)
            spec = reversible_spectrum(Q)
            g = gap(spec)
            links[S] = LinkGap(S, g.gamma, g.lambda_2, g.reducible)
            if g.reducible:
                return TrickleReport(r, list(links.values()), [], [], [], None, 0.0, 0.0, 0.0, 0.0,
                                     aborted=True, witness=m.original(S))
            vecs[S] = (spec.eigenvectors[:, 1] if len(spec) > 1 else np.zeros(len(spec)), Q.states)
    level_min = [min(links[S].gamma for S in cx.faces[k]) for k in range(max(r - 1, 0))]
    margins = []
    for k in range(max(r - 2, 0)):
        for S in cx.faces[k]:
            child = min(links[g].gamma for _, g in cx.children(k)[S])
            margins.append((m.original(S), links[S].gamma - (2 - 1 / child)))
    level_margins = [level_min[k] - (2 - 1 / level_min[k + 1]) for k in range(max(r - 2, 0))]
    rank2 = max((links[S].lambda2 for S in cx.faces[r - 2]), default=None) if r >= 2 else None
    final = min((lg.gamma for lg in links.values()), default=math.inf)

    eig_dev = 0.0
    for S, (fstar, states) in vecs.items():
        if len(states) < 2:
            continue
        pos = {x: i for i, x in enumerate(states)}
        lam = 1 - links[S].gamma
        k = len(S)
        for a, g in cx.children(k)[S]:
            ext = cx.children(k + 1)[g]
            pi = np.array([cx.masses[k + 2][h] for _, h in ext], dtype=float)
            if pi.sum() == 0:
                continue
            pi /= pi.sum()
            vals = np.array([fstar[pos[b]] for b, _ in ext])
            eig_dev = max(eig_dev, abs(float(pi @ vals) - lam * fstar[pos[a]]))

    rng = np.random.default_rng(seed)
    dir_dev = exp_dev = 0.0
    for _ in range(probes):
        f = rng.standard_normal(m.ground_size)
        for k in range(max(r - 1, 0)):
            for S in cx.faces[k]:
                ext = cx.children(k)[S]
                piS = np.array([cx.masses[k + 1][g] for _, g in ext], dtype=float)
                piS /= piS.sum()
                fx = np.array([f[a] for a, _ in ext])
                acc = 0.0
                for (a, g), w in zip(ext, piS):
                    sub = cx.children(k + 1)[g]
                    q = np.array([cx.masses[k + 2][h] for _, h in sub], dtype=float)
                    acc += w * float((q / q.sum()) @ np.array([f[b] for b, _ in sub]))
                exp_dev = max(exp_dev, abs(float(piS @ fx) - acc))
                if k <= r - 3:
                    lhs = dirichlet(local_walk(cx, S), fx)
                    rhs = 0.0
                    for (a, g), w in zip(ext, piS):
                        Qa = local_walk(cx, g)
                        rhs += w * dirichlet(Qa, np.array([f[b] for b in Qa.states]))
                    dir_dev = max(dir_dev, abs(lhs - rhs))
    return TrickleReport(r, list(links.values()), level_min, margins, level_margins, rank2, final,
                         eig_dev, dir_dev, exp_dev)


# reliability

@dataclass
class ReliabilityResult:
    dual_formula: Fraction | float | None
    direct_enumeration: Fraction | float | None

    @property
    def match(self) -> bool | None:
        if self.dual_formula is None or self.direct_enumeration is None:
            return None
        if isinstance(self.dual_formula, Fraction) and isinstance(self.direct_enumeration, Fraction):
            return self.dual_formula == self.direct_enumeration
        return abs(float(self.dual_formula) - float(self.direct_enumeration)) <= 1e-12

    def to_json(self) -> dict:
        out = {"dual_formula": None if self.dual_formula is None else float(self.dual_formula),
               "direct_enumeration": None if self.direct_enumeration is None else float(self.direct_enumeration)}
        for key in ("dual_formula", "direct_enumeration"):
            v = getattr(self, key)
            if isinstance(v, Fraction):
                out[key + "_exact"] = str(v)
        if self.match is not None:
            out["match"] = self.match
        return out


def _prob(p):
    if isinstance(p, str):
        p = Fraction(p)
    if isinstance(p, (int, Fraction)) and not isinstance(p, bool):
        p = Fraction(p)
    else:
        p = float(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


def reliability_dual(m: Matroid, p) -> Fraction | float:
    """``sum_k (1-p)^k p^(n-k) * #{independent sets of the dual of size k}``."""
    p = _prob(p)
    n = m.ground_size
    d = dual(m)
    counts = [0] * (n + 1)
    for s in d.independent_sets():
        counts[len(s)] += 1
    return sum((c * (1 - p) ** k * p ** (n - k) for k, c in enumerate(counts)), p * 0)


def reliability_direct(m: Matroid, p) -> Fraction | float:
    """``P[X contains a basis]`` for ``X`` keeping each element independently with probability ``p``."""
    p = _prob(p)
    n = m.ground_size
    _subset_cap(n, m.caps)
    r = m.rank
    total = p * 0
    for mask in range(1 << n):
        keep = [e for e in range(n) if (mask >> e) & 1]
        if len(keep) >= r and m.rank_of(keep) == r:
            total += p ** len(keep) * (1 - p) ** (n - len(keep))
    return total


def reliability(m: Matroid, p) -> ReliabilityResult:
    out = []
    for fn in (reliability_dual, reliability_direct):
        try:
            out.append(fn(m, p))
        except CapExceeded:
            out.append(None)
    return ReliabilityResult(*out)
