"""Glauber and block dynamics, mixing times, entropy, simulation, shattering."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import CapExceeded, Caps, ConvergenceError, NonErgodicError, default_caps
from .gibbs import Graph, SpinSystem, _parse_activity
from .levels import WalkKernel
from .numerics import gap, reversible_spectrum

MAX_DOUBLINGS = 62


def _states(system: SpinSystem) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in row) for row in system.configs]


def glauber_kernel(system: SpinSystem) -> WalkKernel:
    """Heat-bath single-site dynamics built from flip neighbours in the support."""
    n, N = system.n, system.size
    w = [float(x) if not system.exact else x for x in system.weights]
    m = np.zeros((N, N))
    states = _states(system)
    for i, s in enumerate(states):
        for v in range(n):
            t = list(s)
            t[v] ^= 1
            j = system._index.get(tuple(t))
            if j is None:
                m[i, i] += 1.0 / n
            else:
                z = w[i] + w[j]
                m[i, j] += (w[j] / z) / n
                m[i, i] += (w[i] / z) / n
    return WalkKernel(m, states, None, system.probs.copy(), True, "glauber")


def block_kernel(system: SpinSystem, m: int, caps: Caps | None = None) -> WalkKernel:
    """Uniform block heat-bath: pick ``m`` vertices uniformly, resample them jointly."""
    caps = caps or default_caps()
    n, N = system.n, system.size
    if not 1 <= m <= n:
        raise ValueError(f"block size {m} outside [1, {n}]")
    blocks = math.comb(n, m)
    if blocks * N > caps.max_subsets * 64:
        raise CapExceeded("block kernel (blocks x states)", blocks * N, caps.max_subsets * 64)
    w = np.asarray([float(x) for x in system.weights])
    P = np.zeros((N, N))
    for S in itertools.combinations(range(n), m):
        rest = [v for v in range(n) if v not in S]
        keys = system.configs[:, rest]
        groups: dict[bytes, list[int]] = {}
        for i, row in enumerate(keys):
            groups.setdefault(row.tobytes(), []).append(i)
        for idx in groups.values():
            idx = np.array(idx)
            cond = w[idx] / w[idx].sum()
            P[np.ix_(idx, idx)] += cond[None, :] / blocks
    return WalkKernel(P, _states(system), None, system.probs.copy(), True, f"block_{m}")


def lazy(kernel: WalkKernel) -> WalkKernel:
    if kernel.matrix.shape[0] != kernel.matrix.shape[1]:
        raise ValueError("laziness needs a square kernel")
    m = (kernel.matrix + np.eye(kernel.dim)) / 2.0
    return WalkKernel(m, kernel.states, None, kernel.stationary, kernel.reversible, f"lazy_{kernel.name}")


def tv_rows(power: np.ndarray, pi: np.ndarray) -> float:
    """Worst-start total variation distance ``max_x TV(P^t(x, .), pi)``."""
    return float(0.5 * np.max(np.sum(np.abs(power - pi[None, :]), axis=1)))


def _renorm(m: np.ndarray) -> np.ndarray:
    return m / m.sum(axis=1, keepdims=True)


def exact_mixing_times(kernel: WalkKernel, eps_list: Sequence[float]) -> dict[float, int]:
    """Smallest ``t`` with worst-start TV at most ``eps``, by binary lifting.

    Uses that the worst-start distance is nonincreasing in ``t``.
    """
    P = np.asarray(kernel.matrix, dtype=float)
    pi = np.asarray(kernel.stationary, dtype=float)
    powers = [P]
    out = {}
    for eps in sorted(set(eps_list), reverse=True):
        if not 0 < eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {eps}")
        if tv_rows(np.eye(len(pi)), pi) <= eps:
            out[eps] = 0
            continue
        while tv_rows(powers[-1], pi) > eps:
            if len(powers) > MAX_DOUBLINGS:
                raise ConvergenceError(f"distance still above {eps} after 2^{MAX_DOUBLINGS} steps")
            powers.append(_renorm(powers[-1] @ powers[-1]))
        # largest t with d(t) > eps, assembled from the squared powers
        t, M = 0, np.eye(len(pi))
        for j in range(len(powers) - 1, -1, -1):
            cand = _renorm(M @ powers[j])
            if tv_rows(cand, pi) > eps:
                M, t = cand, t + (1 << j)
        out[eps] = t + 1
    return out


@dataclass
class MixingReport:
    gamma: float
    absolute_gamma: float
    lambda_star: float
    t_relax: float
    t_mix_exact: dict[float, int]
    mu_star: float
    psd_min_eigenvalue: float
    n: int | None
    bound_t_mix: float | None
    bound_t_relax: float | None
    bound_t_mix_standard: float
    gap_inverse: float
    relax_over_n: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["t_mix_exact"] = {repr(k): v for k, v in self.t_mix_exact.items()}
        return d


def _safe_div(a: float, b: float) -> float:
    return math.inf if b <= 0 else a / b


def mixing_report(kernel: WalkKernel, eps_list: Iterable[float] = (0.25,), n: int | None = None) -> MixingReport:
    """Exact mixing times next to gap-based bounds.

    ``bound_t_mix = (n / gamma) log(1 / mu_star)`` and ``bound_t_relax = n / gamma``
    when ``n`` is given; ``bound_t_mix_standard = t_relax * log(1 / (eps mu_star))``
    at ``eps = 1/4``.
    """
    eps_list = sorted(set(list(eps_list) + [0.25]), reverse=True)
    spec = reversible_spectrum(kernel)
    g = gap(spec)
    if g.reducible:
        raise NonErgodicError("kernel is reducible (eigenvalue 1 has multiplicity > 1)")
    if g.absolute_gamma <= 0:
        raise NonErgodicError("kernel is periodic (eigenvalue -1 present)")
    t_mix = exact_mixing_times(kernel, eps_list)
    mu_star = float(np.min(kernel.stationary))
    t_relax = _safe_div(1.0, 1.0 - g.lambda_star)
    log_mu = math.log(1.0 / mu_star)
    notes = []
    if g.lambda_min < 0:
        notes.append("negative eigenvalues: absolute gap differs from gap")
    return MixingReport(
        gamma=g.gamma,
        absolute_gamma=g.absolute_gamma,
        lambda_star=g.lambda_star,
        t_relax=t_relax,
        t_mix_exact=t_mix,
        mu_star=mu_star,
        psd_min_eigenvalue=float(spec.eigenvalues[-1]),
        n=n,
        bound_t_mix=None if n is None else _safe_div(n, g.gamma) * log_mu,
        bound_t_relax=None if n is None else _safe_div(n, g.gamma),
        bound_t_mix_standard=t_relax * math.log(4.0 / mu_star),
        gap_inverse=_safe_div(1.0, g.gamma),
        relax_over_n=None if not n else t_relax / n,
        notes=notes,
    )


# simulation

CHUNK = 1 << 18


@dataclass
class Trajectory:
    seed: int
    n: int
    initial: int
    states: np.ndarray | None
    final: int
    counts: dict[int, int]
    steps: int

    def config(self, code: int) -> tuple[int, ...]:
        return tuple((int(code) >> v) & 1 for v in range(self.n))

    def configs(self) -> list[tuple[int, ...]]:
        seq = [self.initial] if self.states is None else list(self.states)
        return [self.config(c) for c in seq]

    def empirical(self) -> dict[tuple[int, ...], float]:
        tot = sum(self.counts.values())
        return {self.config(c): k / tot for c, k in self.counts.items()}

    def tv_to(self, system: SpinSystem) -> float:
        emp = self.empirical()
        support = set(emp) | set(_states(system))
        return 0.5 * sum(abs(emp.get(s, 0.0) - float(system.prob(s))) for s in support)


def _code(config: Sequence[int]) -> int:
    return sum(int(b) << v for v, b in enumerate(config))


def simulate_glauber(graph: Graph, activity, steps: int, seed: int = 0,
                     initial: Sequence[int] | None = None, record: bool = True) -> Trajectory:
    """Hard-core Glauber dynamics on a bitmask state with a PCG64 stream.

    Each step picks a uniform vertex, proposes occupied with probability
    ``lambda/(1+lambda)`` (unoccupied otherwise) and rejects proposals that
    break independence. Random draws come in fixed-size chunks so the path is
    identical on every backend.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    lam = float(_parse_activity(activity))
    if lam <= 0:
        raise ValueError("activity must be positive")
    n = graph.n
    state = 0 if initial is None else _code(initial)
    if initial is not None and not graph.is_independent(v for v in range(n) if (state >> v) & 1):
        raise ValueError("initial configuration is not an independent set")
    p_occ = lam / (1.0 + lam)
    nbr = np.ascontiguousarray(graph.neighbor_masks(), dtype=np.int64)
    rng = np.random.default_rng(seed)
    start = state
    kept = [] if record else None
    counts: dict[int, int] = {}
    done = 0
    while done < steps:
        size = min(CHUNK, steps - done)
        verts = np.ascontiguousarray(rng.integers(0, n, size=size), dtype=np.int64)
        u = np.ascontiguousarray(rng.random(size))
        out = np.empty(size, dtype=np.int64)
        state = int(_kernels.glauber_hardcore(nbr, np.int64(state), verts, u, p_occ, out))
        vals, cnt = np.unique(out, return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            counts[v] = counts.get(v, 0) + c
        if record:
            kept.append(out)
        done += size
    if steps == 0:
        counts = {start: 1}
    states = None
    if record:
        states = np.concatenate([np.array([start], dtype=np.int64)] + kept)
    return Trajectory(seed, n, start, states, state, counts, steps)


# shattering

@dataclass
class ShatterRow:
    vertex: int
    k: int
    prob: Fraction | float
    bound: Fraction
    ok: bool
    ci_high: float | None = None


@dataclass
class ShatterReport:
    n: int
    m: int
    alpha: Fraction
    max_degree: int
    exact: bool
    samples: int
    rows: list[ShatterRow]

    @property
    def violations(self) -> list[ShatterRow]:
        return [r for r in self.rows if not r.ok]

    def to_json(self) -> dict:
        return {
            "n": self.n, "m": self.m, "alpha": str(self.alpha), "max_degree": self.max_degree,
            "exact": self.exact, "samples": self.samples, "violations": len(self.violations),
            "rows": [{"vertex": r.vertex, "k": r.k, "prob": float(r.prob), "bound": float(r.bound),
                      "ok": r.ok, "ci_high": r.ci_high} for r in self.rows],
        }


def shattering_bound(alpha: Fraction, delta: int, k: int) -> Fraction:
    return alpha * (6 * delta * alpha) ** (k - 1)


def shattering_check(graph: Graph, m: int, seed: int = 0, samples: int = 200_000,
                     caps: Caps | None = None) -> ShatterReport:
    """Component-size law of a uniform ``m``-subset against ``alpha (6 Delta alpha)^(k-1)``.

    Exact over all ``C(n, m)`` subsets when that fits the subset cap; otherwise
    Monte Carlo, where a row passes if the estimate sits below the bound or the
    bound lies inside the 95% Wilson interval.
    """
    caps = caps or default_caps()
    n = graph.n
    if not 1 <= m <= n:
        raise ValueError(f"block size {m} outside [1, {n}]")
    if n > 62:
        raise CapExceeded("vertices for bitmask shattering", n, 62)
    alpha = Fraction(m, n)
    delta = graph.max_degree
    nbr = np.ascontiguousarray(graph.neighbor_masks(), dtype=np.int64)
    total = math.comb(n, m)
    rows = []
    if total <= caps.max_subsets:
        counts, seen = _kernels.shatter_counts(nbr, n, m)
        assert seen == total
        for v in range(n):
            for k in range(1, m + 1):
                p = Fraction(int(counts[v, k]), total)
                b = shattering_bound(alpha, delta, k)
                rows.append(ShatterRow(v, k, p, b, p <= b))
        return ShatterReport(n, m, alpha, delta, True, total, rows)
    rng = np.random.default_rng(seed)
    keys = rng.random((samples, n))
    chosen = np.argsort(keys, axis=1)[:, :m]
    masks = np.bitwise_or.reduce(np.left_shift(np.int64(1), chosen.astype(np.int64)), axis=1)
    counts = _kernels.shatter_counts_masks(nbr, n, m, np.ascontiguousarray(masks, dtype=np.int64))
    z = 1.959963984540054
    for v in range(n):
        for k in range(1, m + 1):
            c = int(counts[v, k])
            p = c / samples
            den = 1 + z * z / samples
            centre = (p + z * z / (2 * samples)) / den
            half = z * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / den
            b = shattering_bound(alpha, delta, k)
            rows.append(ShatterRow(v, k, p, b, centre - half <= float(b), centre + half))
    return ShatterReport(n, m, alpha, delta, False, samples, rows)


# entropy

def entropy(dist, f) -> float:
    """``E[f log f] - E[f] log E[f]`` with ``0 log 0 = 0``."""
    pi = np.asarray(dist, dtype=float)
    f = np.asarray(f, dtype=float)
    if f.shape != pi.shape:
        raise ValueError("function and distribution differ in length")
    if np.any(f < 0):
        raise ValueError("entropy needs a nonnegative function")
    mean = float(pi @ f)
    if mean <= 0:
        raise ValueError("entropy needs a function that is not identically zero")
    flogf = np.where(f > 0, f * np.log(np.where(f > 0, f, 1.0)), 0.0)
    return max(float(pi @ flogf) - mean * math.log(mean), 0.0)


@dataclass
class TensorizationResult:
    ratio: float
    ent: float
    local_sum: float
    undefined: bool


UNDEFINED_TOL = 1e-13


def site_entropies(system: SpinSystem, f) -> np.ndarray:
    """``mu(Ent_v f)`` for every vertex: conditional entropy given the other spins, averaged."""
    f = np.asarray(f, dtype=float)
    w = np.asarray(system.probs)
    out = np.zeros(system.n)
    for v in range(system.n):
        rest = [u for u in range(system.n) if u != v]
        groups: dict[bytes, list[int]] = {}
        for i, row in enumerate(system.configs[:, rest]):
            groups.setdefault(row.tobytes(), []).append(i)
        acc = 0.0
        for idx in groups.values():
            if len(idx) < 2:
                continue
            mass = w[idx].sum()
            acc += mass * entropy(w[idx] / mass, f[idx])
        out[v] = acc
    return out


def entropy_tensorization_ratio(system: SpinSystem, f) -> TensorizationResult:
    ent = entropy(system.probs, f)
    local = float(site_entropies(system, f).sum())
    if local <= UNDEFINED_TOL:
        return TensorizationResult(1.0, ent, local, True)
    return TensorizationResult(ent / local, ent, local, False)


def entropy_probes(system: SpinSystem, seed: int = 0, count: int = 32) -> dict[str, list[np.ndarray]]:
    """Constants, single-site indicators plus 0.1, exponentials of random linear maps."""
    rng = np.random.default_rng(seed)
    X = system.configs.astype(float)
    consts = [np.full(system.size, c) for c in np.linspace(0.5, 4.0, count)]
    sites = [(v, s) for v in range(system.n) for s in (0, 1)]
    indicators = [(X[:, v] == s).astype(float) + 0.1 for v, s in sites[:count]]
    expo = []
    for _ in range(count):
        coef = rng.standard_normal(system.n)
        expo.append(np.exp(X @ coef + rng.standard_normal()))
    return {"constant": consts, "site_indicator": indicators, "exp_linear": expo}


@dataclass
class TensorizationEstimate:
    constant: float
    per_family: dict[str, float]
    undefined: int
    bound_t_mix: float
    mu_star: float


def tensorization_estimate(system: SpinSystem, seed: int = 0) -> TensorizationEstimate:
    """Largest observed ratio over the probe set; a lower bound on the true constant.

    ``bound_t_mix = C n log(log(1/mu_star))`` with ``C`` the observed maximum.
    """
    per, undef = {}, 0
    for name, fs in entropy_probes(system, seed).items():
        best = 0.0
        for f in fs:
            r = entropy_tensorization_ratio(system, f)
            if r.undefined:
                undef += 1
            else:
                best = max(best, r.ratio)
        per[name] = best
    c = max(per.values()) if any(per.values()) else 1.0
    mu_star = float(np.min(system.probs))
    inner = math.log(1.0 / mu_star) if mu_star < 1 else 0.0
    bound = c * system.n * math.log(inner) if inner > 0 else -math.inf
    return TensorizationEstimate(c, per, undef, bound, mu_star)

