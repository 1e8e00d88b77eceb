"""Certification harness: every identity and inequality as a named numerical check.

A suite emits one :class:`CheckResult` per (check, instance) where an
instance is a pinning, a level, a level pair or a probe batch. Probe-based
checks report the worst probe. Results are sorted by name then instance so
reports are reproducible bit for bit for a given seed.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from . import dynamics as dyn
from . import levels as lv
from .errors import Caps, default_caps
from .generators import FAMILIES, erdos_renyi
from .gibbs import Graph, SpinSystem, build_hardcore, enumerate_pinnings
from .influence import covariance_matrix, influence_matrix, influence_spectrum, pinned_stats, \
    scaled_covariance, spectral_independence
from .matroid import Matroid, axioms_check, bases_exchange_kernel, dual, reliability_direct, \
    reliability_dual, trickle_down_certify
from .numerics import gap, multiset_match, reversible_spectrum

SCHEMA_VERSION = 1
TOL_IDENTITY = 1e-10
TOL_EXACT = 1e-12
TOL_INEQ = 1e-9
TOL_PROBE_INEQ = 1e-10
TOL_SPECTRUM = 1e-8
TOL_PSD = 1e-10
TOL_EIGVEC = 1e-8
ZERO_EIG = 1e-7
PROBES = 32

SPIN_CHECKS = {
    "influence_psd": "every influence matrix has nonnegative spectrum",
    "influence_factorization": "influence matrix equals inverse-variance-scaled covariance",
    "influence_diagonal": "influence matrix has unit diagonal",
    "local_walk_spectrum_identity": "local walk spectrum from the influence spectrum plus fixed eigenvalues",
    "local_gap_from_eta": "worst local gap at level k is at least 1 - eta/(n-k-1)",
    "glauber_equals_top_down_up": "Glauber kernel equals the top-level down-up walk",
    "block_equals_multi_down_up": "uniform block dynamics equals the multi-level down-up walk",
    "up_down_one_equals_lazy_local": "level-1 up-down walk equals the lazy root local walk",
    "poincare": "gap times variance bounded by the Dirichlet form, tight at the second eigenvector",
    "dgu_positivity": "Glauber and block kernels are positive semidefinite",
    "lazy_variance_contraction": "lazy chain contracts variance by 1 - gap/2",
    "mixing_time_bound": "exact t_mix(1/4) at most (n/gap) log(1/mu_min)",
    "relaxation_time_bound": "relaxation time at most n/gap",
    "boosting": "t_mix(eps) at most t_mix(1/4) ceil(log2(1/eps))",
    "variance_forms_agree": "centred and pairwise variance formulas agree",
}

LEVEL_CHECKS = {
    "up_down_entry_formula": "up-down product matches its closed-form entries",
    "up_down_reversibility": "up and down operators satisfy detailed balance across levels",
    "up_down_local_embedding": "off-diagonal up-down entries are scaled local-walk entries",
    "random_walk_bound": "down-up gap at least (1/k) times the product of local gaps",
    "improved_rw_general": "multi-level down-up gap at least the Gamma-weighted tail ratio",
    "improved_rw_one_level": "down-up gap at least Gamma_{k-1} over the Gamma prefix sum",
    "updown_downup_nonzero_spectrum": "up-down and down-up walks share nonzero spectra",
    "technical_rw_inequality": "up-down Dirichlet form dominates the scaled down-up form",
    "improved_technical_inequality": "down-up form at level k+1 dominates (2 gamma_{k-1} - 1) times level k",
    "updown_dirichlet_local_identity": "up-down Dirichlet form decomposes over local walks",
    "downup_dirichlet_var_identity": "down-up Dirichlet form equals averaged link variance",
    "level_mass_factorization": "pi_k(eta+a) = k pi_{k-1}(eta) pi_{eta,1}(a)",
    "diff_var_identity": "multi-level down-up form equals a variance difference",
    "two_level_var_identity": "two-level variance drop equals averaged pair-link variance",
}

MATROID_CHECKS = {
    "matroid_axioms": "empty set, downward closure, augmentation and equal basis sizes",
    "duality_involution": "double dual has the same bases",
    "bases_exchange_gap": "bases-exchange gap at least 1/rank",
    "bases_exchange_equals_top_down_up": "bases-exchange kernel equals the top-level down-up walk",
    "bases_exchange_stationary_uniform": "uniform distribution is stationary and the kernel symmetric",
    "rank2_links": "every link at level r-2 has second eigenvalue at most 0",
    "trickle_down_recursion": "link gap at least 2 - 1/(worst child gap)",
    "trickle_down_level_recursion": "worst gap at level i at least 2 - 1/(worst gap at level i+1)",
    "trickle_down_final": "every link has gap at least 1",
    "second_eigenvector_relation": "second eigenvector satisfies the child-expectation relation",
    "link_dirichlet_decomposition": "local-walk Dirichlet form splits over child links",
    "link_expectation_decomposition": "link expectation splits over child links",
    "reliability_dual_vs_direct": "dual-matroid formula equals direct enumeration",
}

ALL_CHECKS = {**SPIN_CHECKS, **LEVEL_CHECKS, **MATROID_CHECKS}


@dataclass
class CheckResult:
    name: str
    instance: str
    lhs: Any
    rhs: Any
    margin: float
    passed: bool
    kind: str
    tol: float
    notes: str = ""
    skipped: bool = False
    reason: str = ""

    @property
    def status(self) -> str:
        return "skip" if self.skipped else ("pass" if self.passed else "fail")


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_num(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


@dataclass
class SuiteReport:
    descriptor: dict
    seed: int
    results: list[CheckResult] = field(default_factory=list)
    tolerances: dict = field(default_factory=lambda: {
        "identity": TOL_IDENTITY, "exact": TOL_EXACT, "inequality": TOL_INEQ,
        "probe_inequality": TOL_PROBE_INEQ, "spectrum": TOL_SPECTRUM, "psd": TOL_PSD,
        "eigenvector": TOL_EIGVEC})
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def skips(self) -> list[CheckResult]:
        return [r for r in self.results if r.skipped]

    def names(self) -> set[str]:
        return {r.name for r in self.results}

    def by_name(self, name: str) -> list[CheckResult]:
        return [r for r in self.results if r.name == name]

    def summary(self) -> dict[str, dict]:
        """Per check name: counts and the worst margin (most negative slack or largest deviation)."""
        out: dict[str, dict] = {}
        badness: dict[str, float] = {}
        for r in self.results:
            s = out.setdefault(r.name, {"count": 0, "fail": 0, "skip": 0, "worst_margin": None, "worst_instance": None})
            s["count"] += 1
            s["fail"] += r.status == "fail"
            s["skip"] += r.skipped
            if r.skipped:
                continue
            bad = -r.margin if r.kind == "inequality" else r.margin
            if r.name not in badness or bad > badness[r.name]:
                badness[r.name] = bad
                s["worst_margin"], s["worst_instance"] = r.margin, r.instance
        return out

    def sort(self) -> None:
        self.results.sort(key=lambda r: (r.name, r.instance))

    def to_json(self, full: bool = True) -> dict:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "descriptor": self.descriptor,
            "seed": self.seed,
            "passed": self.passed,
            "tolerances": self.tolerances,
            "info": self.info,
            "summary": self.summary(),
        }
        if full:
            doc["results"] = [
                {**{k: _num(v) for k, v in asdict(r).items()}, "status": r.status} for r in self.results
            ]
        return doc


class _Recorder:
    def __init__(self, report: SuiteReport, slack: float = TOL_INEQ):
        self.report = report
        self.slack = slack
        report.tolerances["inequality"] = slack

    def _add(self, **kw) -> CheckResult:
        r = CheckResult(**kw)
        self.report.results.append(r)
        return r

    def identity(self, name, instance, lhs, rhs, tol=TOL_IDENTITY, deviation=None, notes=""):
        if deviation is None:
            a = np.asarray(_num(lhs), dtype=float)
            b = np.asarray(_num(rhs), dtype=float)
            deviation = float(np.max(np.abs(a - b))) if a.size else 0.0
        return self._add(name=name, instance=instance, lhs=_num(lhs), rhs=_num(rhs), margin=float(deviation),
                         passed=bool(deviation <= tol), kind="identity", tol=tol, notes=notes)

    def inequality(self, name, instance, lhs, rhs, tol=None, notes=""):
        tol = self.slack if tol is None else tol
        margin = float(lhs) - float(rhs)
        return self._add(name=name, instance=instance, lhs=_num(lhs), rhs=_num(rhs), margin=margin,
                         passed=bool(margin >= -tol), kind="inequality", tol=tol, notes=notes)

    def multiset(self, name, instance, lhs, rhs, tol=TOL_SPECTRUM, notes=""):
        dev = multiset_match(lhs, rhs)
        return self._add(name=name, instance=instance, lhs=sorted(_num(list(lhs)), reverse=True),
                         rhs=sorted(_num(list(rhs)), reverse=True), margin=dev, passed=bool(dev <= tol),
                         kind="multiset", tol=tol, notes=notes)

    def skip(self, name, instance, reason):
        return self._add(name=name, instance=instance, lhs=None, rhs=None, margin=0.0, passed=True,
                         kind="skip", tol=0.0, skipped=True, reason=reason)


def _fmt(key) -> str:
    if isinstance(key, tuple) and all(isinstance(x, tuple) and len(x) == 2 for x in key):
        return "{" + ",".join(f"{v}:{s}" for v, s in key) + "}"
    return str(key)


# level-complex checks, shared by spin systems and matroids

def gamma_products(gammas: list[float]) -> tuple[list[float], int | None]:
    """``Gamma_0 = 1``, ``Gamma_i = prod_{j<i} (2 gamma_j - 1)``; index of first nonpositive factor."""
    out, first_bad = [1.0], None
    for j, g in enumerate(gammas):
        f = 2 * g - 1
        if f <= 0 and first_bad is None:
            first_bad = j
        out.append(out[-1] * f)
    return out, first_bad


def _arg(cx: lv.Complex, face):
    return face if cx.kind == "matroid" else cx.key(face)


def _level_checks(rec: _Recorder, cx: lv.Complex, rng: np.random.Generator, probes: int) -> list[float]:
    r = cx.rank
    gaps = lv.local_gaps(cx)
    gammas = [g.gamma for g in gaps]
    reducible = [g.k for g in gaps if g.reducible]

    for k in range(r):
        ud = lv.up_down(cx, k)
        rec.identity("up_down_entry_formula", f"k={k}", 0, 0, TOL_EXACT,
                     deviation=float(np.max(np.abs(ud.matrix - lv.up_down_direct(cx, k).matrix))))
        up, down = lv.up_operator(cx, k), lv.down_operator(cx, k + 1)
        pik, pik1 = lv.level_space(cx, k).pi, lv.level_space(cx, k + 1).pi
        flow = pik[:, None] * up.matrix - (pik1[:, None] * down.matrix).T
        rec.identity("up_down_reversibility", f"k={k}", 0, 0, TOL_EXACT, deviation=float(np.max(np.abs(flow))))
        if k <= r - 2:
            dev = 0.0
            idx = cx.index[k + 1]
            # off-diagonal up-down entries between F+x and F+y are Q_F(x, y) / (k+2)
            ud1 = lv.up_down(cx, k + 1)
            for f in cx.faces[k]:
                Q = lv.local_walk(cx, _arg(cx, f))
                ext = cx.children(k)[f]
                rows = [idx[g] for _, g in ext]
                sub = ud1.matrix[np.ix_(rows, rows)]
                off = ~np.eye(len(rows), dtype=bool)
                dev = max(dev, float(np.max(np.abs(sub[off] - Q.matrix[off] / (k + 2)))) if off.any() else 0.0)
            rec.identity("up_down_local_embedding", f"k={k + 1}", 0, 0, TOL_EXACT, deviation=dev)

    # spectra of the level walks
    du_gap: dict[int, float] = {}
    for k in range(1, r + 1):
        du = lv.down_up(cx, k)
        sd = reversible_spectrum(du)
        du_gap[k] = gap(sd).gamma
        su = reversible_spectrum(lv.up_down(cx, k - 1)).eigenvalues
        a = [x for x in sd.eigenvalues if abs(x) > ZERO_EIG]
        b = [x for x in su if abs(x) > ZERO_EIG]
        rec.multiset("updown_downup_nonzero_spectrum", f"k={k}", a, b)

    for k in range(2, r + 1):
        if any(j <= k - 2 for j in reducible):
            rec.skip("random_walk_bound", f"k={k}", "reducible local walk below this level")
            continue
        bound = math.prod(gammas[: k - 1]) / k
        rec.inequality("random_walk_bound", f"k={k}", du_gap[k], bound)

    Gam, first_bad = gamma_products(gammas)
    for k in range(2, r + 1):
        inst = f"k={k}"
        if reducible and min(reducible) <= k - 2:
            rec.skip("improved_rw_one_level", inst, "reducible local walk")
        elif first_bad is not None and first_bad <= k - 2:
            rec.skip("improved_rw_one_level", inst, f"vacuous: 2*gamma_{first_bad}-1 <= 0")
        else:
            rec.inequality("improved_rw_one_level", inst, du_gap[k], Gam[k - 1] / sum(Gam[:k]))
    for ell in range(0, r):
        inst = f"l={ell}"
        if reducible:
            rec.skip("improved_rw_general", inst, "reducible local walk")
        elif first_bad is not None:
            rec.skip("improved_rw_general", inst, f"vacuous: 2*gamma_{first_bad}-1 <= 0")
        else:
            g = gap(reversible_spectrum(lv.down_up_multi(cx, r, ell))).gamma
            rec.inequality("improved_rw_general", inst, g, sum(Gam[ell:r]) / sum(Gam[:r]))

    # probe identities
    spaces = [lv.level_space(cx, k) for k in range(r + 1)]
    worst: dict[tuple[str, str], list] = {}

    def note(name, inst, dev=None, lhs=None, rhs=None):
        key = (name, inst)
        if dev is not None:
            cur = worst.get(key)
            if cur is None or dev > cur[0]:
                worst[key] = [dev, lhs, rhs]
        else:
            m = lhs - rhs
            cur = worst.get(key)
            if cur is None or m < cur[0]:
                worst[key] = [m, lhs, rhs]

    link_cache: dict[tuple[int, int], list] = {}

    def link_data(k: int, j: int) -> list:
        # (pi_k(face), positions of its size-j extensions one level up, conditional law, local walk)
        if (k, j) not in link_cache:
            rows = []
            pos = cx.index[k + j]
            for i, face in enumerate(cx.faces[k]):
                key = _arg(cx, face)
                idx = np.array([pos[g] for _, g in cx.extensions(face, j)], dtype=np.intp)
                Q = lv.local_walk(cx, key) if j == 1 and k <= r - 2 else None
                rows.append((spaces[k].pi[i], idx, lv.conditional_level(cx, key, j).pi, Q))
            link_cache[(k, j)] = rows
        return link_cache[(k, j)]

    for _ in range(probes):
        fs = {k: rng.standard_normal(len(spaces[k])) for k in range(r + 1)}
        for k in range(1, r + 1):
            f = fs[k]
            e_du = lv.dirichlet(lv.down_up(cx, k), f)
            # downup Dirichlet form against averaged link variance
            rhs = sum(w * lv.variance(pis, f[idx]) for w, idx, pis, _ in link_data(k - 1, 1))
            note("downup_dirichlet_var_identity", f"k={k}", abs(e_du - rhs), e_du, rhs)
            if k <= r - 1:
                e_ud = lv.dirichlet(lv.up_down(cx, k), f)
                rhs = k / (k + 1) * sum(w * lv.dirichlet(Q, f[idx]) for w, idx, _, Q in link_data(k - 1, 1))
                note("updown_dirichlet_local_identity", f"k={k}", abs(e_ud - rhs), e_ud, rhs)
                if k - 1 not in reducible:
                    note("technical_rw_inequality", f"k={k}", None, e_ud, k / (k + 1) * gammas[k - 1] * e_du)
        # variance-difference identities over projections
        for i in range(1, r + 1):
            proj = lv.projections(cx, fs[i], i)
            for j in range(i):
                lhs = lv.dirichlet(lv.down_up_multi(cx, i, j), proj[i])
                rhs = lv.variance(spaces[i], proj[i]) - lv.variance(spaces[j], proj[j])
                note("diff_var_identity", f"i={i},j={j}", abs(lhs - rhs), lhs, rhs)
        proj = lv.projections(cx, fs[r], r)
        for k in range(1, r):
            lhs = lv.variance(spaces[k + 1], proj[k + 1]) - lv.variance(spaces[k - 1], proj[k - 1])
            g = proj[k + 1]
            rhs = sum(w * lv.variance(pis, g[idx]) for w, idx, pis, _ in link_data(k - 1, 2))
            note("two_level_var_identity", f"k={k}", abs(lhs - rhs), lhs, rhs)
            if k - 1 not in reducible:
                a = lv.dirichlet(lv.down_up(cx, k + 1), proj[k + 1])
                b = (2 * gammas[k - 1] - 1) * lv.dirichlet(lv.down_up(cx, k), proj[k])
                note("improved_technical_inequality", f"k={k}", None, a, b)

    for (name, inst), (m, lhs, rhs) in sorted(worst.items()):
        if name in ("technical_rw_inequality", "improved_technical_inequality"):
            rec.inequality(name, inst, lhs, rhs, TOL_PROBE_INEQ, notes=f"worst of {probes} probes")
        else:
            rec.identity(name, inst, lhs, rhs, TOL_IDENTITY, deviation=m, notes=f"worst of {probes} probes")
    for k in range(1, r):
        if k - 1 in reducible:
            rec.skip("technical_rw_inequality", f"k={k}", "reducible local walk")
            rec.skip("improved_technical_inequality", f"k={k}", "reducible local walk")

    # mass factorisation, exact when the complex is
    for k in range(1, r + 1):
        dev = Fraction(0) if cx.exact else 0.0
        ck, ck1 = math.comb(r, k), math.comb(r, k - 1)
        for eta in cx.faces[k - 1]:
            m_eta = cx.masses[k - 1][eta]
            for x, g in cx.children(k - 1)[eta]:
                m_g = cx.masses[k][g]
                lhs = cx.exact_ratio(m_g, cx.total * ck)
                pe = cx.exact_ratio(m_eta, cx.total * ck1)
                pa = cx.exact_ratio(m_g, (r - k + 1) * m_eta)
                dev = max(dev, abs(lhs - k * pe * pa))
        rec.identity("level_mass_factorization", f"k={k}", 0, 0, 0.0 if cx.exact else TOL_EXACT,
                     deviation=float(dev), notes="exact rational" if cx.exact else "")
    return gammas


# spin suite

def _spin_descriptor(system: SpinSystem, label: str | None) -> dict:
    d: dict = {"kind": "spin", "n": system.n, "support": system.size}
    if system.graph is not None:
        d["graph"] = system.graph.to_json()
    if system.partition_value is not None:
        d["partition_value"] = str(system.partition_value)
    if label:
        d["label"] = label
    return d


def run_spin_suite(system: SpinSystem, seed: int = 0, probes: int = PROBES, label: str | None = None,
                   caps: Caps | None = None, meta: dict | None = None, slack: float = TOL_INEQ) -> SuiteReport:
    caps = caps or default_caps()
    rep = SuiteReport({**_spin_descriptor(system, label), **(meta or {})}, seed)
    rec = _Recorder(rep, slack)
    rng = np.random.default_rng(seed)
    n = system.n
    cx = lv.as_complex(system, caps)

    # influence matrices over every pinning
    si = spectral_independence(system, caps)
    rep.info["eta"] = si.eta
    rep.info["b"] = float(si.b)
    for k in range(n + 1):
        for tau in enumerate_pinnings(system, k, caps):
            inst = _fmt(tau)
            st = pinned_stats(system, tau)
            if not st.free:
                continue
            psi = influence_matrix(system, tau, st)
            cov = covariance_matrix(system, tau, st)
            scaled = scaled_covariance(cov)
            if psi.exact is not None:
                dev = max(abs(x - y) for r1, r2 in zip(psi.exact, scaled.exact) for x, y in zip(r1, r2))
                rec.identity("influence_factorization", inst, 0, 0, TOL_EXACT, deviation=float(dev),
                             notes="exact rational")
                diag_ok = all(psi.exact[i][i] == 1 for i in range(psi.size))
            else:
                rec.identity("influence_factorization", inst, psi.entries, scaled.entries, TOL_EXACT)
                diag_ok = bool(np.all(np.diag(psi.entries) == 1.0))
            rec.identity("influence_diagonal", inst, 0, 0, 0.0, deviation=0.0 if diag_ok else 1.0)
            spec = influence_spectrum(psi, system, tau, cov)
            rec.inequality("influence_psd", inst, float(spec.eigenvalues[-1]), 0.0, TOL_PSD)
            if k <= n - 2:
                Q = lv.local_walk(system, tau)
                qs = reversible_spectrum(Q).eigenvalues
                d = n - k - 1
                expected = list((spec.eigenvalues - 1.0) / d) + [1.0] + [-1.0 / d] * d
                rec.multiset("local_walk_spectrum_identity", inst, qs, expected)
        if k <= n - 2:
            # pinnings with no free vertex still have a local walk
            for tau in enumerate_pinnings(system, k, caps):
                if not free_vertices_of(system, tau):
                    qs = reversible_spectrum(lv.local_walk(system, tau)).eigenvalues
                    d = n - k - 1
                    rec.multiset("local_walk_spectrum_identity", _fmt(tau), qs, [1.0] + [-1.0 / d] * d,
                                 notes="no free vertices")

    gammas = _level_checks(rec, cx, rng, probes)
    rep.info["local_gaps"] = gammas
    for k, g in enumerate(gammas):
        bound = 1 - si.eta / (n - k - 1)
        rec.inequality("local_gap_from_eta", f"k={k}", g, bound)

    # dynamics
    G = dyn.glauber_kernel(system)
    top = lv.down_up(cx, n)
    rec.identity("glauber_equals_top_down_up", "top", 0, 0, TOL_EXACT,
                 deviation=float(np.max(np.abs(G.matrix - top.matrix))))
    if n >= 2:
        ud1 = lv.up_down(cx, 1)
        Q0 = lv.local_walk(system, ())
        rec.identity("up_down_one_equals_lazy_local", "k=1", 0, 0, TOL_EXACT,
                     deviation=float(np.max(np.abs(ud1.matrix - (Q0.matrix + np.eye(Q0.dim)) / 2))))
    gspec = reversible_spectrum(G)
    gg = gap(gspec)
    rep.info["glauber_gap"] = gg.gamma
    rec.inequality("dgu_positivity", "glauber", float(gspec.eigenvalues[-1]), 0.0)
    for m in range(1, n + 1):
        B = dyn.block_kernel(system, m, caps)
        M = lv.down_up_multi(cx, n, n - m)
        rec.identity("block_equals_multi_down_up", f"m={m}", 0, 0, TOL_EXACT,
                     deviation=float(np.max(np.abs(B.matrix - M.matrix))))
        rec.inequality("dgu_positivity", f"block m={m}", float(reversible_spectrum(B).eigenvalues[-1]), 0.0)

    mu = system.probs
    worst_p, worst_l, worst_v = math.inf, math.inf, 0.0
    L = dyn.lazy(G)
    for _ in range(probes):
        f = rng.standard_normal(system.size)
        var = lv.variance(mu, f)
        worst_p = min(worst_p, lv.dirichlet(G, f) - gg.gamma * var)
        worst_l = min(worst_l, (1 - gg.gamma / 2) * var - lv.variance(mu, L.matrix @ f))
        worst_v = max(worst_v, abs(var - lv.variance_pairwise(mu, f)))
    rec.inequality("poincare", "probes", worst_p, 0.0, TOL_PROBE_INEQ, notes=f"min E(f)-gap*Var(f) over {probes}")
    if gg.reducible or system.size < 2:
        rec.skip("poincare", "second_eigenvector", "no second eigenvalue or reducible")
    else:
        f2 = gspec.eigenvectors[:, 1]
        f2 = f2 / math.sqrt(lv.variance(mu, f2))
        rec.identity("poincare", "second_eigenvector", lv.dirichlet(G, f2), gg.gamma * lv.variance(mu, f2), 1e-6)
    rec.inequality("lazy_variance_contraction", "probes", worst_l, 0.0, TOL_PROBE_INEQ)
    rec.identity("variance_forms_agree", "probes", 0, 0, 1e-12, deviation=worst_v)

    if system.size < 2:
        for name in ("mixing_time_bound", "relaxation_time_bound", "boosting"):
            rec.skip(name, "glauber", "single-state chain")
    else:
        mr = dyn.mixing_report(G, [1 / 8, 1 / 16], n=n)
        rep.info["mixing"] = mr.to_json()
        rec.inequality("mixing_time_bound", "eps=1/4", mr.bound_t_mix, mr.t_mix_exact[0.25], 0.0)
        rec.inequality("relaxation_time_bound", "glauber", mr.bound_t_relax, mr.t_relax)
        for eps in (1 / 8, 1 / 16):
            rec.inequality("boosting", f"eps={eps}", mr.t_mix_exact[0.25] * math.ceil(math.log2(1 / eps)),
                           mr.t_mix_exact[eps], 0.0)
    rep.sort()
    return rep


def free_vertices_of(system: SpinSystem, tau) -> tuple[int, ...]:
    from .gibbs import free_frozen_split
    return free_frozen_split(system, tau)[0]


# matroid suite

def run_matroid_suite(m: Matroid, seed: int = 0, probes: int = PROBES, label: str | None = None,
                      reliability_ps: Iterable = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)),
                      slack: float = TOL_INEQ) -> SuiteReport:
    rep = SuiteReport({"kind": "matroid", **m.describe(), **({"label": label} if label else {})}, seed)
    rec = _Recorder(rep, slack)
    ax = axioms_check(m)
    rec.identity("matroid_axioms", "exhaustive", 0, len(ax.failures), 0.0, deviation=float(len(ax.failures)),
                 notes="; ".join(f"{a}: {w}" for a, w in ax.failures))
    if not ax.passed:
        rep.info["axiom_failures"] = ax.to_json()["failures"]
        rep.sort()
        return rep
    rng = np.random.default_rng(seed)
    r = m.rank
    bases = m.bases()
    rep.info["rank"] = r
    rep.info["bases"] = len(bases)
    dd = dual(dual(m)).bases()
    rec.identity("duality_involution", "bases", 0, 0, 0.0, deviation=0.0 if dd == bases else 1.0)

    P = bases_exchange_kernel(m)
    cx = m.level_complex()
    if r >= 1:
        top = lv.down_up(cx, r)
        rec.identity("bases_exchange_equals_top_down_up", "top", 0, 0, TOL_EXACT,
                     deviation=float(np.max(np.abs(P.matrix - top.matrix))))
    u = np.full(len(bases), 1.0 / len(bases))
    rec.identity("bases_exchange_stationary_uniform", "uniform", 0, 0, TOL_EXACT,
                 deviation=max(float(np.max(np.abs(u @ P.matrix - u))), float(np.max(np.abs(P.matrix - P.matrix.T)))))
    if len(bases) < 2 or r == 0:
        rec.skip("bases_exchange_gap", "exchange", "single basis")
    else:
        g = gap(reversible_spectrum(P))
        rep.info["bases_exchange_gap"] = g.gamma
        rec.inequality("bases_exchange_gap", "exchange", g.gamma, 1.0 / r)

    if r >= 2:
        td = trickle_down_certify(m, seed=seed, probes=probes)
        rep.info["trickle_down"] = td.to_json()
        if td.aborted:
            for name in ("rank2_links", "trickle_down_recursion", "trickle_down_level_recursion",
                         "trickle_down_final", "second_eigenvector_relation", "link_dirichlet_decomposition",
                         "link_expectation_decomposition"):
                rec.skip(name, "all", f"reducible link at {td.witness}")
        else:
            for lg in td.links:
                inst = _fmt(m.original(lg.S))
                if len(lg.S) == r - 2:
                    rec.inequality("rank2_links", inst, 0.0, lg.lambda2)
                rec.inequality("trickle_down_final", inst, lg.gamma, 1.0)
            for S, mg in td.recursion_margins:
                rec.inequality("trickle_down_recursion", _fmt(S), mg, 0.0)
            for i, mg in enumerate(td.level_recursion_margins):
                rec.inequality("trickle_down_level_recursion", f"i={i}", mg, 0.0)
            rec.identity("second_eigenvector_relation", "all links", 0, 0, TOL_EIGVEC, deviation=td.eigvec_deviation)
            rec.identity("link_expectation_decomposition", "probes", 0, 0, TOL_IDENTITY,
                         deviation=td.expectation_deviation)
            if r >= 3:
                rec.identity("link_dirichlet_decomposition", "probes", 0, 0, TOL_IDENTITY,
                             deviation=td.dirichlet_deviation)
            else:
                rec.skip("link_dirichlet_decomposition", "probes", "rank below 3: no link with children walks")
            if r == 2:
                rec.skip("trickle_down_recursion", "all", "rank 2: no level below r-2")
                rec.skip("trickle_down_level_recursion", "all", "rank 2: no level below r-2")
    else:
        for name in ("rank2_links", "trickle_down_recursion", "trickle_down_level_recursion", "trickle_down_final",
                     "second_eigenvector_relation", "link_dirichlet_decomposition", "link_expectation_decomposition"):
            rec.skip(name, "all", "rank below 2: no local walks")

    _level_checks(rec, cx, rng, probes)

    for p in reliability_ps:
        p = Fraction(p) if not isinstance(p, float) else p
        a, b = reliability_dual(m, p), reliability_direct(m, p)
        rec.identity("reliability_dual_vs_direct", f"p={p}", a, b, TOL_EXACT,
                     deviation=float(abs(a - b)), notes="exact rational" if isinstance(a, Fraction) else "")
    rep.sort()
    return rep


# sweeps

def _as_list(x) -> list:
    return list(x) if isinstance(x, (list, tuple, range)) else [x]


def sweep_instances(config: dict) -> list[dict]:
    """Expand a sweep config into concrete, serialisable instance specs."""
    seed = int(config.get("seed", 0))
    out: list[dict] = []
    for entry in config.get("spin", []):
        fam = entry["family"]
        lams = [str(Fraction(str(x))) for x in _as_list(entry.get("lambda", [1]))]
        ns = _as_list(entry.get("n", []))
        if fam == "er":
            p = float(entry.get("p", 0.5))
            for n in ns:
                for s in _as_list(entry.get("seeds", range(int(entry.get("count", 1))))):
                    g = erdos_renyi(int(n), p, int(s))
                    for lam in lams:
                        out.append({"kind": "spin", "label": f"er(n={n},p={p},seed={s}) lambda={lam}", "graph": g.to_json(),
                                    "lambda": lam, "seed": seed})
        else:
            for n in ns:
                g = FAMILIES[fam](int(n))
                for lam in lams:
                    out.append({"kind": "spin", "label": f"{fam}{n} lambda={lam}", "graph": g.to_json(), "lambda": lam,
                                "seed": seed})
    for entry in config.get("matroid", []):
        if isinstance(entry, str):
            from .generators import matroid_preset
            out.append({"kind": "matroid", "label": entry, "spec": matroid_preset(entry), "seed": seed})
        else:
            out.append({"kind": "matroid", "label": entry.get("label") or json.dumps(entry, sort_keys=True),
                        "spec": entry, "seed": seed})
    return out


def run_instance(spec: dict) -> SuiteReport:
    if spec["kind"] == "spin":
        g = Graph(spec["graph"]["n"], [tuple(e) for e in spec["graph"]["edges"]])
        sys_ = build_hardcore(g, Fraction(spec["lambda"]))
        return run_spin_suite(sys_, spec["seed"], label=spec["label"], meta={"lambda": spec["lambda"]})
    from .io import matroid_from_spec
    return run_matroid_suite(matroid_from_spec(spec["spec"]), spec["seed"], label=spec["label"])


@dataclass
class SweepResult:
    reports: list[SuiteReport]
    instances: list[dict]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def summary(self) -> dict:
        return {
            "instances": len(self.reports),
            "passed": sum(r.passed for r in self.reports),
            "failed": [spec for spec, r in zip(self.instances, self.reports) if not r.passed],
            "checks": sum(len(r.results) for r in self.reports),
            "skipped": sum(len(r.skips) for r in self.reports),
        }


def sweep(config: dict, threads: int = 1) -> SweepResult:
    specs = sweep_instances(config)
    if threads > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(run_instance, specs))
    else:
        reports = [run_instance(s) for s in specs]
    return SweepResult(reports, specs)
