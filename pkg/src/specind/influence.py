"""Influence and covariance matrices under pinnings, and the constant eta."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import Caps, DegenerateError, default_caps
from .gibbs import Pinning, SpinSystem, enumerate_pinnings, free_frozen_split, marginal_bound
from .numerics import Spectrum, sym_eigen


@dataclass
class PinnedStats:
    """Raw masses of ``mu_tau`` on its free vertices.

    ``W`` is the mass of all extensions, ``a[i]`` the mass with ``sigma(i)=1``
    and ``A[i, j]`` the mass with ``sigma(i)=sigma(j)=1``.
    """

    pinning: Pinning
    free: tuple[int, ...]
    frozen: dict[int, int]
    W: object
    a: list
    A: list
    exact: bool


def pinned_stats(system: SpinSystem, pinning=()) -> PinnedStats:
    pinning = Pinning(pinning)
    free, frozen = free_frozen_split(system, pinning)
    m = system.mask(pinning)
    sub = system.configs[m][:, list(free)]
    w = system.weights[m]
    if system.exact:
        ws = [int(x) for x in w]
        W = sum(ws)
        cols = [[int(b) for b in sub[:, i]] for i in range(len(free))]
        a = [sum(x for x, b in zip(ws, c) if b) for c in cols]
        A = [[sum(x for x, b1, b2 in zip(ws, ci, cj) if b1 and b2) for cj in cols] for ci in cols]
    else:
        s = sub.astype(np.float64)
        wf = np.asarray(w, dtype=np.float64)
        W = float(wf.sum())
        a = list(s.T @ wf)
        A = (s.T * wf) @ s
        A = [list(row) for row in A]
    return PinnedStats(pinning, free, frozen, W, a, A, system.exact)


@dataclass
class PinnedMatrix:
    free_vertices: tuple[int, ...]
    entries: np.ndarray
    pinning: Pinning
    exact: list[list[Fraction]] | None = field(default=None, repr=False)
    frozen: dict[int, int] = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return len(self.free_vertices) == 0

    @property
    def size(self) -> int:
        return len(self.free_vertices)


class InfluenceMatrix(PinnedMatrix):
    """``Psi_tau(i -> j) = P[sigma_j=1 | sigma_i=1] - P[sigma_j=1 | sigma_i=0]`` over free vertices."""


class CovarianceMatrix(PinnedMatrix):
    pass


def _to_float(exact) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in exact], dtype=np.float64).reshape(len(exact), len(exact))


def influence_matrix(system: SpinSystem, pinning=(), stats: PinnedStats | None = None) -> InfluenceMatrix:
    st = stats or pinned_stats(system, pinning)
    W, a, A = st.W, st.a, st.A
    t = len(st.free)
    if st.exact:
        ex = [[Fraction(1) if i == j else Fraction(A[i][j], a[i]) - Fraction(a[j] - A[i][j], W - a[i])
               for j in range(t)] for i in range(t)]
        ent = _to_float(ex)
    else:
        ex = None
        ent = np.empty((t, t))
        for i in range(t):
            for j in range(t):
                ent[i, j] = 1.0 if i == j else A[i][j] / a[i] - (a[j] - A[i][j]) / (W - a[i])
    return InfluenceMatrix(st.free, ent, st.pinning, ex, st.frozen)


def covariance_matrix(system: SpinSystem, pinning=(), stats: PinnedStats | None = None) -> CovarianceMatrix:
    st = stats or pinned_stats(system, pinning)
    W, a, A = st.W, st.a, st.A
    t = len(st.free)
    if st.exact:
        ex = [[Fraction(A[i][j] * W - a[i] * a[j], W * W) for j in range(t)] for i in range(t)]
        ent = _to_float(ex)
    else:
        ex = None
        ent = np.array([[A[i][j] / W - (a[i] / W) * (a[j] / W) for j in range(t)] for i in range(t)])
        ent = ent.reshape(t, t)
    return CovarianceMatrix(st.free, ent, st.pinning, ex, st.frozen)


def scaled_covariance(cov: CovarianceMatrix) -> PinnedMatrix:
    """``D^{-1} Cov`` with ``D = diag(Cov)``, exact when ``cov`` is."""
    t = cov.size
    if cov.exact is not None:
        ex = [[cov.exact[i][j] / cov.exact[i][i] for j in range(t)] for i in range(t)]
        return PinnedMatrix(cov.free_vertices, _to_float(ex), cov.pinning, ex, cov.frozen)
    d = np.diag(cov.entries)
    return PinnedMatrix(cov.free_vertices, cov.entries / d[:, None], cov.pinning, None, cov.frozen)


def influence_spectrum(psi: InfluenceMatrix | None, system: SpinSystem, pinning=(),
                       cov: CovarianceMatrix | None = None) -> Spectrum:
    """Spectrum of ``Psi_tau`` through the symmetric ``D^{-1/2} Cov D^{-1/2}``."""
    if cov is None:
        cov = covariance_matrix(system, pinning if psi is None else psi.pinning)
    d = np.diag(cov.entries)
    if np.any(d <= 0):
        raise DegenerateError("nonpositive variance on a free vertex")
    s = 1.0 / np.sqrt(d)
    return sym_eigen(s[:, None] * cov.entries * s[None, :])


@dataclass
class SIReport:
    eta: float
    b: object
    witness_pinning: Pinning | None
    per_level_max: list[float]
    per_pinning: list[tuple[Pinning, float]] = field(repr=False, default_factory=list)
    degenerate: list[Pinning] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {
            "eta": self.eta,
            "b": float(self.b),
            "b_exact": str(self.b) if isinstance(self.b, Fraction) else None,
            "witness_pinning": None if self.witness_pinning is None else {str(v): s for v, s in self.witness_pinning},
            "per_level_max": self.per_level_max,
        }


def spectral_independence(system: SpinSystem, caps: Caps | None = None) -> SIReport:
    """Max of ``lambda_max(Psi_tau) - 1`` over pinnings with at least two free vertices."""
    caps = caps or default_caps()
    best, witness = -np.inf, None
    per_level: list[float] = []
    per_pin: list[tuple[Pinning, float]] = []
    degen: list[Pinning] = []
    for k in range(system.n + 1):
        level_max = 0.0
        for tau in enumerate_pinnings(system, k, caps):
            st = pinned_stats(system, tau)
            if len(st.free) < 2:
                degen.append(tau)
                continue
            cov = covariance_matrix(system, tau, st)
            lam = float(influence_spectrum(None, system, tau, cov).eigenvalues[0])
            per_pin.append((tau, lam))
            level_max = max(level_max, lam - 1.0)
            if lam - 1.0 > best:
                best, witness = lam - 1.0, tau
        per_level.append(level_max)
    eta = max(float(best), 0.0)
    return SIReport(eta, marginal_bound(system, caps), witness, per_level, per_pin, degen)
