"""Dense symmetric eigensolver and spectra of reversible kernels."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DetailedBalanceError, NonSymmetricError

SYMMETRY_TOL = 1e-9
BALANCE_TOL = 1e-10
REDUCIBLE_TOL = 1e-8
SNAP_TOL = 1e-9
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100


@dataclass
class Spectrum:
    """Eigenvalues sorted descending, with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    max_imag_residual: float = 0.0
    eigenvectors: np.ndarray | None = field(default=None, repr=False)
    sweeps: int = 0

    def __len__(self):
        return len(self.eigenvalues)

    def to_json(self) -> list[float]:
        return [float(x) for x in self.eigenvalues]


@dataclass(frozen=True)
class Gap:
    gamma: float
    absolute_gamma: float
    lambda_star: float
    lambda_2: float
    lambda_min: float
    reducible: bool

    def __iter__(self):
        return iter((self.gamma, self.absolute_gamma, self.lambda_star))


def sym_eigen(matrix, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    n = a.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), 0.0, np.zeros((0, 0)))
    resid = float(np.max(np.abs(a - a.T)))
    if resid >= SYMMETRY_TOL:
        raise NonSymmetricError(f"symmetry residual {resid:.3e} exceeds {SYMMETRY_TOL:g}")
    sym = np.ascontiguousarray((a + a.T) / 2.0)
    w, v, sweeps, off = _kernels.jacobi_eigh(sym, tol, max_sweeps)
    thresh = tol * max(1.0, float(np.linalg.norm(sym)))
    if off > thresh:
        raise ConvergenceError(f"Jacobi stopped after {sweeps} sweeps with off-norm {off:.3e}")
    order = np.argsort(-np.asarray(w), kind="stable")
    return Spectrum(np.asarray(w)[order], resid, np.asarray(v)[:, order], sweeps)


def detailed_balance_residual(matrix, stationary) -> float:
    p = np.asarray(matrix, dtype=np.float64)
    pi = np.asarray(stationary, dtype=np.float64)
    flow = pi[:, None] * p
    return float(np.max(np.abs(flow - flow.T))) if p.size else 0.0


def reversible_spectrum(kernel) -> Spectrum:
    """Real spectrum of a reversible kernel via ``D^{1/2} P D^{-1/2}``.

    Accepts a ``WalkKernel`` or a ``(matrix, stationary)`` pair. Returned
    eigenvectors are right eigenvectors of ``P`` (``D^{-1/2} u``).
    """
    if isinstance(kernel, tuple):
        p, pi = kernel
    else:
        p, pi = kernel.matrix, kernel.stationary
    p = np.asarray(p, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    if p.shape[0] != p.shape[1] or pi.shape != (p.shape[0],):
        raise ValueError("reversible_spectrum needs a square kernel with a stationary vector")
    if np.any(pi <= 0):
        raise DetailedBalanceError("stationary distribution has a zero-mass state")
    resid = detailed_balance_residual(p, pi)
    if resid > BALANCE_TOL:
        raise DetailedBalanceError(f"detailed-balance residual {resid:.3e} exceeds {BALANCE_TOL:g}")
    s = np.sqrt(pi)
    sym = s[:, None] * p / s[None, :]
    sym = (sym + sym.T) / 2.0
    spec = sym_eigen(sym)
    spec.eigenvectors = spec.eigenvectors / s[:, None]
    spec.max_imag_residual = resid
    return spec


def _snap(x: float) -> float:
    for target in (0.0, 1.0, -1.0):
        if abs(x - target) <= SNAP_TOL:
            return target
    return x


def gap(spectrum: Spectrum | np.ndarray) -> Gap:
    """Spectral gap, absolute gap and lambda_*; reducibility flagged, not raised."""
    ev = np.asarray(spectrum.eigenvalues if isinstance(spectrum, Spectrum) else spectrum, dtype=float)
    ev = np.sort(ev)[::-1]
    if ev.size == 0:
        raise ValueError("empty spectrum")
    reducible = ev.size > 1 and abs(ev[1] - 1.0) <= REDUCIBLE_TOL
    lam2 = float(ev[1]) if ev.size > 1 else 0.0
    lam_n = float(ev[-1]) if ev.size > 1 else 0.0
    lam_star = max(lam2, abs(lam_n))
    gamma = 1.0 - lam2
    abs_gamma = 1.0 - lam_star
    if reducible or _snap(lam2) == 1.0:
        gamma = 0.0
    if _snap(lam_star) == 1.0:
        abs_gamma = 0.0
    return Gap(gamma, abs_gamma, lam_star, lam2, lam_n, bool(reducible))


def multiset_match(a, b, tol: float = 1e-8) -> float:
    """Max deviation between two equal-length multisets after sorting; inf on length mismatch."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        return float("inf")
    return float(np.max(np.abs(a - b))) if a.size else 0.0
