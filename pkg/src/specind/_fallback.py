"""Pure numpy/Python versions of the compiled kernels in ``_core.pyx``.

Same signatures and return values. The Jacobi solver here uses a
round-robin (tournament) ordering so each round applies n/2 disjoint
rotations as vectorised row/column updates; it converges to the same
eigenvalues as the cyclic-by-row compiled version.
"""
from __future__ import annotations

import numpy as np


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a_in, tol: float = 1e-13, max_sweeps: int = 100):
    a = np.array(a_in, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    thresh = tol * max(1.0, float(np.linalg.norm(a)))
    rounds = _round_robin(n) if n > 1 else []
    upper = np.triu_indices(n, 1)
    sweep = 0
    while True:
        off = float(np.sqrt(2.0 * np.sum(a[upper] ** 2)))
        if off <= thresh or sweep >= max_sweeps:
            break
        sweep += 1
        for P, Q in rounds:
            if P.size == 0:
                continue
            apq = a[P, Q]
            app = a[P, P]
            aqq = a[Q, Q]
            nz = apq != 0.0
            if not nz.any():
                continue
            theta = np.where(nz, (aqq - app) / np.where(nz, 2.0 * apq, 1.0), 0.0)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(th >= 0, 1.0, -1.0) / (np.abs(th) + np.sqrt(1.0 + th * th))
            # |theta| huge: t ~ 1/(2 theta)
            t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            colP = a[:, P].copy()
            colQ = a[:, Q].copy()
            a[:, P] = colP * c - colQ * s
            a[:, Q] = colP * s + colQ * c
            rowP = a[P, :].copy()
            rowQ = a[Q, :].copy()
            a[P, :] = c[:, None] * rowP - s[:, None] * rowQ
            a[Q, :] = s[:, None] * rowP + c[:, None] * rowQ
            a[P, Q] = 0.0
            a[Q, P] = 0.0
            vP = v[:, P].copy()
            vQ = v[:, Q].copy()
            v[:, P] = vP * c - vQ * s
            v[:, Q] = vP * s + vQ * c
    return np.diag(a).copy(), v, sweep, off


def glauber_hardcore(nbr, state: int, verts, u, p_occ: float, out) -> int:
    state = int(state)
    nbr = [int(x) for x in nbr]
    for t in range(len(verts)):
        v = int(verts[t])
        if u[t] < p_occ:
            if state & nbr[v] == 0:
                state |= 1 << v
        else:
            state &= ~(1 << v)
        out[t] = state
    return state


def _accumulate(nbr: list[int], subset: int, counts: np.ndarray) -> None:
    todo = subset
    while todo:
        low = todo & -todo
        comp = low
        frontier = low
        while frontier:
            grow = 0
            b = frontier
            while b:
                lb = b & -b
                grow |= nbr[lb.bit_length() - 1]
                b ^= lb
            frontier = grow & subset & ~comp
            comp |= frontier
        size = comp.bit_count() if hasattr(comp, "bit_count") else bin(comp).count("1")
        todo &= ~comp
        b = comp
        while b:
            lb = b & -b
            counts[lb.bit_length() - 1, size] += 1
            b ^= lb


def shatter_counts(nbr, n: int, m: int):
    counts = np.zeros((n, m + 1), dtype=np.int64)
    if m == 0:
        return counts, 1
    nbr = [int(x) for x in nbr]
    subset = (1 << m) - 1
    limit = 1 << n
    total = 0
    while subset < limit:
        _accumulate(nbr, subset, counts)
        total += 1
        c = subset & -subset
        r = subset + c
        subset = (((r ^ subset) >> 2) // c) | r
    return counts, total


def shatter_counts_masks(nbr, n: int, m: int, masks):
    counts = np.zeros((n, m + 1), dtype=np.int64)
    nbr = [int(x) for x in nbr]
    for mask in masks:
        _accumulate(nbr, int(mask), counts)
    return counts
