"""Dense tableau simplex for packing LPs: max c.x subject to A x <= r, x >= 0, r >= 0.

The origin is feasible, so a single phase from the slack basis suffices. The
optimal tableau yields a dual vector, and every solve is checked against it
before returning.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = 1e-12


class LPError(RuntimeError):
    pass


@dataclass
class LPSolution:
    x: np.ndarray
    value: float
    dual: np.ndarray
    dual_bound: float
    iterations: int


def solve_packing_lp(c, A, r, tol: float = 1e-9, max_iter: int = 10_000) -> LPSolution:
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    r = np.asarray(r, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or r.shape != (m,):
        raise ValueError("dimension mismatch between c, A and r")
    if np.any(r < 0):
        raise ValueError("packing LP needs a non-negative right-hand side")

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = r
    T[m, :n] = -c
    basis = list(range(n, n + m))

    bland = False
    it = 0
    while True:
        reduced = T[m, :-1]
        if bland:
            candidates = np.flatnonzero(reduced < -EPS)
            if candidates.size == 0:
                break
            j = int(candidates[0])
        else:
            j = int(np.argmin(reduced))
            if reduced[j] >= -EPS:
                break
        col = T[:m, j]
        rows = np.flatnonzero(col > EPS)
        if rows.size == 0:
            raise LPError("LP is unbounded")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + EPS]
        i = int(min(ties, key=lambda t: basis[t]))
        # switch to Bland's rule after a degenerate pivot to rule out cycling
        bland = bland or best <= EPS
        T[i] /= T[i, j]
        for q in range(m + 1):
            if q != i and T[q, j] != 0.0:
                T[q] -= T[q, j] * T[i]
        basis[i] = j
        it += 1
        if it > max_iter:
            raise LPError("simplex did not terminate")

    x = np.zeros(n)
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i, -1]
    x[np.abs(x) < EPS] = 0.0
    dual = T[m, n:n + m].copy()
    value = float(c @ x)

    scale = max(1.0, abs(value))
    if np.any(x < -tol) or np.any(A @ x > r + tol * np.maximum(1.0, np.abs(r))):
        raise LPError("simplex returned an infeasible primal point")
    if np.any(dual < -tol) or np.any(A.T @ dual < c - tol * max(1.0, np.abs(c).max(initial=0))):
        raise LPError("simplex returned an infeasible dual")
    bound = float(r @ dual)
    if abs(bound - value) > 1e-7 * scale:
        raise LPError(f"duality gap {bound - value:.3g} exceeds tolerance")
    return LPSolution(x, value, np.clip(dual, 0.0, None), bound, it)
