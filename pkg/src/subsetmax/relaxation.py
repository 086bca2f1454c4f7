"""Packing relaxation of independent sets, continuous greedy, and contention resolution.

The polytope has one row per vertex: the vertex itself plus its forward (or
out-) neighbors must sum to at most k, inside the unit box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .algorithms import RunResult
from .graph import OrderedGraph, OrientedGraph, VertexSet, vertex_set
from .rng import make_rng
from .simplex import LPSolution, solve_packing_lp
from .submodular import (CountingOracle, SubmodularOracle, multilinear_from_table,
                         multilinear_gradient_from_table)

EXACT_EVAL_CAP = 16
DEFAULT_STEPS = 100
DEFAULT_SAMPLES = 200


@dataclass(frozen=True)
class PackingPolytope:
    n: int
    rows: tuple[tuple[int, ...], ...]
    k: int
    form: str = "oriented"

    @property
    def matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for v, row in enumerate(self.rows):
            A[v, list(row)] = 1.0
        return A


def build_polytope(source: OrderedGraph | OrientedGraph) -> PackingPolytope:
    if isinstance(source, OrderedGraph):
        rows = tuple(vertex_set((v,) + source.later(v)) for v in range(source.n))
        return PackingPolytope(source.n, rows, source.k, "ordered")
    rows = tuple(vertex_set((v,) + source.out[v]) for v in range(source.n))
    return PackingPolytope(source.n, rows, source.k, "oriented")


def membership(Q: PackingPolytope, x: Sequence[float], b: float = 1.0,
               tol: float = 1e-9) -> bool:
    """Whether x lies in b * Q (row sums at most b*k, coordinates in [0, b])."""
    x = np.asarray(x, dtype=float)
    if x.shape != (Q.n,):
        raise ValueError(f"point has shape {x.shape}, polytope has dimension {Q.n}")
    if np.any(x < -tol) or np.any(x > b + tol):
        return False
    if Q.n == 0:
        return True
    return bool(np.all(Q.matrix @ x <= b * Q.k + tol))


def linear_maximize(Q: PackingPolytope, c: Sequence[float], b: float = 1.0,
                    full: bool = False) -> np.ndarray | LPSolution:
    """Maximize c.x over b * Q with the dense simplex solver.

    Returns the optimal point, or the whole ``LPSolution`` (value and dual
    certificate included) when ``full`` is set.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (Q.n,):
        raise ValueError("objective dimension does not match the polytope")
    if Q.n == 0:
        sol = LPSolution(np.zeros(0), 0.0, np.zeros(0), 0.0, 0)
    else:
        A = np.vstack([Q.matrix, np.eye(Q.n)])
        r = np.concatenate([np.full(Q.n, b * Q.k), np.full(Q.n, b)])
        sol = solve_packing_lp(c, A, r)
    return sol if full else sol.x


def _clamp(Q: PackingPolytope, x: np.ndarray, scale: float) -> np.ndarray:
    """Pull x back into scale * Q by uniform shrinking if drift exceeds 1e-9."""
    x = np.clip(x, 0.0, None)
    if Q.n == 0 or membership(Q, x, scale, tol=1e-9):
        return np.minimum(x, scale)
    worst = max(float((Q.matrix @ x).max()) / (scale * Q.k), float(x.max()) / scale)
    return x / worst


class _Evaluator:
    """Marginal weights F(x v e_v) - F(x) by exact enumeration or coupled sampling."""

    def __init__(self, f: SubmodularOracle, mode: str, samples: int, seed):
        n = f.ground_size
        if mode == "auto":
            mode = "exact" if n <= EXACT_EVAL_CAP else "sampled"
        if mode not in ("exact", "sampled"):
            raise ValueError(f"unknown evaluation mode {mode!r}")
        self.f, self.mode, self.samples = f, mode, samples
        self.rng = make_rng(seed)
        self.table = f.table() if mode == "exact" else None

    def weights(self, x: np.ndarray) -> np.ndarray:
        if self.mode == "exact":
            return (1.0 - x) * multilinear_gradient_from_table(self.table, x)
        n = len(x)
        draws = self.rng.random((self.samples, n)) < x
        acc = np.zeros(n)
        for row in draws:
            base = np.flatnonzero(row).tolist()
            f_base = self.f.value(base)
            for v in range(n):
                if not row[v]:
                    acc[v] += self.f.value(base + [v]) - f_base
        return acc / self.samples

    def value(self, x: np.ndarray) -> float:
        if self.mode == "exact":
            return multilinear_from_table(self.table, x)
        draws = self.rng.random((self.samples, len(x))) < x
        return float(np.mean([self.f.value(np.flatnonzero(r).tolist()) for r in draws]))


def _greedy_ascent(f, Q, b, steps, eval, samples, seed, measured):
    if steps < 10:
        raise ValueError("use at least 10 steps")
    if not 0 <= b <= 1:
        raise ValueError("b must lie in [0, 1]")
    horizon = b / Q.k
    x = np.zeros(Q.n)
    if horizon == 0 or Q.n == 0:
        return x
    ev = _Evaluator(f, eval, samples, seed)
    dt = horizon / steps
    for _ in range(steps):
        direction = linear_maximize(Q, ev.weights(x), 1.0)
        if measured:
            x = x + dt * direction * (1.0 - x)
        else:
            x = x + dt * direction
    return _clamp(Q, x, horizon)


def continuous_greedy(f: SubmodularOracle, Q: PackingPolytope, b: float = 1.0,
                      steps: int = DEFAULT_STEPS, eval: str = "auto",
                      samples: int = DEFAULT_SAMPLES, seed=None) -> np.ndarray:
    """Discretized continuous greedy for monotone f; the result lies in (b/k) Q.

    Each of the ``steps`` rounds moves by ``b / (k * steps)`` toward the vertex
    of Q maximizing the current marginal weights. ``eval`` picks exact
    enumeration (n <= 16 under ``"auto"``) or coupled sampling.
    """
    return _greedy_ascent(f, Q, b, steps, eval, samples, seed, measured=False)


def measured_continuous_greedy(f: SubmodularOracle, Q: PackingPolytope, b: float = 1.0,
                               steps: int = DEFAULT_STEPS, eval: str = "auto",
                               samples: int = DEFAULT_SAMPLES, seed=None) -> np.ndarray:
    """Measured variant for non-negative f: coordinate v moves at rate (1 - x_v)."""
    return _greedy_ascent(f, Q, b, steps, eval, samples, seed, measured=True)


# --------------------------------------------------------------------------
# contention resolution

def crs_deterministic(dg: OrientedGraph, R: Iterable[int]) -> VertexSet:
    """Keep the members of R that have no out-neighbor in R."""
    members = vertex_set(R, dg.n)
    mask = sum(1 << v for v in members)
    return tuple(v for v in members if not dg.out_masks[v] & mask)


def keep_probability(x: np.ndarray) -> np.ndarray:
    """(1 - exp(-x)) / x, continued by its limit 1 at x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    pos = x > 0
    out[pos] = -np.expm1(-x[pos]) / x[pos]
    return out


def crs_randomized(dg: OrientedGraph, x: Sequence[float], R: Iterable[int], seed=None) -> VertexSet:
    """Subsample R with probability (1 - e^{-x_v}) / x_v, then apply the deterministic scheme."""
    x = np.asarray(x, dtype=float)
    members = vertex_set(R, dg.n)
    if any(x[v] <= 0 for v in members):
        raise ValueError("R must lie inside the support of x")
    coins = make_rng(seed).random(len(members))
    q = keep_probability(x[list(members)]) if members else np.zeros(0)
    return crs_deterministic(dg, [v for v, c, p in zip(members, coins, q) if c < p])


def _out_matrix(dg: OrientedGraph) -> np.ndarray:
    M = np.zeros((dg.n, dg.n), dtype=np.int32)
    for v, u in dg.arcs:
        M[v, u] = 1
    return M


def crs_balance(dg: OrientedGraph, x: Sequence[float], scheme: str, trials: int,
                seed=None, batch: int = 20_000) -> dict:
    """Monte-Carlo retention statistics of a scheme at point x.

    Returns per-vertex counts of ``v in R(x)`` and ``v`` kept, plus the number
    of trials whose output was not independent (always 0 for a correct scheme).
    """
    if scheme not in ("det", "rand"):
        raise ValueError("scheme must be 'det' or 'rand'")
    x = np.asarray(x, dtype=float)
    rng = make_rng(seed)
    out = _out_matrix(dg)
    edges = np.array(dg.graph.edges, dtype=int).reshape(-1, 2)
    q = keep_probability(x)
    sampled = np.zeros(dg.n, dtype=np.int64)
    kept = np.zeros(dg.n, dtype=np.int64)
    violations = 0
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        R = rng.random((m, dg.n)) < x
        Rp = R & (rng.random((m, dg.n)) < q) if scheme == "rand" else R
        blocked = (Rp.astype(np.int32) @ out.T) > 0
        S = Rp & ~blocked
        sampled += R.sum(axis=0)
        kept += S.sum(axis=0)
        if len(edges):
            violations += int(np.any(S[:, edges[:, 0]] & S[:, edges[:, 1]], axis=1).sum())
        done += m
    return {"sampled": sampled, "kept": kept, "violations": violations, "trials": trials}


# --------------------------------------------------------------------------
# end-to-end rounding

def pipeline_ratio(k: int, b: float, scheme: str, monotone: bool) -> float:
    """Proved approximation ratio (a fraction at most 1) of solve-then-round."""
    frac = (1 - math.exp(-b / k)) if monotone else (b / k) * math.exp(-b / k)
    keep = (1 - b) if scheme == "det" else math.exp(-b)
    return frac * keep


def default_pipeline_b(k: int, scheme: str, monotone: bool) -> float:
    if scheme == "rand":
        return k * math.log1p(1 / k) if monotone else k / (k + 1)
    res = minimize_scalar(lambda b: -pipeline_ratio(k, b, "det", monotone),
                          bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-10})
    return float(res.x)


def round_pipeline(f: SubmodularOracle, instance: OrderedGraph | OrientedGraph,
                   b: float | None = None, scheme: str = "rand", trials: int = 200,
                   seed=None, steps: int = DEFAULT_STEPS, eval: str = "auto",
                   samples: int = DEFAULT_SAMPLES, monotone: bool | None = None) -> RunResult:
    """Solve the multilinear relaxation over the packing polytope, then round.

    Continuous greedy is used for monotone f and its measured variant
    otherwise. Each trial samples R(x), resolves contention with ``scheme`` and
    evaluates f; the best trial is returned. ``stack_final`` holds the sampled
    set R of that trial.
    """
    dg = instance.to_oriented() if isinstance(instance, OrderedGraph) else instance
    if monotone is None:
        monotone = f.monotone_hint
    if b is None:
        b = default_pipeline_b(dg.k, scheme, monotone)
    if scheme not in ("det", "rand"):
        raise ValueError("scheme must be 'det' or 'rand'")
    oracle = CountingOracle(f)
    rng = make_rng(seed)
    Q = build_polytope(dg)
    solve = continuous_greedy if monotone else measured_continuous_greedy
    x = solve(oracle, Q, b, steps=steps, eval=eval, samples=samples, seed=rng)
    best_set, best_val, best_R = (), oracle.value(()), ()
    for _ in range(trials):
        R = tuple(np.flatnonzero(rng.random(dg.n) < x).tolist())
        S = crs_deterministic(dg, R) if scheme == "det" else crs_randomized(dg, x, R, rng)
        val = oracle.value(S)
        if val > best_val:
            best_set, best_val, best_R = S, val, R
    return RunResult(best_set, best_val, vertex_set(best_R), oracle_calls=oracle.calls,
                     rng_seed=seed if isinstance(seed, int) else None,
                     fractional=x)
