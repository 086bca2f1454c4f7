"""Combinatorial algorithms over an inductive vertex ordering.

Every algorithm sweeps the vertices once in the given order and returns a
``RunResult``. The primal-dual variants also return the dual values they build,
which certify an upper bound on the optimum.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import OrderedGraph, ResourceGuardError, VertexSet, is_independent, vertex_set
from .rng import make_rng
from .submodular import CountingOracle, SubmodularOracle, incremental_value

DUAL_CHECK_CAP = 16
REGIMES = ("monotone", "nonneg", "greedy", "rgreedy", "mwis")


@dataclass
class DualCertificate:
    w: np.ndarray
    y: np.ndarray
    z: np.ndarray
    mu: float = 0.0


@dataclass
class RunResult:
    output: VertexSet
    value: float
    stack_final: VertexSet
    duals: DualCertificate | None = None
    oracle_calls: int = 0
    rng_seed: int | None = None
    # preemptive greedy only: vertex -> the conflict set it evicted on acceptance
    conflicts: dict[int, VertexSet] = field(default_factory=dict)
    # relaxation pipeline only: the fractional point that was rounded
    fractional: np.ndarray | None = None


@dataclass(frozen=True)
class AlgoParams:
    beta: float
    p: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.p is not None and not 0 < self.p < 1:
            raise ValueError("p must lie strictly between 0 and 1")


def _check_beta(beta: float) -> None:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")


# --------------------------------------------------------------------------
# preemptive greedy

class _PrefixCache:
    """Current set S in sweep order plus lazily refreshed prefix values f(S_<=u).

    The incremental value of a member u is f(S_<=u) - f(S_<u). Removing members
    invalidates the prefixes after the first removed position; they are
    recomputed only when some incremental value needs them.
    """

    def __init__(self, oracle: SubmodularOracle):
        self.f = oracle
        self.members: list[int] = []
        self.prefix: dict[int, float] = {}
        self.value = 0.0

    def _prefix(self, idx: int) -> float:
        if idx < 0:
            return 0.0
        u = self.members[idx]
        if u not in self.prefix:
            self.prefix[u] = self.f.value(self.members[: idx + 1])
        return self.prefix[u]

    def nu(self, u: int) -> float:
        idx = self.members.index(u)
        return self._prefix(idx) - self._prefix(idx - 1)

    def replace(self, evict: set[int], v: int, new_value: float) -> None:
        first = next((i for i, u in enumerate(self.members) if u in evict), None)
        if first is not None:
            for u in self.members[first:]:
                self.prefix.pop(u, None)
            self.members = [u for u in self.members if u not in evict]
        self.members.append(v)
        self.prefix[v] = new_value
        self.value = new_value


def _preemptive_sweep(og: OrderedGraph, oracle: CountingOracle, beta: float,
                      vertices: Sequence[int], incremental: str, check: bool):
    """One forward pass of preemptive greedy over ``vertices`` (already in order)."""
    if incremental not in ("exact", "insertion"):
        raise ValueError("incremental must be 'exact' or 'insertion'")
    masks = og.graph.masks
    cache = _PrefixCache(oracle)
    frozen: dict[int, float] = {}
    conflicts: dict[int, VertexSet] = {}
    for v in vertices:
        conflict = [u for u in cache.members if masks[v] >> u & 1]
        gain = oracle.value(cache.members + [v]) - cache.value
        if incremental == "exact":
            charge = sum(cache.nu(u) for u in conflict)
        else:
            charge = sum(frozen[u] for u in conflict)
        if gain >= (1 + beta) * charge:
            if conflict:
                new_value = oracle.value([u for u in cache.members if u not in conflict] + [v])
            else:
                new_value = cache.value + gain
            cache.replace(set(conflict), v, new_value)
            frozen[v] = gain
            for u in conflict:
                frozen.pop(u)
            conflicts[v] = vertex_set(conflict)
        if check:
            _check_incremental(og, oracle.inner, cache, frozen, incremental)
    return cache.members, conflicts


def _check_incremental(og, f, cache, frozen, incremental, tol=1e-9):
    for u in cache.members:
        truth = incremental_value(f, cache.members, u, og.position)
        if incremental == "exact":
            got = _uncounted_nu(f, cache, u)
            assert abs(got - truth) <= tol * max(1.0, abs(truth)), (u, got, truth)
        else:
            # frozen arrival marginals can only under-estimate the current value
            assert frozen[u] <= truth + tol * max(1.0, abs(truth)), (u, frozen[u], truth)


def _uncounted_nu(f, cache, u):
    # read the cached prefixes without triggering counted refreshes
    idx = cache.members.index(u)
    hi = cache.prefix.get(u)
    if hi is None:
        hi = f.value(cache.members[: idx + 1])
    if idx == 0:
        return hi
    prev = cache.members[idx - 1]
    lo = cache.prefix.get(prev)
    if lo is None:
        lo = f.value(cache.members[:idx])
    return hi - lo


def preemptive_greedy(og: OrderedGraph, f: SubmodularOracle, beta: float,
                      incremental: str = "exact", check: bool = False) -> RunResult:
    """Single-pass preemptive greedy for monotone submodular f.

    Vertex v is accepted when its marginal is at least ``(1 + beta)`` times the
    summed incremental values of its neighbors currently held; those neighbors
    are then evicted.

    Parameters
    ----------
    incremental : {"exact", "insertion"}
        ``"exact"`` charges each conflicting member its current incremental
        value with respect to the ordering. ``"insertion"`` charges the marginal
        it had on arrival, which never exceeds the current value and needs no
        extra oracle queries.
    check : bool
        Recompute every cached incremental value from the definition after each
        step and assert agreement (debugging aid; its queries are not counted).
    """
    _check_beta(beta)
    oracle = CountingOracle(f)
    members, conflicts = _preemptive_sweep(og, oracle, beta, og.order, incremental, check)
    out = vertex_set(members)
    return RunResult(out, oracle.value(out), out, oracle_calls=oracle.calls,
                     conflicts=conflicts)


def randomized_preemptive_greedy(og: OrderedGraph, f: SubmodularOracle, beta: float,
                                 seed=None, incremental: str = "exact") -> RunResult:
    """Preemptive greedy on the subgraph induced by a fair-coin vertex sample.

    Coins are drawn in vertex-index order, one per vertex.
    """
    _check_beta(beta)
    rng = make_rng(seed)
    keep = rng.random(og.n) < 0.5
    oracle = CountingOracle(f)
    sweep = [v for v in og.order if keep[v]]
    members, conflicts = _preemptive_sweep(og, oracle, beta, sweep, incremental, False)
    out = vertex_set(members)
    return RunResult(out, oracle.value(out), out, oracle_calls=oracle.calls,
                     rng_seed=seed if isinstance(seed, int) else None, conflicts=conflicts)


# --------------------------------------------------------------------------
# primal-dual

def _primal_dual(og: OrderedGraph, f: SubmodularOracle, beta: float,
                 p: float | None, seed) -> RunResult:
    _check_beta(beta)
    n = og.n
    coins = make_rng(seed).random(n) if p is not None else None
    masks = og.graph.masks
    oracle = CountingOracle(f)
    w, y, z = np.zeros(n), np.zeros(n), np.zeros(n)
    stack: list[int] = []
    f_stack = 0.0
    for v in og.order:
        conflict_weight = sum(w[u] for u in stack if masks[v] >> u & 1)
        gain = oracle.value(stack + [v]) - f_stack
        if gain > (1 + beta) * conflict_weight and (coins is None or coins[v] < p):
            stack.append(v)
            w[v] = gain - conflict_weight
            y[v] = (1 + beta) * w[v]
            f_stack += gain
        else:
            z[v] = gain
    mu = f_stack
    out_mask = 0
    for v in reversed(stack):
        if not masks[v] & out_mask:
            out_mask |= 1 << v
    out = tuple(v for v in range(n) if out_mask >> v & 1)
    return RunResult(out, oracle.value(out), vertex_set(stack),
                     duals=DualCertificate(w, y, z, mu), oracle_calls=oracle.calls,
                     rng_seed=seed if isinstance(seed, int) else None)


def primal_dual_monotone(og: OrderedGraph, f: SubmodularOracle, beta: float) -> RunResult:
    """Two-phase primal-dual for monotone submodular f.

    Phase one pushes v when its marginal strictly exceeds ``(1 + beta)`` times
    the weight of its stacked neighbors; phase two pops the stack and keeps a
    maximal independent subset.
    """
    return _primal_dual(og, f, beta, None, None)


def primal_dual_nonneg(og: OrderedGraph, f: SubmodularOracle, beta: float | None = None,
                       p: float = 1 / 3, seed=None) -> RunResult:
    """Randomized primal-dual for non-negative submodular f.

    Identical to the monotone version except that a vertex passing the test is
    pushed only with probability ``p``; one coin per vertex is drawn up front in
    vertex-index order. If ``beta`` is omitted it is coupled to
    ``p`` as ``(1 - 2p) / p``.
    """
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    if beta is None:
        if p >= 0.5:
            raise ValueError("coupled beta = (1 - 2p)/p needs p < 1/2")
        beta = (1 - 2 * p) / p
    return _primal_dual(og, f, beta, p, seed)


def primal_dual_mwis(og: OrderedGraph, weights: Sequence[float], exact: bool = False) -> RunResult:
    """Stack algorithm for weighted independent set, read as primal-dual.

    ``duals.y`` holds the dual solution; ``k * sum(y)`` bounds the optimum.
    With ``exact`` the duals are computed in rational arithmetic (the float
    weights are exact rationals), so ``y`` is an object array of Fractions and
    w(Sout) >= sum(y) can be checked without rounding slack.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (og.n,):
        raise ValueError("need one weight per vertex")
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    masks = og.graph.masks
    if exact:
        w = [Fraction(float(x)) for x in weights]
        y = np.array([Fraction(0)] * og.n, dtype=object)
        zero = Fraction(0)
    else:
        w, y, zero = weights, np.zeros(og.n), 0.0
    stack = []
    for v in og.order:
        y[v] = max(zero, w[v] - sum((y[u] for u in og.earlier(v)), zero))
        if y[v] > 0:
            stack.append(v)
    out_mask = 0
    for v in reversed(stack):
        if not masks[v] & out_mask:
            out_mask |= 1 << v
    out = tuple(v for v in range(og.n) if out_mask >> v & 1)
    zeros = np.zeros(og.n)
    return RunResult(out, math.fsum(weights[list(out)]), vertex_set(stack),
                     duals=DualCertificate(zeros, y, zeros.copy(), 0.0))


# --------------------------------------------------------------------------
# parameters and guarantees

def default_params(k: int, regime: str) -> AlgoParams:
    """Parameter choice that minimizes the proved ratio for ``regime``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if regime == "monotone":
        return AlgoParams(beta=1 / math.sqrt(k))
    if regime in ("greedy", "rgreedy"):
        return AlgoParams(beta=math.sqrt(1 + 1 / k))
    if regime == "nonneg":
        p = 1 / (math.sqrt(2 / k) + 2)
        return AlgoParams(beta=(1 - 2 * p) / p, p=p)
    raise ValueError(f"unknown regime {regime!r}")


def guarantee_factor(k: int, params: AlgoParams, regime: str) -> float:
    """Proved worst-case ratio OPT / f(output) (or OPT / E[f(output)])."""
    b = params.beta
    if regime == "monotone":
        return (1 + b) * (1 / b + k)
    if regime == "greedy":
        return (k * (1 + b) + 1) * (1 + 1 / b)
    if regime == "rgreedy":
        return 4 * (k * (1 + b) + 1) * (1 + 1 / b)
    if regime == "nonneg":
        p = params.p
        if p is None:
            raise ValueError("the non-negative regime needs p")
        return (k * max((1 - p) / p, 1 + b) + (1 + b) / b) / (1 - p)
    if regime == "mwis":
        return float(k)
    raise ValueError(f"unknown regime {regime!r}")


# --------------------------------------------------------------------------
# certificate checks

def verify_dual_feasibility_monotone(result: RunResult, og: OrderedGraph, f: SubmodularOracle,
                                     tol: float = 1e-9) -> bool:
    """Check every dual constraint of the concave-closure LP for a primal-dual run.

    Exponential in n: all 2**n subset constraints are enumerated.
    """
    n = og.n
    if n > DUAL_CHECK_CAP:
        raise ResourceGuardError(f"dual feasibility check capped at n={DUAL_CHECK_CAP}")
    d = result.duals
    if d is None:
        return False
    if min(d.w.min(initial=0), d.y.min(initial=0), d.z.min(initial=0)) < -tol:
        return False
    table = f.table()
    if abs(d.mu - table[sum(1 << v for v in result.stack_final)]) > tol:
        return False
    masks = np.arange(1 << n)
    z_sum = np.zeros(1 << n)
    for v in range(n):
        z_sum += np.where(masks >> v & 1, d.z[v], 0.0)
    if np.any(d.mu + z_sum < table - tol):
        return False
    for v in range(n):
        if d.y[v] + sum(d.y[u] for u in og.earlier(v)) < d.z[v] - tol:
            return False
    return True


def run_checks(result: RunResult, og: OrderedGraph) -> None:
    """Assertions that hold for every algorithm's output."""
    assert set(result.output) <= set(result.stack_final)
    assert is_independent(og.graph, result.output)
