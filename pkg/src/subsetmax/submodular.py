"""Value oracles for set functions and helpers built on top of them.

Oracles only answer ``value(S)``; marginals, incremental values and the
multilinear extension are computed here from value queries so that call
counts stay auditable.
"""
from __future__ import annotations

import threading
from typing import Iterable, Sequence

import numpy as np

from .graph import ResourceGuardError

MULTILINEAR_CAP = 20
SUBMODULAR_CHECK_CAP = 12


class SubmodularOracle:
    """Base class: a non-negative set function on ``range(ground_size)`` with f(empty) = 0."""

    ground_size: int
    monotone_hint: bool = False

    def value(self, s: Iterable[int]) -> float:
        raise NotImplementedError

    def __call__(self, s: Iterable[int]) -> float:
        return self.value(s)

    def table(self) -> np.ndarray:
        """f on every subset, indexed by bitmask (bit i set iff vertex i is in S)."""
        n = self.ground_size
        return np.array([self.value([i for i in range(n) if m >> i & 1])
                         for m in range(1 << n)], dtype=float)

    def spec(self) -> dict:
        """JSON-ready description, used by the instance file format."""
        raise NotImplementedError


def subset_bits(n: int) -> np.ndarray:
    """Boolean matrix of shape (2**n, n); row m is the membership vector of mask m."""
    return (np.arange(1 << n)[:, None] >> np.arange(n)) & 1 == 1


class ModularFunction(SubmodularOracle):
    monotone_hint = True

    def __init__(self, weights: Sequence[float]):
        w = [float(x) for x in weights]
        if any(x < 0 for x in w):
            raise ValueError("modular weights must be non-negative")
        self.weights = w
        self.ground_size = len(w)

    def value(self, s):
        w = self.weights
        return float(sum(w[v] for v in s))

    def table(self):
        return subset_bits(self.ground_size) @ np.asarray(self.weights, dtype=float)

    def spec(self):
        return {"type": "modular", "weights": list(self.weights)}


class CoverageFunction(SubmodularOracle):
    """Weighted coverage: f(S) is the weight of the union of the sets covered by S."""

    monotone_hint = True

    def __init__(self, universe_weights: Sequence[float], covers: Sequence[Iterable[int]]):
        uw = [float(x) for x in universe_weights]
        if any(x < 0 for x in uw):
            raise ValueError("universe weights must be non-negative")
        self.universe_weights = uw
        self.covers = [tuple(sorted(set(int(e) for e in c))) for c in covers]
        for c in self.covers:
            if c and (c[0] < 0 or c[-1] >= len(uw)):
                raise IndexError("cover refers to an element outside the universe")
        self.ground_size = len(self.covers)
        self._masks = [sum(1 << e for e in c) for c in self.covers]

    def value(self, s):
        covered = 0
        for v in s:
            covered |= self._masks[v]
        total = 0.0
        uw = self.universe_weights
        while covered:
            b = covered & -covered
            total += uw[b.bit_length() - 1]
            covered ^= b
        return total

    def table(self):
        incidence = np.zeros((self.ground_size, len(self.universe_weights)))
        for v, c in enumerate(self.covers):
            incidence[v, list(c)] = 1.0
        covered = (subset_bits(self.ground_size) @ incidence) > 0
        return covered @ np.asarray(self.universe_weights, dtype=float)

    def spec(self):
        return {"type": "coverage", "universe_weights": list(self.universe_weights),
                "covers": [list(c) for c in self.covers]}


class CutFunction(SubmodularOracle):
    """Weight of the edges of an auxiliary graph with exactly one endpoint in S.

    Symmetric and non-monotone, so ``monotone_hint`` is False.
    """

    monotone_hint = False

    def __init__(self, n: int, edges: Iterable[Sequence[float]]):
        self.ground_size = int(n)
        es = []
        for e in edges:
            u, v, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad auxiliary edge {e}")
            if w < 0:
                raise ValueError("cut weights must be non-negative")
            es.append((u, v, w))
        self.edges = es

    def value(self, s):
        inside = set(s)
        return float(sum(w for u, v, w in self.edges if (u in inside) != (v in inside)))

    def table(self):
        bits = subset_bits(self.ground_size)
        out = np.zeros(1 << self.ground_size)
        for u, v, w in self.edges:
            out += w * (bits[:, u] ^ bits[:, v])
        return out

    def spec(self):
        return {"type": "cut", "n": self.ground_size,
                "edges": [[u, v, w] for u, v, w in self.edges]}


class CountingOracle(SubmodularOracle):
    """Pass-through wrapper that counts value queries. One instance per run."""

    def __init__(self, inner: SubmodularOracle):
        self.inner = inner
        self.ground_size = inner.ground_size
        self.monotone_hint = inner.monotone_hint
        self.calls = 0
        self._lock = threading.Lock()

    def value(self, s):
        with self._lock:
            self.calls += 1
        return self.inner.value(s)

    def table(self):
        with self._lock:
            self.calls += 1 << self.ground_size
        return self.inner.table()

    def spec(self):
        return self.inner.spec()


def oracle_from_spec(spec: dict, n: int) -> SubmodularOracle:
    kind = spec.get("type")
    if kind == "modular":
        f = ModularFunction(spec["weights"])
    elif kind == "coverage":
        f = CoverageFunction(spec["universe_weights"], spec["covers"])
    elif kind == "cut":
        f = CutFunction(spec.get("n", n), spec["edges"])
    else:
        raise ValueError(f"unknown function type {kind!r}")
    if f.ground_size != n:
        raise ValueError(f"function ground set has size {f.ground_size}, graph has {n}")
    return f


def marginal(f: SubmodularOracle, s: Iterable[int], v: int, fs: float | None = None) -> float:
    """f(S + v) - f(S). Pass ``fs`` to reuse a known f(S) and save a query."""
    s = list(s)
    if v in s:
        raise ValueError(f"vertex {v} is already in the set")
    if fs is None:
        fs = f.value(s)
    return f.value(s + [v]) - fs


def incremental_value(f: SubmodularOracle, s: Iterable[int], v: int,
                      position: Sequence[int]) -> float:
    """Marginal of ``v`` against the members of ``s`` that precede it in ``position``."""
    s = list(s)
    if v not in s:
        raise ValueError(f"vertex {v} is not in the set")
    before = [u for u in s if position[u] < position[v]]
    return marginal(f, before, v)


def _product_weights(x: np.ndarray) -> np.ndarray:
    n = len(x)
    p = np.ones(1 << n)
    bits = subset_bits(n)
    for i in range(n):
        p *= np.where(bits[:, i], x[i], 1.0 - x[i])
    return p


def multilinear_from_table(table: np.ndarray, x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    return float(_product_weights(x) @ table)


def multilinear_exact(f: SubmodularOracle, x: Sequence[float]) -> float:
    """Multilinear extension by summing over all 2**n subsets."""
    x = np.asarray(x, dtype=float)
    if f.ground_size > MULTILINEAR_CAP:
        raise ResourceGuardError(f"multilinear_exact capped at n={MULTILINEAR_CAP}")
    if x.shape != (f.ground_size,):
        raise ValueError("point dimension does not match the ground set")
    return multilinear_from_table(f.table(), x)


def multilinear_gradient_from_table(table: np.ndarray, x: Sequence[float]) -> np.ndarray:
    """Partial derivatives dF/dx_v = E[f(R + v) - f(R - v)] with R drawn from x."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    t = table.reshape((2,) * n) if n else table
    # reshape puts bit n-1 on axis 0; flip so axis i holds bit i
    t = np.transpose(t, tuple(reversed(range(n))))
    grad = np.empty(n)
    for v in range(n):
        d = np.take(t, 1, axis=v) - np.take(t, 0, axis=v)
        for i in reversed([i for i in range(n) if i != v]):
            d = d @ np.array([1.0 - x[i], x[i]])
        grad[v] = float(d)
    return grad


def multilinear_estimate(f: SubmodularOracle, x: Sequence[float], samples: int,
                         rng: np.random.Generator | int | None = None,
                         return_std: bool = False):
    """Monte-Carlo estimate of the multilinear extension.

    With ``return_std`` the sample standard deviation of f(R) is returned as well.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(rng)
    x = np.asarray(x, dtype=float)
    draws = rng.random((samples, len(x))) < x
    vals = np.array([f.value(np.flatnonzero(row).tolist()) for row in draws])
    mean = float(vals.mean())
    if return_std:
        return mean, float(vals.std(ddof=1)) if samples > 1 else 0.0
    return mean


def is_submodular_brute(f: SubmodularOracle, tol: float = 1e-9) -> bool:
    """Check f(A+v) - f(A) >= f(B+v) - f(B) for every A <= B and v outside B."""
    n = f.ground_size
    if n > SUBMODULAR_CHECK_CAP:
        raise ResourceGuardError(f"is_submodular_brute capped at n={SUBMODULAR_CHECK_CAP}")
    table = f.table()
    masks = np.arange(1 << n)
    for v in range(n):
        bit = 1 << v
        gain = np.full(1 << n, np.inf)
        free = (masks & bit) == 0
        gain[free] = table[masks[free] | bit] - table[masks[free]]
        # smallest marginal over all subsets A of B (sum-over-subsets min)
        low = gain.copy()
        for i in range(n):
            has = (masks >> i) & 1 == 1
            low[has] = np.minimum(low[has], low[masks[has] ^ (1 << i)])
        if np.any(gain[free] > low[free] + tol):
            return False
    return True
