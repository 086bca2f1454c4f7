"""Seeded instance generators and the JSON instance file format."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .graph import Graph, OrderedGraph, OrientedGraph, degeneracy_ordering
from .rng import make_rng
from .submodular import (CoverageFunction, CutFunction, ModularFunction, SubmodularOracle,
                         oracle_from_spec)

FUNCTION_KINDS = ("modular", "coverage", "cut")


class InstanceFormatError(ValueError):
    pass


@dataclass
class Instance:
    graph: Graph
    k: int
    ordered: OrderedGraph | None = None
    oriented: OrientedGraph | None = None
    function: SubmodularOracle | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ordered is None and self.oriented is None:
            raise ValueError("an instance needs an ordering or an orientation")
        for part in (self.ordered, self.oriented):
            if part is not None and (part.graph != self.graph or part.k != self.k):
                raise ValueError("ordering/orientation disagree with the instance graph or k")
        if self.function is not None and self.function.ground_size != self.graph.n:
            raise ValueError("function ground set does not match the graph")

    @property
    def n(self) -> int:
        return self.graph.n

    def as_oriented(self) -> OrientedGraph:
        """The orientation, or the earlier-to-later orientation of the ordering."""
        if self.oriented is not None:
            return self.oriented
        return self.ordered.to_oriented()


def _ordered_instance(g: Graph, order, k: int, **meta) -> Instance:
    return Instance(g, k, ordered=OrderedGraph(g, tuple(order), k), metadata=meta)


def gen_interval_graph(n: int, seed=None) -> Instance:
    """Intersection graph of ``n`` random closed intervals in [0, 1], k = 1.

    Ordered by right endpoint, then left endpoint, then index.
    """
    rng = make_rng(seed)
    ends = np.sort(rng.random((n, 2)), axis=1)
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2)
             if ends[i, 0] <= ends[j, 1] and ends[j, 0] <= ends[i, 1]]
    order = sorted(range(n), key=lambda i: (ends[i, 1], ends[i, 0], i))
    return _ordered_instance(Graph.from_edges(n, edges), order, 1,
                             generator="interval", seed=seed, intervals=ends.tolist())


def line_graph(n_base: int, base_edges) -> Graph:
    base_edges = [tuple(e) for e in base_edges]
    m = len(base_edges)
    edges = [(a, b) for a, b in itertools.combinations(range(m), 2)
             if set(base_edges[a]) & set(base_edges[b])]
    return Graph.from_edges(m, edges)


def gen_line_graph_matching(m_edges: int, base_n: int, seed=None) -> Instance:
    """Line graph of a random base graph with ``m_edges`` edges; random order, k = 2."""
    pairs = list(itertools.combinations(range(base_n), 2))
    if not 0 <= m_edges <= len(pairs):
        raise ValueError(f"cannot place {m_edges} edges on {base_n} vertices")
    rng = make_rng(seed)
    chosen = sorted(rng.choice(len(pairs), size=m_edges, replace=False).tolist())
    base = [pairs[i] for i in chosen]
    order = rng.permutation(m_edges).tolist()
    return _ordered_instance(line_graph(base_n, base), order, 2, generator="line_graph",
                             seed=seed, base_n=base_n, base_edges=[list(e) for e in base])


def gen_degenerate(n: int, edge_prob: float, seed=None) -> Instance:
    """G(n, p) with its degeneracy ordering; k is the degeneracy (at least 1)."""
    if not 0 <= edge_prob <= 1:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = make_rng(seed)
    coins = rng.random(n * (n - 1) // 2) < edge_prob
    edges = [e for e, c in zip(itertools.combinations(range(n), 2), coins) if c]
    og = degeneracy_ordering(Graph.from_edges(n, edges))
    return _ordered_instance(og.graph, og.order, og.k, generator="degenerate", seed=seed,
                             edge_prob=edge_prob)


def gen_oriented_cycle(n: int, seed=None) -> Instance:
    """Cycle on ``n`` randomly labelled vertices with a cyclic orientation, k = 1."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    labels = make_rng(seed).permutation(n).tolist()
    arcs = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
    g = Graph.from_edges(n, arcs)
    dg = OrientedGraph.from_arcs(g, arcs, 1)
    return Instance(g, 1, oriented=dg, metadata={"generator": "cycle", "seed": seed})


def _rescale(values: np.ndarray) -> float:
    """Factor that brings the largest singleton value into [0.5, 1]."""
    top = float(values.max()) if len(values) else 0.0
    if top <= 0 or 0.5 <= top <= 1:
        return 1.0
    return 1.0 / top


def make_function(n: int, kind: str, seed=None) -> SubmodularOracle:
    rng = make_rng(seed)
    if kind == "modular":
        w = rng.random(n)
        return ModularFunction((w * _rescale(w)).tolist())
    if kind == "coverage":
        size = 2 * n
        p = min(1.0, 3 / size) if size else 0.0
        covers = [np.flatnonzero(rng.random(size) < p).tolist() for _ in range(n)]
        singles = np.array([len(c) for c in covers], dtype=float)
        scale = _rescale(singles)
        return CoverageFunction([scale] * size, covers)
    if kind == "cut":
        p = min(1.0, 3 / (n - 1)) if n > 1 else 0.0
        edges = []
        for u, v in itertools.combinations(range(n), 2):
            if rng.random() < p:
                edges.append((u, v, float(rng.random())))
        degree = np.zeros(n)
        for u, v, w in edges:
            degree[u] += w
            degree[v] += w
        scale = _rescale(degree)
        return CutFunction(n, [(u, v, w * scale) for u, v, w in edges])
    raise ValueError(f"unknown function kind {kind!r}")


def attach_function(inst: Instance, kind: str, seed=None) -> Instance:
    f = make_function(inst.n, kind, seed)
    meta = dict(inst.metadata, function_seed=seed)
    return replace(inst, function=f, metadata=meta)


# --------------------------------------------------------------------------
# file format

def instance_to_dict(inst: Instance) -> dict:
    d = {"n": inst.n, "edges": [list(e) for e in inst.graph.edges], "k": inst.k}
    if inst.ordered is not None:
        d["ordering"] = list(inst.ordered.order)
    if inst.oriented is not None:
        d["orientation"] = [list(a) for a in inst.oriented.arcs]
    if inst.function is not None:
        d["function"] = inst.function.spec()
    d["metadata"] = inst.metadata
    return d


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), separators=(",", ":")) + "\n"


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


def _require(d: dict, key: str, kind, where: str):
    if key not in d:
        raise InstanceFormatError(f"{where}: missing required field {key!r}")
    if not isinstance(d[key], kind):
        raise InstanceFormatError(f"{where}: field {key!r} has the wrong type")
    return d[key]


def instance_from_dict(d: dict, where: str = "<instance>") -> Instance:
    if not isinstance(d, dict):
        raise InstanceFormatError(f"{where}: top level must be an object")
    n = _require(d, "n", int, where)
    k = _require(d, "k", int, where)
    edges = _require(d, "edges", list, where)
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise InstanceFormatError(f"{where}: edges[{i}] must be a pair of integers")
        if not all(0 <= x < n for x in e):
            raise InstanceFormatError(f"{where}: edges[{i}] = {e} has a vertex outside [0, {n})")
    if "ordering" not in d and "orientation" not in d:
        raise InstanceFormatError(f"{where}: need 'ordering' or 'orientation'")
    try:
        g = Graph.from_edges(n, edges)
        ordered = OrderedGraph(g, tuple(d["ordering"]), k) if "ordering" in d else None
        oriented = (OrientedGraph.from_arcs(g, d["orientation"], k)
                    if "orientation" in d else None)
        f = oracle_from_spec(d["function"], n) if "function" in d else None
        return Instance(g, k, ordered, oriented, f, dict(d.get("metadata", {})))
    except (ValueError, IndexError, KeyError, TypeError) as exc:
        raise InstanceFormatError(f"{where}: {exc}") from exc


def read_instance(path) -> Instance:
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    return instance_from_dict(d, str(path))
