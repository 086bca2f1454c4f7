"""Graphs, vertex orderings, orientations and the structural predicates on them.

Vertices are dense integers ``0..n-1``. A vertex set is a sorted tuple of
vertex indices. All containers here are immutable once built.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

VertexSet = tuple[int, ...]

ALPHA_CAP = 30
NEIGHBORHOOD_CAP = 25
BRUTE_ALPHA_CAP = 15


class ResourceGuardError(ValueError):
    """Raised when an exponential-time check is asked to work above its cap."""


def vertex_set(members: Iterable[int], n: int | None = None) -> VertexSet:
    s = tuple(sorted(set(int(v) for v in members)))
    if n is not None and s and (s[0] < 0 or s[-1] >= n):
        raise IndexError(f"vertex set {s} has members outside [0, {n})")
    return s


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency must have one list per vertex")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"neighbors of {v} must be sorted and duplicate-free")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise IndexError(f"edge ({v}, {u}) leaves the vertex range")
                if u == v:
                    raise ValueError(f"self-loop at {v}")
                if v not in self._adjsets[u]:
                    raise ValueError(f"adjacency is not symmetric at ({v}, {u})")

    @cached_property
    def _adjsets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise IndexError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(() for _ in range(n)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighborhood of each vertex as an integer bitmask."""
        return tuple(sum(1 << u for u in nbrs) for nbrs in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def induced(self, members: Iterable[int]) -> tuple["Graph", VertexSet]:
        """Induced subgraph, relabelled to ``0..len(members)-1``.

        Returns the subgraph and the original label of each new vertex.
        """
        labels = vertex_set(members, self.n)
        index = {v: i for i, v in enumerate(labels)}
        edges = [(index[u], index[v]) for u in labels for v in self.adjacency[u]
                 if v in index and u < v]
        return Graph.from_edges(len(labels), edges), labels


def _check_permutation(order: Sequence[int], n: int) -> None:
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the vertex indices")


@dataclass(frozen=True)
class OrderedGraph:
    """A graph with a vertex ordering claimed to certify inductive k-independence.

    ``order[i]`` is the vertex at position ``i`` and ``position[v]`` its inverse.
    """

    graph: Graph
    order: tuple[int, ...]
    k: int = 1
    position: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        _check_permutation(self.order, self.graph.n)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        pos = [0] * self.graph.n
        for i, v in enumerate(self.order):
            pos[v] = i
        object.__setattr__(self, "position", tuple(pos))

    @property
    def n(self) -> int:
        return self.graph.n

    def later(self, v: int) -> VertexSet:
        """Neighbors of vertex ``v`` that come after it in the ordering."""
        p = self.position[v]
        return tuple(u for u in self.graph.adjacency[v] if self.position[u] > p)

    def earlier(self, v: int) -> VertexSet:
        p = self.position[v]
        return tuple(u for u in self.graph.adjacency[v] if self.position[u] < p)

    def with_k(self, k: int) -> "OrderedGraph":
        return OrderedGraph(self.graph, self.order, k)

    def to_oriented(self) -> "OrientedGraph":
        """Orient every edge from the earlier endpoint to the later one."""
        return OrientedGraph(self.graph, tuple(self.later(v) for v in range(self.n)), self.k)


@dataclass(frozen=True)
class OrientedGraph:
    """A graph with an orientation claimed to certify k-perfect orientability.

    ``out[v]`` lists the heads of the arcs leaving ``v``.
    """

    graph: Graph
    out: tuple[tuple[int, ...], ...]
    k: int = 1

    def __post_init__(self):
        out = tuple(tuple(sorted(int(u) for u in heads)) for heads in self.out)
        object.__setattr__(self, "out", out)
        if len(out) != self.graph.n:
            raise ValueError("need one out-neighbor list per vertex")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        arcs = 0
        for v, heads in enumerate(out):
            if len(set(heads)) != len(heads):
                raise ValueError(f"duplicate arc out of {v}")
            for u in heads:
                if not self.graph.has_edge(v, u):
                    raise ValueError(f"arc ({v}, {u}) is not an edge of the graph")
                if v in out[u]:
                    raise ValueError(f"edge ({v}, {u}) is oriented both ways")
            arcs += len(heads)
        if arcs != len(self.graph.edges):
            raise ValueError("every edge must be oriented exactly once")

    @classmethod
    def from_arcs(cls, graph: Graph, arcs: Iterable[Sequence[int]], k: int = 1) -> "OrientedGraph":
        out: list[list[int]] = [[] for _ in range(graph.n)]
        for a in arcs:
            out[int(a[0])].append(int(a[1]))
        return cls(graph, tuple(tuple(h) for h in out), k)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, u) for v in range(self.n) for u in self.out[v])

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << u for u in heads) for heads in self.out)


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    members = vertex_set(s, g.n)
    mask = 0
    for v in members:
        mask |= 1 << v
    return all(not (g.masks[v] & mask) for v in members)


def forward_neighbors(og: OrderedGraph, i: int) -> VertexSet:
    """Neighbors of the vertex at order position ``i`` that sit at later positions."""
    if not 0 <= i < og.n:
        raise IndexError(f"position {i} out of range")
    return vertex_set(og.later(og.order[i]))


def backward_neighbors(og: OrderedGraph, i: int) -> VertexSet:
    if not 0 <= i < og.n:
        raise IndexError(f"position {i} out of range")
    return vertex_set(og.earlier(og.order[i]))


def _greedy_clique_cover(cand: int, masks: Sequence[int]) -> int:
    """Number of cliques in a greedy cover of ``cand``; upper-bounds alpha."""
    count = 0
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        clique = low
        common = masks[v] & cand
        while common:
            b = common & -common
            clique |= b
            common &= masks[b.bit_length() - 1]
        cand &= ~clique
        count += 1
    return count


def _alpha_masks(cand: int, masks: Sequence[int]) -> int:
    best = 0

    def search(cand: int, size: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + _greedy_clique_cover(cand, masks) <= best:
            return
        # branch on the max-degree vertex of the candidate subgraph
        v, deg = -1, -1
        rest = cand
        while rest:
            b = rest & -rest
            u = b.bit_length() - 1
            d = bin(masks[u] & cand).count("1")
            if d > deg:
                v, deg = u, d
            rest ^= b
        if deg == 0:
            best = max(best, size + bin(cand).count("1"))
            return
        search(cand & ~(1 << v) & ~masks[v], size + 1)
        search(cand & ~(1 << v), size)

    search(cand, 0)
    return best


def alpha_exact(g: Graph, cap: int = ALPHA_CAP) -> int:
    """Independence number by branch-and-bound with a clique-cover bound."""
    if g.n > cap:
        raise ResourceGuardError(f"alpha_exact capped at n={cap}, got n={g.n}")
    return _alpha_masks((1 << g.n) - 1, g.masks)


def alpha_bruteforce(g: Graph) -> int:
    """Independence number by enumerating every subset (cross-check only)."""
    if g.n > BRUTE_ALPHA_CAP:
        raise ResourceGuardError(f"alpha_bruteforce capped at n={BRUTE_ALPHA_CAP}")
    best = 0
    masks = g.masks
    for s in range(1 << g.n):
        size = bin(s).count("1")
        if size <= best:
            continue
        if all(not (masks[v] & s) for v in range(g.n) if s >> v & 1):
            best = size
    return best


def _alpha_of(g: Graph, members: Sequence[int], cap: int) -> int:
    if len(members) > cap:
        raise ResourceGuardError(
            f"neighborhood of size {len(members)} exceeds the verification cap {cap}")
    sub, _ = g.induced(members)
    return _alpha_masks((1 << sub.n) - 1, sub.masks)


def verify_inductive_k_independence(og: OrderedGraph, cap: int = NEIGHBORHOOD_CAP) -> bool:
    """Check that every forward neighborhood has independence number at most ``og.k``."""
    for v in og.order:
        later = og.later(v)
        if len(later) <= og.k:
            continue
        if _alpha_of(og.graph, later, cap) > og.k:
            return False
    return True


def verify_k_perfect_orientation(dg: OrientedGraph, cap: int = NEIGHBORHOOD_CAP) -> bool:
    """Check that every out-neighborhood has independence number at most ``dg.k``."""
    for v in range(dg.n):
        heads = dg.out[v]
        if len(heads) <= dg.k:
            continue
        if _alpha_of(dg.graph, heads, cap) > dg.k:
            return False
    return True


def degeneracy_ordering(g: Graph) -> OrderedGraph:
    """Peel minimum-degree vertices; the peel order is a degeneracy ordering.

    Ties go to the smallest index. The returned ``k`` is the degeneracy,
    floored at 1 since an edgeless graph still needs ``k >= 1``.
    """
    deg = [g.degree(v) for v in range(g.n)]
    alive = [True] * g.n
    order = []
    degeneracy = 0
    for _ in range(g.n):
        v = min((u for u in range(g.n) if alive[u]), key=lambda u: (deg[u], u))
        degeneracy = max(degeneracy, deg[v])
        alive[v] = False
        order.append(v)
        for u in g.adjacency[v]:
            if alive[u]:
                deg[u] -= 1
    return OrderedGraph(g, tuple(order), max(1, degeneracy))
