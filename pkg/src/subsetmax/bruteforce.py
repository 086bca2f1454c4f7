"""Exact optimum over independent sets by backtracking (ground truth for tests)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .graph import Graph, ResourceGuardError, VertexSet
from .submodular import SubmodularOracle

ENUMERATE_CAP = 24
OPT_CAP = 20


@dataclass
class BruteForceResult:
    best_set: VertexSet
    best_value: float
    sets_enumerated: int


def _walk(g: Graph, visit: Callable[[tuple[int, ...], int], bool]) -> int:
    """DFS over independent sets in lexicographic order of their sorted tuples.

    ``visit(members, free_mask)`` is called on every set; returning False prunes
    the subtree of extensions. ``free_mask`` holds the vertices that may still be
    added.
    """
    masks = g.masks
    full = (1 << g.n) - 1
    count = 0
    members: list[int] = []

    def rec(free: int) -> None:
        nonlocal count
        count += 1
        if not visit(tuple(members), free):
            return
        while free:
            b = free & -free
            v = b.bit_length() - 1
            free ^= b
            members.append(v)
            rec(free & ~masks[v])
            members.pop()

    rec(full)
    return count


def enumerate_independent_sets(g: Graph, visitor: Callable[[VertexSet], object]) -> int:
    """Call ``visitor`` once per independent set of ``g``; return how many there are."""
    if g.n > ENUMERATE_CAP:
        raise ResourceGuardError(f"enumeration capped at n={ENUMERATE_CAP}")

    def visit(members, free):
        visitor(members)
        return True

    return _walk(g, visit)


def brute_force_opt(g: Graph, f: SubmodularOracle, prune: bool = True) -> BruteForceResult:
    """Maximize f over the independent sets of g.

    Ties go to the lexicographically smallest set. When ``f.monotone_hint`` is set
    (and ``prune``), a subtree is cut once f(S + all free vertices) cannot beat the
    incumbent.
    """
    if g.n > OPT_CAP:
        raise ResourceGuardError(f"brute_force_opt capped at n={OPT_CAP}")
    if f.ground_size != g.n:
        raise ValueError("function and graph disagree on the vertex count")
    use_bound = prune and f.monotone_hint
    best: list = [(), f.value(())]

    def visit(members, free):
        if members:
            val = f.value(members)
            if val > best[1]:
                best[0], best[1] = members, val
        if use_bound and free:
            rest = [v for v in range(g.n) if free >> v & 1]
            if f.value(list(members) + rest) <= best[1]:
                return False
        return True

    count = _walk(g, visit)
    return BruteForceResult(tuple(best[0]), float(best[1]), count)
