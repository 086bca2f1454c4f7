"""Shared hypothesis strategies and small reference oracles."""
import itertools

import numpy as np
from hypothesis import strategies as st

from subsetmax.graph import Graph, OrderedGraph, OrientedGraph, degeneracy_ordering


@st.composite
def graphs(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, b in zip(pairs, keep) if b])


@st.composite
def ordered_graphs(draw, min_n=1, max_n=9):
    """A random graph under a random ordering with k set to the true maximum
    forward-neighborhood independence number."""
    from subsetmax.graph import alpha_bruteforce
    g = draw(graphs(min_n, max_n))
    order = draw(st.permutations(range(g.n)))
    og = OrderedGraph(g, order, 1)
    k = max([1] + [alpha_bruteforce(g.induced(og.later(v))[0]) for v in range(g.n)])
    return og.with_k(k)


@st.composite
def oriented_graphs(draw, min_n=1, max_n=9):
    from subsetmax.graph import alpha_bruteforce
    g = draw(graphs(min_n, max_n))
    flips = draw(st.lists(st.booleans(), min_size=len(g.edges), max_size=len(g.edges)))
    arcs = [(u, v) if f else (v, u) for (u, v), f in zip(g.edges, flips)]
    dg = OrientedGraph.from_arcs(g, arcs, 1)
    k = max([1] + [alpha_bruteforce(g.induced(dg.out[v])[0]) for v in range(g.n)])
    return OrientedGraph(g, dg.out, k)


def all_subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def brute_opt(g, f):
    """Exhaustive max of f over independent sets, written independently of the package."""
    best = f.value(())
    for s in all_subsets(g.n):
        if all(not g.has_edge(u, v) for u, v in itertools.combinations(s, 2)):
            best = max(best, f.value(s))
    return best


# one (criterion, passed, detail) triple per acceptance criterion, echoed at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
