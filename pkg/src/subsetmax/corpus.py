"""Seeded instance corpora used by the acceptance suite and the experiment scripts."""
from __future__ import annotations

from typing import Iterator

from .instances import (Instance, attach_function, gen_degenerate, gen_interval_graph,
                        gen_line_graph_matching, gen_oriented_cycle)
from .rng import derive_seed, make_rng

ORDERED_CLASSES = ("interval", "line", "degenerate")


def _degenerate_with_k(n: int, k: int, seed) -> Instance:
    """Rejection-sample G(n, p) until the degeneracy equals ``k``."""
    for attempt in range(1000):
        s = derive_seed(seed, attempt)
        rng = make_rng(s)
        p = float(rng.uniform(0.6, 1.6) * 2 * k / max(n - 1, 1))
        inst = gen_degenerate(n, min(p, 1.0), s)
        if inst.k == k:
            return inst
    raise RuntimeError(f"no degeneracy-{k} graph on {n} vertices found")


def ordered_graph(cls: str, index: int, seed: int, min_n: int = 8, max_n: int = 14) -> Instance:
    """The ``index``-th graph of a class. Degenerate graphs cycle through k = 1..4."""
    s = derive_seed(seed, cls, index)
    n = int(make_rng(s).integers(min_n, max_n + 1))
    if cls == "interval":
        return gen_interval_graph(n, s)
    if cls == "line":
        return gen_line_graph_matching(n, max(4, (n + 3) // 2), s)
    if cls == "degenerate":
        return _degenerate_with_k(n, 1 + index % 4, s)
    raise ValueError(f"unknown class {cls!r}")


def ratio_corpus(per_class: int = 200, seed: int = 0, kinds=("modular", "coverage"),
                 classes=ORDERED_CLASSES, min_n: int = 8, max_n: int = 14
                 ) -> Iterator[tuple[str, Instance]]:
    """Every graph of every class, once per function kind."""
    for cls in classes:
        for i in range(per_class):
            g = ordered_graph(cls, i, seed, min_n, max_n)
            for kind in kinds:
                yield f"{cls}/{kind}/{i}", attach_function(g, kind, derive_seed(seed, cls, i, kind))


def oriented_corpus(count: int = 20, seed: int = 0, max_n: int = 30
                    ) -> Iterator[tuple[str, Instance]]:
    """Directed cycles plus interval and degenerate graphs with their ordering orientation."""
    for i in range(count):
        s = derive_seed(seed, "oriented", i)
        n = int(make_rng(s).integers(max(3, max_n // 2), max_n + 1))
        kind = ("cycle", "interval", "degenerate")[i % 3]
        if kind == "cycle":
            inst = gen_oriented_cycle(n, s)
        elif kind == "interval":
            inst = gen_interval_graph(n, s)
        else:
            inst = _degenerate_with_k(n, 1 + (i // 3) % 3, s)
        yield f"{kind}/{i}", attach_function(inst, "modular", s)
