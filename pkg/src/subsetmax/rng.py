"""Seeded random streams.

All randomness goes through numpy's PCG64. Sub-streams are keyed by a stable
hash of their labels, so adding a new algorithm or instance never shifts the
stream of an existing one.
"""
from __future__ import annotations

import hashlib

import numpy as np


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master: int, *labels) -> int:
    """64-bit seed derived from a master seed and any number of labels."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode())
    return int.from_bytes(h.digest(), "little")
