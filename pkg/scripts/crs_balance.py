"""Per-vertex retention of both contention resolution schemes.

For each oriented instance a random point x on the boundary of (b/k) Q is
drawn; R(x) is sampled many times and the fraction of sampled vertices the
scheme keeps is compared with 1 - b (deterministic) and exp(-b) (randomized).

    python3 scripts/crs_balance.py --instances 10 --trials 200000 --b 0.5
"""
import argparse
import math

import numpy as np

from subsetmax.corpus import oriented_corpus
from subsetmax.relaxation import build_polytope, crs_balance
from subsetmax.checks import random_point
from subsetmax.rng import derive_seed, make_rng


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--b", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'instance':<16}{'n':>4}{'k':>3}  {'scheme':<6}{'min ret':>9}{'bound':>8}{'min z':>8}{'indep':>7}")
    for name, inst in oriented_corpus(args.instances, args.seed, args.max_n):
        dg = inst.as_oriented()
        rng = make_rng(derive_seed(args.seed, name))
        x = random_point(build_polytope(dg), args.b / dg.k, rng)
        for scheme, bound in (("det", 1 - args.b), ("rand", math.exp(-args.b))):
            s = crs_balance(dg, x, scheme, args.trials, rng)
            m = np.maximum(s["sampled"], 1)
            freq = s["kept"] / m
            z = (freq - bound) / np.sqrt(bound * (1 - bound) / m)
            print(f"{name:<16}{dg.n:>4}{dg.k:>3}  {scheme:<6}{freq.min():>9.4f}{bound:>8.4f}"
                  f"{z.min():>8.2f}{'yes' if s['violations'] == 0 else 'NO':>7}")


if __name__ == "__main__":
    main()
