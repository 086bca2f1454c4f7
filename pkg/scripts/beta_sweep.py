"""How the primal-dual and greedy ratios move with beta on a fixed corpus.

    python3 scripts/beta_sweep.py --per-class 20
"""
import argparse

import numpy as np

from subsetmax import checks
from subsetmax.algorithms import (AlgoParams, guarantee_factor, preemptive_greedy,
                                  primal_dual_monotone)
from subsetmax.corpus import ratio_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-class", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--betas", type=float, nargs="+",
                    default=[0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0])
    args = ap.parse_args()

    items = [(inst, checks.opt_value(inst)) for _, inst in ratio_corpus(args.per_class, args.seed)]
    print(f"{'beta':>6}{'pd mean':>10}{'pd worst':>10}{'gr mean':>10}{'gr worst':>10}{'pd bound k=1':>14}")
    for b in args.betas:
        pd, gr = [], []
        for inst, opt in items:
            if opt <= 0:
                continue
            pd.append(opt / primal_dual_monotone(inst.ordered, inst.function, b).value)
            gr.append(opt / preemptive_greedy(inst.ordered, inst.function, b).value)
        print(f"{b:>6.2f}{np.mean(pd):>10.3f}{max(pd):>10.3f}{np.mean(gr):>10.3f}{max(gr):>10.3f}"
              f"{guarantee_factor(1, AlgoParams(b), 'monotone'):>14.2f}")


if __name__ == "__main__":
    main()
