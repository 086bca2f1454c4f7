"""Empirical OPT/f(output) for every algorithm across the seeded corpora.

Writes one CSV row per (instance, algorithm) and prints per-class summaries
next to the proved factors.

    python3 scripts/ratio_sweep.py --per-class 50 --out ratios.csv
"""
import argparse
import csv
import math
from collections import defaultdict

import numpy as np

from subsetmax import checks
from subsetmax.algorithms import (default_params, guarantee_factor, preemptive_greedy,
                                  primal_dual_monotone, primal_dual_mwis, primal_dual_nonneg,
                                  randomized_preemptive_greedy)
from subsetmax.bruteforce import brute_force_opt
from subsetmax.corpus import ratio_corpus
from subsetmax.relaxation import round_pipeline
from subsetmax.rng import derive_seed
from subsetmax.submodular import ModularFunction


def mean_value(run, trials):
    return float(np.mean([run(t).value for t in range(trials)]))


def sweep(per_class, seed, trials, kinds, pipeline):
    for name, inst in ratio_corpus(per_class, seed, kinds=kinds):
        og, f, k = inst.ordered, inst.function, inst.k
        opt = checks.opt_value(inst)
        cls, kind, _ = name.split("/")
        gp, mp, nn = default_params(k, "greedy"), default_params(k, "monotone"), default_params(k, "nonneg")
        rows = []
        if f.monotone_hint:
            rows.append(("pd", primal_dual_monotone(og, f, mp.beta).value,
                         guarantee_factor(k, mp, "monotone")))
            rows.append(("greedy", preemptive_greedy(og, f, gp.beta).value,
                         guarantee_factor(k, gp, "greedy")))
        rows.append(("pd-nonneg", mean_value(
            lambda t: primal_dual_nonneg(og, f, nn.beta, nn.p, derive_seed(seed, name, "pdn", t)), trials),
            guarantee_factor(k, nn, "nonneg")))
        rows.append(("rgreedy", mean_value(
            lambda t: randomized_preemptive_greedy(og, f, gp.beta, derive_seed(seed, name, "rg", t)), trials),
            guarantee_factor(k, gp, "rgreedy")))
        if pipeline and f.monotone_hint:
            r = round_pipeline(f, og, None, "rand", 100, derive_seed(seed, name, "pipe"))
            rows.append(("crs-rand", r.value, (k + 1) * (1 + 1 / k) ** k))
        w = checks.mwis_weights(inst)
        opt_w = brute_force_opt(inst.graph, ModularFunction(w)).best_value
        for algo, value, factor in rows:
            yield dict(instance=name, cls=cls, function=kind, n=inst.n, k=k, algorithm=algo,
                       value=value, opt=opt, ratio=opt / value if value > 0 else math.inf,
                       guarantee=factor)
        mw = primal_dual_mwis(og, w).value
        yield dict(instance=name, cls=cls, function=kind, n=inst.n, k=k, algorithm="pd-mwis",
                   value=mw, opt=opt_w, ratio=opt_w / mw if opt_w > 0 else 1.0, guarantee=k)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-class", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=200, help="trials for randomized algorithms")
    ap.add_argument("--kinds", nargs="+", default=["modular", "coverage", "cut"])
    ap.add_argument("--pipeline", action="store_true", help="also run the relaxation pipeline")
    ap.add_argument("--out", default="ratios.csv")
    args = ap.parse_args()

    rows = list(sweep(args.per_class, args.seed, args.trials, tuple(args.kinds), args.pipeline))
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)

    groups = defaultdict(list)
    for r in rows:
        groups[(r["cls"], r["function"], r["algorithm"])].append(r)
    print(f"{'class':<11}{'function':<10}{'algorithm':<11}{'runs':>5}{'mean':>8}{'worst':>8}{'proved':>9}")
    for (cls, kind, algo), rs in sorted(groups.items()):
        ratios = [r["ratio"] for r in rs]
        print(f"{cls:<11}{kind:<10}{algo:<11}{len(rs):>5}{np.mean(ratios):>8.3f}"
              f"{max(ratios):>8.3f}{max(r['guarantee'] for r in rs):>9.2f}")
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
