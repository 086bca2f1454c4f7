"""Command-line driver: ``subsetmax {gen,run,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or IO error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from . import checks
from .algorithms import (AlgoParams, default_params, guarantee_factor, preemptive_greedy,
                         primal_dual_monotone, primal_dual_mwis, primal_dual_nonneg,
                         randomized_preemptive_greedy)
from .bruteforce import OPT_CAP, brute_force_opt
from .instances import (InstanceFormatError, attach_function, gen_degenerate,
                        gen_interval_graph, gen_line_graph_matching, gen_oriented_cycle,
                        read_instance, write_instance)
from .relaxation import default_pipeline_b, pipeline_ratio, round_pipeline
from .rng import derive_seed
from .submodular import ModularFunction

ALGOS = ("greedy", "rgreedy", "pd", "pd-nonneg", "pd-mwis", "crs-det", "crs-rand")
RANDOMIZED = {"rgreedy", "pd-nonneg", "crs-det", "crs-rand"}
CLASSES = ("interval", "line", "degenerate", "cycle")
CSV_HEADER = ["instance", "algorithm", "params", "seed", "value", "opt", "ratio",
              "guarantee", "oracle_calls", "wall_ms"]


class UsageError(Exception):
    pass


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SUBSETMAX_THREADS", "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# gen

def _generate(cls: str, args, seed: int):
    if cls == "interval":
        return gen_interval_graph(args.n, seed)
    if cls == "line":
        return gen_line_graph_matching(args.n, args.base_n or max(3, args.n), seed)
    if cls == "degenerate":
        return gen_degenerate(args.n, args.edge_prob, seed)
    if cls == "cycle":
        return gen_oriented_cycle(args.n, seed)
    raise UsageError(f"unknown class {cls!r}")


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        inst = _generate(args.cls, args, derive_seed(args.seed, args.cls, i))
        inst = attach_function(inst, args.function,
                               derive_seed(args.seed, args.cls, i, args.function))
        path = out / f"{args.cls}-{args.function}-{i:04d}.json"
        write_instance(inst, path)
        print(path)
    return 0


# --------------------------------------------------------------------------
# run

@lru_cache(maxsize=64)
def _load(path: str):
    return read_instance(path)


@lru_cache(maxsize=64)
def _opt(path: str, weights_only: bool) -> float:
    inst = _load(path)
    f = ModularFunction(checks.mwis_weights(inst)) if weights_only else inst.function
    return brute_force_opt(inst.graph, f).best_value


def _fmt(x: float) -> str:
    return repr(float(x))


def _run_one(task) -> list[str]:
    path, algo, trial, cfg = task
    inst = _load(path)
    k = cfg["k_override"] or inst.k
    seed = derive_seed(cfg["seed"], Path(path).name, algo, trial) if algo in RANDOMIZED else None
    row = {"instance": path, "algorithm": algo, "seed": "" if seed is None else str(seed)}
    f = inst.function
    try:
        if algo != "pd-mwis" and f is None:
            raise UsageError("instance has no function")
        if algo not in ("crs-det", "crs-rand") and inst.ordered is None:
            raise UsageError(f"{algo} needs an ordering; instance only has an orientation")
        og = inst.ordered.with_k(k) if inst.ordered is not None else None
        start = time.perf_counter()
        if algo in ("greedy", "rgreedy"):
            params = AlgoParams(cfg["beta"] or default_params(k, "greedy").beta)
            run = preemptive_greedy if algo == "greedy" else randomized_preemptive_greedy
            r = run(og, f, params.beta) if algo == "greedy" else run(og, f, params.beta, seed)
            guarantee = guarantee_factor(k, params, algo)
            desc = f"beta={params.beta:.6g}"
        elif algo == "pd":
            params = AlgoParams(cfg["beta"] or default_params(k, "monotone").beta)
            r = primal_dual_monotone(og, f, params.beta)
            guarantee = guarantee_factor(k, params, "monotone") if f.monotone_hint else math.nan
            desc = f"beta={params.beta:.6g}"
        elif algo == "pd-nonneg":
            base = default_params(k, "nonneg")
            p = cfg["p"] or base.p
            beta = cfg["beta"] or ((1 - 2 * p) / p if cfg["p"] else base.beta)
            params = AlgoParams(beta, p)
            r = primal_dual_nonneg(og, f, beta, p, seed)
            guarantee = guarantee_factor(k, params, "nonneg")
            desc = f"beta={beta:.6g};p={p:.6g}"
        elif algo == "pd-mwis":
            r = primal_dual_mwis(og, checks.mwis_weights(inst))
            guarantee = float(k)
            desc = ""
        else:
            scheme = "det" if algo == "crs-det" else "rand"
            dg = inst.as_oriented()
            b = cfg["b"] if cfg["b"] is not None else default_pipeline_b(dg.k, scheme, f.monotone_hint)
            r = round_pipeline(f, dg, b, scheme, cfg["rounds"], seed)
            guarantee = 1 / pipeline_ratio(dg.k, b, scheme, f.monotone_hint)
            desc = f"b={b:.6g};rounds={cfg['rounds']}"
        wall = (time.perf_counter() - start) * 1000
    except (UsageError, ValueError) as exc:
        print(f"{path}: {algo}: {exc}", file=sys.stderr)
        row.update(params=f"error={exc}")
        return [row.get(h, "") for h in CSV_HEADER]
    opt = ""
    ratio = ""
    if cfg["opt"] == "auto" and inst.n <= OPT_CAP:
        o = _opt(path, algo == "pd-mwis")
        opt = _fmt(o)
        ratio = _fmt(o / r.value) if r.value > 0 else ("1.0" if o == 0 else "inf")
    row.update(params=desc, value=_fmt(r.value), opt=opt, ratio=ratio,
               guarantee=_fmt(guarantee), oracle_calls=str(r.oracle_calls),
               wall_ms=f"{wall:.3f}" if cfg["timing"] else "")
    return [row.get(h, "") for h in CSV_HEADER]


def cmd_run(args) -> int:
    for p in args.instances:
        try:
            _load(p)
        except (OSError, InstanceFormatError) as exc:
            raise UsageError(str(exc)) from exc
    cfg = {"beta": args.beta, "p": args.p, "b": args.b, "k_override": args.k_override,
           "seed": args.seed, "opt": args.opt, "rounds": args.rounds, "timing": args.timing}
    algos = args.algo or ["pd"]
    tasks = [(p, a, t, cfg) for p in args.instances for a in algos
             for t in range(args.trials if a in RANDOMIZED else 1)]
    workers = _workers()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_run_one, tasks, chunksize=16))
    else:
        rows = [_run_one(t) for t in tasks]
    if args.format == "json":
        text = json.dumps([dict(zip(CSV_HEADER, r)) for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(rows)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------
# verify

SUITES = ("structure", "dual", "ratio", "mwis", "budget", "crs-balance")


def _verify_instance(path: str, suites, trials: int, seed: int) -> dict:
    inst = _load(path)
    failures: list[str] = []
    skipped: list[str] = []
    table = []
    f = inst.function
    small = inst.n <= OPT_CAP
    opt = checks.opt_value(inst) if small and f is not None else None
    for suite in suites:
        if suite == "structure":
            failures += checks.check_structure(inst)
        elif suite == "crs-balance":
            bad, rows = checks.check_crs_balance(inst, trials, derive_seed(seed, Path(path).name))
            failures += bad
            table += rows
        elif inst.ordered is None or f is None:
            skipped.append(suite)
        elif suite == "mwis":
            failures += checks.check_mwis(inst) if small else []
        elif suite == "budget":
            failures += checks.check_budget(inst, derive_seed(seed, Path(path).name, "budget"))
        elif not f.monotone_hint:
            skipped.append(suite)
        elif small:
            bad = checks.check_primal_dual(inst, opt) + checks.check_greedy(inst, opt)
            failures += [m for m in bad if m.startswith(f"[{suite}]")]
        else:
            skipped.append(suite)
    return {"instance": path, "ok": not failures, "failures": sorted(set(failures)),
            "skipped": skipped, "crs_table": table}


def cmd_verify(args) -> int:
    suites = SUITES if "all" in args.suite else tuple(args.suite)
    reports = []
    for p in args.instances:
        try:
            _load(p)
        except (OSError, InstanceFormatError) as exc:
            reports.append({"instance": p, "ok": False, "failures": [f"unreadable: {exc}"],
                            "skipped": [], "crs_table": []})
            continue
        reports.append(_verify_instance(p, suites, args.trials, args.seed))
    ok = all(r["ok"] for r in reports)
    if args.format == "json":
        print(json.dumps({"ok": ok, "suites": list(suites), "reports": reports}, indent=1))
    else:
        for r in reports:
            print(f"{'PASS' if r['ok'] else 'FAIL'} {r['instance']}")
            for m in r["failures"]:
                print(f"    {m}")
            if r["crs_table"]:
                print("    scheme vertex      x   sampled  retention  bound")
                for t in r["crs_table"]:
                    print(f"    {t['scheme']:>6} {t['vertex']:>6} {t['x']:.4f} {t['sampled']:>9}"
                          f"  {t['retention']:.5f}  {t['bound']:.5f}")
        print(f"{sum(r['ok'] for r in reports)}/{len(reports)} instances passed")
    return 0 if ok else 1


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subsetmax", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write seeded instances")
    g.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    g.add_argument("--n", type=int, required=True,
                   help="vertex count (for --class line: number of base edges)")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--function", choices=("modular", "coverage", "cut"), default="modular")
    g.add_argument("--edge-prob", type=float, default=0.3)
    g.add_argument("--base-n", type=int, default=None)
    g.add_argument("--out", default="instances")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run algorithms and write a results table")
    r.add_argument("instances", nargs="*")
    r.add_argument("--algo", action="append", choices=ALGOS)
    r.add_argument("--beta", type=float)
    r.add_argument("--p", type=float)
    r.add_argument("--b", type=float)
    r.add_argument("--k-override", type=int)
    r.add_argument("--trials", type=int, default=1)
    r.add_argument("--rounds", type=int, default=200,
                   help="rounding attempts per relaxation run (crs-det, crs-rand)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--opt", choices=("auto", "skip"), default="auto")
    r.add_argument("--timing", action="store_true",
                   help="fill wall_ms (makes output non-reproducible)")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check certificates and proved bounds")
    v.add_argument("instances", nargs="*")
    v.add_argument("--suite", action="append", choices=SUITES + ("all",), default=None)
    v.add_argument("--trials", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "suite", "x") is None:
        args.suite = ["all"]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"subsetmax: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"subsetmax: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
