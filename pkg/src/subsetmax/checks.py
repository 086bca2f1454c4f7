"""Per-instance property checks shared by the ``verify`` command and the test suite.

Each ``check_*`` function returns a list of human-readable failure messages;
an empty list means the instance passed.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .algorithms import (AlgoParams, RunResult, default_params, guarantee_factor,
                         preemptive_greedy, primal_dual_monotone, primal_dual_mwis,
                         primal_dual_nonneg, randomized_preemptive_greedy,
                         verify_dual_feasibility_monotone)
from .bruteforce import brute_force_opt
from .graph import (ResourceGuardError, is_independent, verify_inductive_k_independence,
                    verify_k_perfect_orientation)
from .instances import Instance
from .relaxation import PackingPolytope, build_polytope, crs_balance
from .rng import make_rng
from .submodular import ModularFunction, SubmodularOracle

RATIO_TOL = 1e-6
BOUND_TOL = 1e-9
CRS_SIGMAS = 4.0


def opt_value(inst: Instance, f: SubmodularOracle | None = None) -> float:
    return brute_force_opt(inst.graph, f or inst.function).best_value


def mwis_weights(inst: Instance) -> np.ndarray:
    """Modular weights when the function is modular, else singleton values."""
    f = inst.function
    if isinstance(f, ModularFunction):
        return np.asarray(f.weights)
    return np.array([f.value([v]) for v in range(inst.n)])


def check_structure(inst: Instance) -> list[str]:
    bad = []
    try:
        if inst.ordered is not None and not verify_inductive_k_independence(inst.ordered):
            bad.append(f"ordering does not certify inductive {inst.k}-independence")
        if inst.oriented is not None and not verify_k_perfect_orientation(inst.oriented):
            bad.append(f"orientation does not certify {inst.k}-perfect orientability")
    except ResourceGuardError as exc:
        bad.append(f"structure check skipped: {exc}")
    return bad


def _common(r: RunResult, inst: Instance, name: str) -> list[str]:
    bad = []
    if not is_independent(inst.graph, r.output):
        bad.append(f"[ratio] {name}: output {r.output} is not independent")
    if not set(r.output) <= set(r.stack_final):
        bad.append(f"[ratio] {name}: output is not contained in the phase-one set")
    if r.oracle_calls > 2 * inst.n + 2:
        bad.append(f"[budget] {name}: {r.oracle_calls} oracle calls exceed 2n+2 = {2 * inst.n + 2}")
    return bad


def check_primal_dual(inst: Instance, opt: float, beta: float | None = None) -> list[str]:
    """Dual feasibility, the weight bounds, the OPT bound and the final ratio.

    Messages are tagged ``[dual]``, ``[ratio]`` or ``[budget]``.
    """
    og, f, k = inst.ordered, inst.function, inst.k
    params = default_params(k, "monotone") if beta is None else AlgoParams(beta)
    b = params.beta
    r = primal_dual_monotone(og, f, b)
    bad = _common(r, inst, "primal-dual")
    sw = math.fsum(r.duals.w)
    f_stack = f.value(r.stack_final)
    if inst.n <= 16 and not verify_dual_feasibility_monotone(r, og, f):
        bad.append("[dual] primal-dual: dual solution infeasible")
    if r.value < sw - BOUND_TOL:
        bad.append(f"[dual] primal-dual: f(Sout)={r.value} < sum w={sw}")
    if f_stack > (1 + b) / b * sw + BOUND_TOL:
        bad.append(f"[dual] primal-dual: f(stack)={f_stack} > (1+b)/b sum w")
    if opt > f_stack + k * (1 + b) * sw + RATIO_TOL:
        bad.append(f"[dual] primal-dual: OPT={opt} exceeds the dual objective")
    factor = guarantee_factor(k, params, "monotone")
    if opt > factor * r.value + RATIO_TOL:
        bad.append(f"[ratio] primal-dual: OPT={opt} > {factor:.4f} * {r.value}")
    return bad


def check_greedy(inst: Instance, opt: float, beta: float | None = None) -> list[str]:
    og, f, k = inst.ordered, inst.function, inst.k
    params = default_params(k, "greedy") if beta is None else AlgoParams(beta)
    r = preemptive_greedy(og, f, params.beta)
    bad = _common(r, inst, "greedy")
    ever = set(r.conflicts)
    evicted = [u for c in r.conflicts.values() for u in c]
    if len(evicted) != len(set(evicted)) or set(evicted) != ever - set(r.output):
        bad.append("[ratio] greedy: conflict sets do not partition the evicted vertices")
    factor = guarantee_factor(k, params, "greedy")
    if opt > factor * r.value + RATIO_TOL:
        bad.append(f"[ratio] greedy: OPT={opt} > {factor:.4f} * {r.value}")
    return bad


def check_budget(inst: Instance, seed=0) -> list[str]:
    """Oracle-call counts of the greedy and primal-dual algorithms against 2n+2."""
    og, f, k = inst.ordered, inst.function, inst.k
    nn = default_params(k, "nonneg")
    runs = {
        "greedy": preemptive_greedy(og, f, default_params(k, "greedy").beta),
        "randomized greedy": randomized_preemptive_greedy(og, f, default_params(k, "greedy").beta, seed),
        "primal-dual": primal_dual_monotone(og, f, default_params(k, "monotone").beta),
        "non-negative primal-dual": primal_dual_nonneg(og, f, nn.beta, nn.p, seed),
    }
    limit = 2 * inst.n + 2
    return [f"[budget] {name}: {r.oracle_calls} oracle calls exceed 2n+2 = {limit}"
            for name, r in runs.items() if r.oracle_calls > limit]


def check_mwis(inst: Instance, opt_w: float | None = None) -> list[str]:
    """Weak duality of the weighted independent set run, with duals in exact arithmetic."""
    og, k = inst.ordered, inst.k
    w = mwis_weights(inst)
    if opt_w is None:
        opt_w = brute_force_opt(inst.graph, ModularFunction(w)).best_value
    r = primal_dual_mwis(og, w, exact=True)
    y = r.duals.y
    bad = []
    if not is_independent(inst.graph, r.output):
        bad.append("mwis: output is not independent")
    w_out = sum((Fraction(float(w[v])) for v in r.output), Fraction(0))
    sy = sum(y, Fraction(0))
    if w_out < sy:
        bad.append(f"mwis: w(Sout)={float(w_out)} < sum y={float(sy)}")
    if opt_w > k * float(sy) + RATIO_TOL:
        bad.append(f"mwis: OPT={opt_w} > k * sum y = {k * float(sy)}")
    if opt_w > k * float(w_out) + RATIO_TOL:
        bad.append(f"mwis: OPT={opt_w} > k * w(Sout) = {k * float(w_out)}")
    for v in range(inst.n):
        if y[v] + sum((y[u] for u in og.earlier(v)), Fraction(0)) < Fraction(float(w[v])):
            bad.append(f"mwis: dual constraint of vertex {v} violated")
    return bad


def random_point(Q: PackingPolytope, scale: float, rng, low: float = 0.05) -> np.ndarray:
    """Random point of scale * Q with at least one constraint tight."""
    y = make_rng(rng).uniform(low, 1.0, Q.n)
    if Q.n == 0:
        return y
    s = min(scale / y.max(), scale * Q.k / (Q.matrix @ y).max())
    return y * s


def check_crs_balance(inst: Instance, trials: int, seed, b: float | None = None) -> tuple[list[str], list[dict]]:
    """Retention of both schemes at a random tight point of (b/k) Q.

    Each vertex must satisfy freq + 4 sigma >= bound, with sigma the binomial
    standard deviation at the bound for that vertex's sample count.
    """
    dg = inst.as_oriented()
    rng = make_rng(seed)
    if b is None:
        b = float(rng.uniform(0.2, 0.9))
    Q = build_polytope(dg)
    x = random_point(Q, b / dg.k, rng)
    bad, table = [], []
    for scheme, bound in (("det", 1 - b), ("rand", math.exp(-b))):
        stats = crs_balance(dg, x, scheme, trials, rng)
        if stats["violations"]:
            bad.append(f"crs-{scheme}: {stats['violations']} non-independent outputs")
        for v in range(dg.n):
            m = int(stats["sampled"][v])
            if m == 0:
                continue
            freq = stats["kept"][v] / m
            sigma = math.sqrt(bound * (1 - bound) / m)
            ok = freq + CRS_SIGMAS * sigma >= bound
            table.append({"scheme": scheme, "vertex": v, "x": float(x[v]), "sampled": m,
                          "retention": float(freq), "bound": bound, "ok": ok})
            if not ok:
                bad.append(f"crs-{scheme}: vertex {v} retention {freq:.4f} < {bound:.4f}")
    return bad, table
