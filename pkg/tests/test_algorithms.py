import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_opt, ordered_graphs
from subsetmax.algorithms import (AlgoParams, default_params, guarantee_factor,
                                  preemptive_greedy, primal_dual_monotone, primal_dual_mwis,
                                  primal_dual_nonneg, randomized_preemptive_greedy, run_checks,
                                  verify_dual_feasibility_monotone)
from subsetmax.graph import Graph, OrderedGraph, is_independent
from subsetmax.instances import make_function
from subsetmax.submodular import CoverageFunction, CutFunction, ModularFunction


def path_instance():
    return OrderedGraph(Graph.path(3), (0, 1, 2), 1), ModularFunction([1, 3, 1])


def seed_where(n, pred):
    return next(s for s in range(10_000) if pred(np.random.default_rng(s).random(n)))


@st.composite
def runs(draw, kinds=("modular", "coverage"), max_n=9):
    og = draw(ordered_graphs(max_n=max_n))
    f = make_function(og.n, draw(st.sampled_from(kinds)), draw(st.integers(0, 2**32 - 1)))
    return og, f


# --- preemptive greedy --------------------------------------------------------

def test_greedy_path_trace():
    og, f = path_instance()
    r = preemptive_greedy(og, f, 1.0)
    assert r.output == (1,) and r.value == 3
    assert r.conflicts == {0: (), 1: (0,)}


def test_greedy_trivial_graphs():
    r = preemptive_greedy(OrderedGraph(Graph.empty(4), (2, 0, 3, 1)), ModularFunction([1, 2, 0.5, 4]), 0.7)
    assert r.output == (0, 1, 2, 3) and r.value == 7.5
    r = preemptive_greedy(OrderedGraph(Graph.empty(0), ()), ModularFunction([]), 1.0)
    assert r.output == () and r.value == 0


def test_greedy_accepts_zero_marginals_primal_dual_does_not():
    og = OrderedGraph(Graph.empty(2), (0, 1))
    f = ModularFunction([0.0, 0.0])
    assert preemptive_greedy(og, f, 1.0).output == (0, 1)
    assert primal_dual_monotone(og, f, 1.0).stack_final == ()


def test_bad_beta():
    og, f = path_instance()
    for algo in (preemptive_greedy, primal_dual_monotone):
        with pytest.raises(ValueError):
            algo(og, f, 0.0)
    with pytest.raises(ValueError):
        AlgoParams(-1.0)


def test_randomized_greedy_degenerate_samples():
    og, f = path_instance()
    none = seed_where(3, lambda u: np.all(u >= 0.5))
    assert randomized_preemptive_greedy(og, f, 1.0, none).output == ()
    every = seed_where(3, lambda u: np.all(u < 0.5))
    r = randomized_preemptive_greedy(og, f, 1.0, every)
    assert r.output == preemptive_greedy(og, f, 1.0).output


def test_randomized_greedy_cut_singletons():
    og = OrderedGraph(Graph.path(2), (0, 1), 1)
    f = CutFunction(2, [(0, 1, 1.0)])
    for v in (0, 1):
        s = seed_where(2, lambda u: (u < 0.5).tolist() == [v == 0, v == 1])
        r = randomized_preemptive_greedy(og, f, 1.0, s)
        assert r.output == (v,) and r.value == 1


# --- primal-dual --------------------------------------------------------------

def test_primal_dual_path_trace():
    og, f = path_instance()
    r = primal_dual_monotone(og, f, 1.0)
    assert r.stack_final == (0, 1)
    assert r.duals.w.tolist() == [1, 2, 0]
    assert r.duals.y.tolist() == [2, 4, 0]
    assert r.duals.z.tolist() == [0, 0, 1]
    assert r.duals.mu == 4
    assert r.output == (1,) and r.value == 3
    assert r.value >= r.duals.w.sum()


def test_primal_dual_single_and_zero():
    og = OrderedGraph(Graph.empty(1), (0,))
    r = primal_dual_monotone(og, ModularFunction([5.0]), 0.3)
    assert r.output == (0,) and r.value == 5 and r.duals.w[0] == 5 and r.duals.mu == 5
    og3, _ = path_instance()
    r = primal_dual_monotone(og3, ModularFunction([0, 0, 0]), 1.0)
    assert r.stack_final == () and r.output == () and r.duals.mu == 0


def test_nonneg_limits():
    og, f = path_instance()
    det = primal_dual_monotone(og, f, 1.0)
    for seed in range(20):
        r = primal_dual_nonneg(og, f, 1.0, 1 - 1e-12, seed)
        assert r.output == det.output and np.array_equal(r.duals.w, det.duals.w)
    fail = seed_where(3, lambda u: np.all(u >= 1 / 3))
    assert primal_dual_nonneg(og, f, None, 1 / 3, fail).output == ()
    with pytest.raises(ValueError):
        primal_dual_nonneg(og, f, None, 1.0, 0)
    with pytest.raises(ValueError):
        primal_dual_nonneg(og, f, None, 0.6, 0)


def test_nonneg_reproducible():
    og, _ = path_instance()
    f = CutFunction(3, [(0, 2, 1.0), (1, 2, 0.5)])
    a = primal_dual_nonneg(og, f, None, 0.4, 123)
    b = primal_dual_nonneg(og, f, None, 0.4, 123)
    assert a.output == b.output and np.array_equal(a.duals.z, b.duals.z)


# --- MWIS ---------------------------------------------------------------------

def test_mwis_examples():
    og, _ = path_instance()
    r = primal_dual_mwis(og, [1, 3, 1])
    assert r.duals.y.tolist() == [1, 2, 0]
    assert r.stack_final == (0, 1) and r.output == (1,) and r.value == 3
    r = primal_dual_mwis(OrderedGraph(Graph.empty(3), (0, 1, 2)), [1, 0, 2])
    assert r.duals.y.tolist() == [1, 0, 2] and r.output == (0, 2) and r.value == 3
    r = primal_dual_mwis(OrderedGraph(Graph.path(2), (0, 1)), [2, 2])
    assert r.duals.y.tolist() == [2, 0] and r.output == (0,) and r.value == 2
    with pytest.raises(ValueError):
        primal_dual_mwis(og, [1, -1, 1])


# --- parameters ---------------------------------------------------------------

def test_parameter_examples():
    p = default_params(1, "monotone")
    assert p.beta == 1 and guarantee_factor(1, p, "monotone") == pytest.approx(4)
    p = default_params(2, "nonneg")
    assert p.p == pytest.approx(1 / 3) and p.beta == pytest.approx(1)
    assert guarantee_factor(2, p, "nonneg") == pytest.approx(9)
    p = default_params(1, "greedy")
    assert p.beta == pytest.approx(math.sqrt(2))
    assert guarantee_factor(1, p, "greedy") == pytest.approx(3 + 2 * math.sqrt(2))


@pytest.mark.parametrize("k", [1, 2, 3, 5, 10, 40])
def test_guarantee_closed_forms(k):
    assert guarantee_factor(k, default_params(k, "monotone"), "monotone") == pytest.approx(
        k + 1 + 2 * math.sqrt(k))
    assert guarantee_factor(k, default_params(k, "nonneg"), "nonneg") == pytest.approx(
        2 * k + math.sqrt(8 * k) + 1)
    g = default_params(k, "greedy")
    assert guarantee_factor(k, g, "rgreedy") == pytest.approx(
        4 * (k * (1 + g.beta) + 1) * (1 + 1 / g.beta))


@pytest.mark.parametrize("k", [1, 2, 4, 9])
def test_default_params_minimize(k):
    grid = np.linspace(0.05, 5, 2000)
    for regime in ("monotone", "greedy"):
        best = guarantee_factor(k, default_params(k, regime), regime)
        assert best <= min(guarantee_factor(k, AlgoParams(b), regime) for b in grid) + 1e-9
    best = guarantee_factor(k, default_params(k, "nonneg"), "nonneg")
    ps = np.linspace(0.01, 0.49, 2000)
    assert best <= min(guarantee_factor(k, AlgoParams((1 - 2 * p) / p, p), "nonneg") for p in ps) + 1e-9


# --- dual certificate ---------------------------------------------------------

def test_dual_certificate_examples():
    og, f = path_instance()
    r = primal_dual_monotone(og, f, 1.0)
    assert verify_dual_feasibility_monotone(r, og, f)
    r.duals.mu -= 1
    assert not verify_dual_feasibility_monotone(r, og, f)
    og0 = OrderedGraph(Graph.empty(0), ())
    f0 = ModularFunction([])
    assert verify_dual_feasibility_monotone(primal_dual_monotone(og0, f0, 1.0), og0, f0)


# --- properties ---------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(runs(), st.floats(0.1, 3.0))
def test_primal_dual_weight_bounds(run, beta):
    og, f = run
    r = primal_dual_monotone(og, f, beta)
    run_checks(r, og)
    d = r.duals
    sw = math.fsum(d.w)
    assert np.all(d.y == (1 + beta) * d.w)
    assert np.all(d.w[[v for v in range(og.n) if v not in r.stack_final]] == 0)
    assert r.value == f.value(r.output)
    assert verify_dual_feasibility_monotone(r, og, f)
    assert r.value >= sw - 1e-9
    assert f.value(r.stack_final) <= (1 + beta) / beta * sw + 1e-9
    opt = brute_opt(og.graph, f)
    assert opt <= f.value(r.stack_final) + og.k * (1 + beta) * sw + 1e-6
    assert opt <= guarantee_factor(og.k, AlgoParams(beta), "monotone") * r.value + 1e-6
    assert r.oracle_calls <= 2 * og.n + 2


@settings(max_examples=80, deadline=None)
@given(runs(), st.floats(0.1, 3.0))
def test_greedy_properties(run, beta):
    og, f = run
    r = preemptive_greedy(og, f, beta, check=True)
    run_checks(r, og)
    evicted = [u for c in r.conflicts.values() for u in c]
    assert len(evicted) == len(set(evicted))
    assert set(evicted) == set(r.conflicts) - set(r.output)
    opt = brute_opt(og.graph, f)
    assert opt <= guarantee_factor(og.k, AlgoParams(beta), "greedy") * r.value + 1e-6
    assert r.oracle_calls <= 2 * og.n + 2
    ins = preemptive_greedy(og, f, beta, incremental="insertion", check=True)
    assert is_independent(og.graph, ins.output)


@settings(max_examples=60, deadline=None)
@given(runs(kinds=("modular", "coverage", "cut")), st.integers(0, 2**32 - 1))
def test_randomized_runs_are_certified(run, seed):
    og, f = run
    nn = default_params(og.k, "nonneg")
    r = primal_dual_nonneg(og, f, nn.beta, nn.p, seed)
    run_checks(r, og)
    assert r.value >= math.fsum(r.duals.w) - 1e-9
    assert f.value(r.stack_final) <= (1 + nn.beta) / nn.beta * math.fsum(r.duals.w) + 1e-9
    assert r.oracle_calls <= 2 * og.n + 2
    g = randomized_preemptive_greedy(og, f, default_params(og.k, "greedy").beta, seed)
    run_checks(g, og)
    assert g.oracle_calls <= 2 * og.n + 2


@settings(max_examples=100, deadline=None)
@given(ordered_graphs(max_n=10), st.lists(st.floats(0, 10), min_size=10, max_size=10))
def test_mwis_duality(og, ws):
    w = np.array(ws[:og.n])
    r = primal_dual_mwis(og, w)
    y = r.duals.y
    run_checks(r, og)
    assert math.fsum(w[list(r.output)]) >= math.fsum(y) * (1 - 1e-12)
    ex = primal_dual_mwis(og, w, exact=True)
    assert sum(Fraction(float(w[v])) for v in ex.output) >= sum(ex.duals.y)
    assert np.allclose(ex.duals.y.astype(float), y, atol=1e-9)
    opt = brute_opt(og.graph, ModularFunction(w))
    assert opt <= og.k * math.fsum(y) + 1e-6
    assert opt <= og.k * r.value + 1e-6
    for v in range(og.n):
        assert y[v] + sum(y[u] for u in og.earlier(v)) >= w[v] - 1e-9


def test_randomized_mean_ratio_small():
    """Sample-mean check on one cut instance (the full suite lives in the acceptance tests)."""
    og = OrderedGraph(Graph.cycle(6), range(6), 2)
    f = make_function(6, "cut", 11)
    opt = brute_opt(og.graph, f)
    nn = default_params(2, "nonneg")
    vals = np.array([primal_dual_nonneg(og, f, nn.beta, nn.p, s).value for s in range(2000)])
    bound = opt / guarantee_factor(2, nn, "nonneg")
    assert vals.mean() >= bound - 4 * vals.std(ddof=1) / math.sqrt(2000)
