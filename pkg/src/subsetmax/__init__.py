"""Submodular maximization over independent sets of inductively k-independent
and k-perfectly orientable graphs."""

from .algorithms import (AlgoParams, DualCertificate, RunResult, default_params,
                         guarantee_factor, preemptive_greedy, primal_dual_monotone,
                         primal_dual_mwis, primal_dual_nonneg, randomized_preemptive_greedy,
                         verify_dual_feasibility_monotone)
from .bruteforce import BruteForceResult, brute_force_opt, enumerate_independent_sets
from .graph import (Graph, OrderedGraph, OrientedGraph, ResourceGuardError, alpha_exact,
                    backward_neighbors, degeneracy_ordering, forward_neighbors, is_independent,
                    verify_inductive_k_independence, verify_k_perfect_orientation)
from .instances import (Instance, attach_function, gen_degenerate, gen_interval_graph,
                        gen_line_graph_matching, gen_oriented_cycle, read_instance,
                        write_instance)
from .relaxation import (PackingPolytope, build_polytope, continuous_greedy, crs_deterministic,
                         crs_randomized, linear_maximize, measured_continuous_greedy,
                         membership, round_pipeline)
from .submodular import (CountingOracle, CoverageFunction, CutFunction, ModularFunction,
                         SubmodularOracle, incremental_value, is_submodular_brute, marginal,
                         multilinear_estimate, multilinear_exact)

__version__ = "0.1.0"
