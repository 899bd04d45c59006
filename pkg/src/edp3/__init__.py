"""Linear-time three edge-disjoint paths in Eulerian multigraphs."""
from .dynreach import DynReach, dyn_move, dyn_new, dyn_query
from .flow import BalancedArcSet, augment, bounded_max_flow, decompose, maximal_min_cut
from .gen import GenConfig, bench_config, gen_instance
from .graph import (
    DemandPair, GraphError, Instance, MultiGraph, NotEulerianError, PathSeq, Solution,
    Witness, cut_edges, demand_crossing, is_eulerian, odd_nodes, verify_solution,
)
from .io import parse_instance, read_instance, render_instance, render_solution, render_witness
from .oracle import brute_force_solve, cut_condition_check
from .solver import (
    CriticalCut, CriticalCutError, MoveTrace, Signature, SolveStats, check_feasible,
    find_critical_cut, find_critical_index, is_feasible, signatures, solve, solve_critical,
    solve_quadratic, solve_two_pairs,
)
