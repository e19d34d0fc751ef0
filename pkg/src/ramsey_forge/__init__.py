"""Finite-window Ramsey combinatorics.

Windowed colorings with exact homogeneous-set search, the bounded-instance
encoder, the transitive-subtournament extraction pipeline, extremal graph
gadgets with desk-scale off-diagonal Ramsey search, and a finite simulator
of a priority tree construction over enumeration machines.
"""

from .budget import Budget
from .colorings import (
    ApproxFunction,
    Coloring,
    OrdinalCNF,
    StabilityReport,
    canon_set,
    embed_constant_tail,
    find_homogeneous,
    is_bounded_instance,
    limit_coloring,
    natural_sum,
    rank_of,
    stability_threshold,
)
from .diag import (
    BuildCaps,
    Convergence,
    Divergence,
    EmptyReservoir,
    EnumMachine,
    EvenStage,
    FCondition,
    OddStage,
    Tree,
    WitnessGraph,
    build_tree,
    check_convergence_chain,
    check_tree_invariants,
    color_merge,
    condition_extends,
    extend_gamma,
    fblock_decode,
    fblock_encode,
    run_stage_schedule,
    trace_path,
    validate_condition,
)
from .em import brt22_solve, chain_rank, is_transitive, max_transitive_subset, rt1_to_em
from .encoder import approx_to_stable_pairs, check_quasi_cohesive, coh_family, encode_stable
from .errors import (
    BoundViolationError,
    BudgetExceededError,
    CapExceededError,
    FrontierError,
    InputError,
    PreconditionError,
    RamseyForgeError,
    WindowTooSmallError,
)
from .gadgets import (
    Digraph,
    Graph,
    StagedPairInstance,
    chromatic_number,
    find_transitive_triangle,
    find_triangle,
    gk_family,
    instance_from_digraph,
    lift_to_triples,
    max_independent,
    mycielskian,
    orient_acyclically,
    paper_digraph_3,
    paper_digraph_8,
    preservation_budget,
    search_triangle_free,
)

__version__ = "0.1.0"
