"""dsmin: minimisation of differences of lattice submodular functions.

The objective v(x) = f(x) - g(x) with both parts submodular on
prod_i {0..k_i-1} is driven to a certified local minimum by
majorisation-minimisation: g is replaced by a separable lower bound tight
at the current iterate (subsup), f by a separable upper bound (supsub), or
both (modmod).  Everything needed to state and verify those steps lives
here: structural checkers, the greedy-evaluated extension, decompositions,
exact and approximate subproblem solvers, and brute-force oracles.
"""

from .lattice import (
    CHECK_TOL,
    DEFAULT_CAP,
    CapExceededError,
    DomainError,
    LatticeDomain,
    OracleFunction,
    SeparableFunction,
    TableFunction,
    Verdict,
    Witness,
    check_dr,
    check_monotone,
    check_submodular,
    constant_function,
    second_difference_cross,
    second_difference_within,
    table_of,
)
from .extension import (
    Chain,
    Profile,
    adjacent_chain_family,
    base_vertex_check,
    chain_containing,
    chain_lower_bound,
    greedy_extension,
    level_at,
    profile_from_point,
)
from .bounds import (
    UB_VARIANTS,
    DrDecomposition,
    dr_split,
    dr_upper_bound,
    dr_violation,
    dr_violation_quadratic,
    separable_upper_bound,
)
from .decompose import (
    AdditiveBounds,
    DsConstructionError,
    DsProblem,
    MonotoneDecomposition,
    additive_lower_bounds,
    ds_construct,
    harmonic_decomposition,
    min_marginal_decomposition,
    monotone_form,
    monotone_submodular_split,
    reference_quadratic,
    second_difference_extremes,
)
from .solvers import (
    SfmResult,
    SubgradientOptions,
    brute_force_minimize,
    double_greedy_maximize,
    minimize_separable,
    minimize_separable_cardinality,
    minimize_submodular,
    pav_nonincreasing,
    project_profile,
)
from .algorithms import (
    Certificate,
    IterateRecord,
    PredictedBound,
    SolveOptions,
    SolveReport,
    accept_step,
    certify_local_minimum,
    modmod,
    predicted_iteration_bound,
    solve,
    subsup,
    supsub,
)
from .problems import (
    ProblemFormatError,
    ProblemValidationError,
    build_function,
    build_problem,
    generate_ensemble,
    parse_problem,
    summary_row,
    trace_records,
    write_problem,
    write_summary,
    write_trace,
)

__version__ = "0.1.0"
