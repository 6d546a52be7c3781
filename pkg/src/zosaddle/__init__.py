"""Zeroth-order saddle-point solvers for box-constrained convex programs.

The package solves ``min phi0(x) s.t. phi(x) <= 0`` through the Lagrangian
saddle problem on a product of boxes, using only function evaluations.  It
ships extra-gradient solvers with sphere and coordinate gradient estimators,
a descent-ascent and a first-order baseline, benchmark problems with a
KKT-verified reference solver, and a reproducible multi-seed experiment
harness with oracle-complexity reporting.
"""

from .acceptance import CRITERIA, SUITES, CriterionResult, run_suite
from .algorithms import (
    ALGORITHMS,
    RunRecord,
    SolverConfig,
    run,
    run_fo_eg,
    run_zobceg,
    run_zoceg,
    run_zoeg,
    run_zogda,
)
from .core import (
    BoxSet,
    JointPoint,
    ProductFeasibleSet,
    RadiusSchedule,
    SeededSampler,
    StepSchedule,
    project_box,
    project_product,
    sample_coordinate_subset,
    sample_unit_sphere,
)
from .estimators import EstimateReport, block_coord, coord_full, coord_partial, unige, unige_operator
from .harness import (
    ExperimentConfig,
    ProblemSpec,
    build_problem,
    parse_config,
    run_acceptance_suite,
    run_experiment,
)
from .metrics import (
    AggregateSummary,
    MetricRow,
    aggregate,
    constraint_violation,
    duality_gap,
    objective_error,
    queries_to_target,
    write_csv,
)
from .problems import (
    LoadTrackingInstance,
    NonconvexSmokeInstance,
    ToyQPInstance,
    build_dual_box,
    compute_theory_constants,
    generate_load_tracking,
    load_instance,
    make_toy_qp,
    reference_solve_load_tracking,
    save_instance,
)
from .saddle import (
    BlackBoxProblem,
    LagrangianOracle,
    OracleError,
    SaddlePoint,
    TheoryConstants,
    eval_lagrangian,
    eval_operator_exact,
    query_count,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "CRITERIA",
    "SUITES",
    "AggregateSummary",
    "BlackBoxProblem",
    "BoxSet",
    "CriterionResult",
    "EstimateReport",
    "ExperimentConfig",
    "JointPoint",
    "LagrangianOracle",
    "LoadTrackingInstance",
    "MetricRow",
    "NonconvexSmokeInstance",
    "OracleError",
    "ProblemSpec",
    "ProductFeasibleSet",
    "RadiusSchedule",
    "RunRecord",
    "SaddlePoint",
    "SeededSampler",
    "SolverConfig",
    "StepSchedule",
    "TheoryConstants",
    "ToyQPInstance",
    "aggregate",
    "block_coord",
    "build_dual_box",
    "build_problem",
    "compute_theory_constants",
    "constraint_violation",
    "coord_full",
    "coord_partial",
    "duality_gap",
    "eval_lagrangian",
    "eval_operator_exact",
    "generate_load_tracking",
    "load_instance",
    "make_toy_qp",
    "objective_error",
    "parse_config",
    "project_box",
    "project_product",
    "queries_to_target",
    "query_count",
    "reference_solve_load_tracking",
    "run",
    "run_acceptance_suite",
    "run_experiment",
    "run_suite",
    "run_fo_eg",
    "run_zobceg",
    "run_zoceg",
    "run_zoeg",
    "run_zogda",
    "sample_coordinate_subset",
    "sample_unit_sphere",
    "save_instance",
    "unige",
    "unige_operator",
    "write_csv",
]
