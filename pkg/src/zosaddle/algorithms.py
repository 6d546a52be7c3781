"""Iterative saddle-point solvers over a counted zeroth-order oracle.

Five run functions share one instrumented loop: the two-point extra-gradient
method (``zoeg``), its coordinate (``zoceg``) and randomized block-coordinate
(``zobceg``) variants, plain descent-ascent (``zogda``) as a baseline, and a
first-order extra-gradient reference (``fo_eg``) for problems with exact
gradients.  Each iteration records solution quality at the point the theory
averages (the extrapolation midpoint for extra-gradient methods, the new
iterate otherwise), on a diagnostic counter that never touches the
algorithm's own query count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    JointPoint,
    ProductFeasibleSet,
    RadiusSchedule,
    SeededSampler,
    StepSchedule,
    Vector,
    sample_coordinate_subset,
    sample_unit_sphere,
)
from .estimators import _block_estimate
from .metrics import DiagnosticCounter
from .saddle import (
    COUNTING_POLICIES,
    BlackBoxProblem,
    LagrangianOracle,
    OracleError,
    TheoryConstants,
    query_count,
)

ALGORITHMS = ("zoeg", "zoceg", "zobceg", "zogda", "fo_eg")
OUTPUT_MODES = ("averaged", "last", "both")

# A run halts, flagged, once any recorded metric passes this magnitude.
DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class SolverConfig:
    """Everything one solver run depends on besides the problem itself.

    Attributes:
        algorithm: One of ``zoeg``, ``zoceg``, ``zobceg``, ``zogda``,
            ``fo_eg``.
        iterations: Number of iterations, at least one.
        step: Step-size schedule.
        radius: Smoothing-radius schedule (ignored by ``fo_eg``).
        seed: Seed of the run's private sampler stream.
        block_x: Primal block size, ``zobceg`` only.
        block_y: Dual block size, ``zobceg`` only; ignored when the problem
            has no constraints.
        output: Which final iterate downstream reporting should prefer.
        counting: Query-counting policy for the reported totals.
        constants: Optional problem constants; enables the step-size sanity
            warning for the coordinate methods.
        z0: Optional explicit start; when absent, the primal start is drawn
            uniformly from the box and the dual start is zero.
    """

    algorithm: str
    iterations: int
    step: StepSchedule
    radius: RadiusSchedule
    seed: int = 0
    block_x: Optional[int] = None
    block_y: Optional[int] = None
    output: str = "both"
    counting: str = "per_f_eval"
    constants: Optional[TheoryConstants] = None
    z0: Optional[JointPoint] = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}"
            )
        if self.iterations < 1:
            raise ValueError(
                f"iterations must be at least 1, got {self.iterations}: "
                "zero iterations leave the averaged output undefined"
            )
        if self.output not in OUTPUT_MODES:
            raise ValueError(f"unknown output mode {self.output!r}")
        if self.counting not in COUNTING_POLICIES:
            raise ValueError(
                f"unknown counting policy {self.counting!r}; "
                f"expected one of {COUNTING_POLICIES}"
            )
        for name in ("block_x", "block_y"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be positive when given, got {value}")


@dataclass(eq=False)
class RunRecord:
    """Trajectory and outputs of one solver run.

    Per-iteration arrays are aligned: entry ``i`` describes iteration
    ``iterations[i]``, with ``queries[i]`` the cumulative count under the
    configured policy after that iteration and the metric columns evaluated
    at the iterate that iteration contributes to the average.  ``rel_err``
    and ``gap`` are ``None`` when the problem has no known optimum, and
    ``rel_err`` holds absolute errors (flagged) when the optimal value is
    not positive.
    """

    algorithm: str
    config: SolverConfig
    iterations: np.ndarray
    queries: np.ndarray
    rel_err: Optional[np.ndarray]
    violation: np.ndarray
    gap: Optional[np.ndarray]
    averaged: JointPoint
    last: JointPoint
    diverged: bool
    warnings: list
    rel_err_is_absolute: bool
    per_f_eval_total: int
    per_component_total: int
    diagnostic_queries: int
    duration: float


class _Run:
    """Mutable state shared by the per-algorithm step loops."""

    def __init__(
        self, problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
    ) -> None:
        if problem.d_x != feasible.d_x or problem.d_y != feasible.d_y:
            raise ValueError(
                f"problem of shape ({problem.d_x}, {problem.d_y}) vs feasible set "
                f"({feasible.d_x}, {feasible.d_y})"
            )
        self.problem = problem
        self.feasible = feasible
        self.config = config
        self.oracle = LagrangianOracle(problem, counting=config.counting)
        self.sampler = SeededSampler(config.seed)
        self.diag = DiagnosticCounter()
        self.lo_x = feasible.primal.lower
        self.hi_x = feasible.primal.upper
        self.lo_y = feasible.dual.lower
        self.hi_y = feasible.dual.upper
        if config.z0 is not None:
            if config.z0.d_x != problem.d_x or config.z0.d_y != problem.d_y:
                raise ValueError("explicit start point has wrong dimensions")
            self.x = np.clip(config.z0.x, self.lo_x, self.hi_x)
            self.y = np.clip(config.z0.y, self.lo_y, self.hi_y)
        else:
            self.x = feasible.primal.sample_uniform(self.sampler)
            self.y = np.zeros(problem.d_y)

        k_total = config.iterations
        self.row_iter = np.arange(k_total, dtype=np.int64)
        self.row_queries = np.zeros(k_total, dtype=np.int64)
        self.row_violation = np.zeros(k_total)
        optimum = problem.optimum
        self.row_rel = np.zeros(k_total) if optimum is not None else None
        self.row_gap = np.zeros(k_total) if optimum is not None else None
        self.rel_is_absolute = optimum is not None and optimum.value <= 0.0
        if optimum is not None:
            phi0_star, phi_star = problem.components_at(optimum.x)
            self.diag.charge(1)
            self._phi0_star = phi0_star
            self._phi_star = phi_star
            self._y_star = optimum.y
        self.sum_x = np.zeros(problem.d_x)
        self.sum_y = np.zeros(problem.d_y)
        self.recorded = 0
        self.diverged = False
        self.warnings: list = []
        if (
            config.constants is not None
            and config.algorithm in ("zoceg", "zobceg")
            and config.step.kind == "constant"
        ):
            product = config.step.eta0 * config.constants.smoothness
            if product > 0.5:
                self.warnings.append(
                    f"constant step {config.step.eta0} gives eta*L = {product:.4g} "
                    "> 1/2; the coordinate-method guarantee does not apply"
                )

    def record(self, x_point: Vector, y_point: Vector) -> bool:
        """Store metrics at the iterate of this iteration; True to halt."""
        problem = self.problem
        i = self.recorded
        self.sum_x += x_point
        self.sum_y += y_point
        self.row_queries[i] = query_count(self.oracle)

        phi0_v = float(problem.objective(x_point))
        if problem.d_y:
            phi_v = np.asarray(problem.constraints(x_point), dtype=np.float64)
            violation = float(np.linalg.norm(np.maximum(phi_v, 0.0)))
        else:
            phi_v = None
            violation = 0.0
        self.diag.charge(2)
        self.row_violation[i] = violation
        halt = not (violation <= DIVERGENCE_LIMIT)

        if self.row_rel is not None:
            optimum = self.problem.optimum
            if optimum.value > 0.0:
                rel = abs(phi0_v - optimum.value) / optimum.value
            else:
                rel = abs(phi0_v - optimum.value)
            self.row_rel[i] = rel
            halt = halt or not (rel <= DIVERGENCE_LIMIT)
            left = phi0_v + float(self._y_star @ phi_v) if problem.d_y else phi0_v
            right = (
                self._phi0_star + float(y_point @ self._phi_star)
                if problem.d_y
                else self._phi0_star
            )
            gap = left - right
            self.row_gap[i] = gap
            halt = halt or not (abs(gap) <= DIVERGENCE_LIMIT)
        self.recorded += 1
        if halt:
            self.diverged = True
            self.warnings.append(
                f"divergence guard tripped at iteration {int(self.row_iter[i])}; "
                "trajectory truncated"
            )
        return halt

    def finish(self, started: float) -> RunRecord:
        n = self.recorded
        averaged = JointPoint(x=self.sum_x / n, y=self.sum_y / n)
        return RunRecord(
            algorithm=self.config.algorithm,
            config=self.config,
            iterations=self.row_iter[:n],
            queries=self.row_queries[:n],
            rel_err=None if self.row_rel is None else self.row_rel[:n],
            violation=self.row_violation[:n],
            gap=None if self.row_gap is None else self.row_gap[:n],
            averaged=averaged,
            last=JointPoint(x=self.x.copy(), y=self.y.copy()),
            diverged=self.diverged,
            warnings=self.warnings,
            rel_err_is_absolute=self.rel_is_absolute,
            per_f_eval_total=self.oracle.per_f_eval_count,
            per_component_total=self.oracle.per_component_count,
            diagnostic_queries=self.diag.count,
            duration=time.perf_counter() - started,
        )


def _sphere_estimate(
    run: _Run, x: Vector, y: Vector, r: float, v: Vector
) -> tuple[Vector, Vector]:
    """Two-point operator estimate split into (descent-in-x, ascent-in-y)."""
    d_x = run.problem.d_x
    d = d_x + run.problem.d_y
    v_x = v[:d_x]
    v_y = v[d_x:]
    base = run.oracle.value(x, y)
    shifted = run.oracle.value(x + r * v_x, y + r * v_y)
    scale = (shifted - base) * d / r
    return scale * v_x, scale * v_y


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _loop(run: _Run, step_fn) -> RunRecord:
    started = time.perf_counter()
    for k in range(run.config.iterations):
        eta = run.config.step.value(k)
        r = run.config.radius.value(k)
        try:
            x_rec, y_rec = step_fn(run, k, eta, r)
        except OracleError as err:
            err.iteration = k
            raise
        if run.record(x_rec, y_rec):
            break
    return run.finish(started)


def _zoeg_step(run: _Run, k: int, eta: float, r: float) -> tuple[Vector, Vector]:
    d = run.problem.d_x + run.problem.d_y
    v = sample_unit_sphere(d, run.sampler)
    w = sample_unit_sphere(d, run.sampler)
    g_x, g_y = _sphere_estimate(run, run.x, run.y, r, v)
    x_plus = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
    y_plus = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
    g_x, g_y = _sphere_estimate(run, x_plus, y_plus, r, w)
    run.x = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
    run.y = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
    return x_plus, y_plus


def _zogda_step(run: _Run, k: int, eta: float, r: float) -> tuple[Vector, Vector]:
    d = run.problem.d_x + run.problem.d_y
    v = sample_unit_sphere(d, run.sampler)
    g_x, g_y = _sphere_estimate(run, run.x, run.y, r, v)
    run.x = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
    run.y = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
    return run.x, run.y


def _make_block_step(tau_x: Optional[int], tau_y: Optional[int]):
    """Coordinate extra-gradient step; full blocks when sizes are None."""

    def step(run: _Run, k: int, eta: float, r: float) -> tuple[Vector, Vector]:
        d_x, d_y = run.problem.d_x, run.problem.d_y
        if tau_x is None:
            idx_x = np.arange(d_x, dtype=np.int64)
            idx_y = np.arange(d_y, dtype=np.int64)
        else:
            idx_x = sample_coordinate_subset(d_x, tau_x, run.sampler)
            idx_y = (
                sample_coordinate_subset(d_y, tau_y, run.sampler)
                if d_y
                else np.zeros(0, dtype=np.int64)
            )
        g_x, g_y = _block_estimate(run.oracle, run.x, run.y, idx_x, idx_y, r)
        x_plus = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
        y_plus = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
        if tau_x is None:
            jdx_x, jdx_y = idx_x, idx_y
        else:
            jdx_x = sample_coordinate_subset(d_x, tau_x, run.sampler)
            jdx_y = (
                sample_coordinate_subset(d_y, tau_y, run.sampler)
                if d_y
                else np.zeros(0, dtype=np.int64)
            )
        g_x, g_y = _block_estimate(run.oracle, x_plus, y_plus, jdx_x, jdx_y, r)
        run.x = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
        run.y = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
        return x_plus, y_plus

    return step


def _exact_operator(problem: BlackBoxProblem, x: Vector, y: Vector) -> tuple[Vector, Vector]:
    grad_x = np.asarray(problem.objective_grad(x), dtype=np.float64)
    if problem.d_y:
        jac = np.asarray(problem.constraints_jac(x), dtype=np.float64)
        phi = np.asarray(problem.constraints(x), dtype=np.float64)
        return grad_x + jac.T @ y, phi
    return grad_x, np.zeros(0)


def _fo_eg_step(run: _Run, k: int, eta: float, r: float) -> tuple[Vector, Vector]:
    g_x, g_y = _exact_operator(run.problem, run.x, run.y)
    x_plus = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
    y_plus = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
    g_x, g_y = _exact_operator(run.problem, x_plus, y_plus)
    run.x = np.clip(run.x - eta * g_x, run.lo_x, run.hi_x)
    run.y = np.clip(run.y + eta * g_y, run.lo_y, run.hi_y)
    return x_plus, y_plus


def run_zoeg(
    problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
) -> RunRecord:
    """Extra-gradient with two-point sphere estimates at both half-steps.

    Each iteration draws two independent sphere directions, estimates the
    operator at the current point, steps to the projected midpoint, then
    re-estimates there to take the real step from the anchor.  Four queries
    per iteration.
    """
    _require(config.algorithm == "zoeg", f"config is for {config.algorithm!r}")
    return _loop(_Run(problem, feasible, config), _zoeg_step)


def run_zoceg(
    problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
) -> RunRecord:
    """Extra-gradient with full coordinate estimates; deterministic.

    Both half-steps estimate every partial derivative by forward differences
    with a shared base value: ``2 (d_x + d_y + 1)`` queries per iteration.
    """
    _require(config.algorithm == "zoceg", f"config is for {config.algorithm!r}")
    return _loop(_Run(problem, feasible, config), _make_block_step(None, None))


def run_zobceg(
    problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
) -> RunRecord:
    """Extra-gradient over uniformly sampled coordinate blocks.

    Fresh index sets are drawn for each half-step; only selected coordinates
    move (box projection is separable, so clamping the full vector updates
    exactly the block).  ``2 (block_x + block_y + 1)`` queries per iteration.
    With full blocks the subset sampler is bypassed and iterates coincide
    with the coordinate method draw for draw.
    """
    _require(config.algorithm == "zobceg", f"config is for {config.algorithm!r}")
    run = _Run(problem, feasible, config)
    d_x, d_y = problem.d_x, problem.d_y
    tau_x = config.block_x
    _require(tau_x is not None, "zobceg requires block_x")
    _require(1 <= tau_x <= d_x, f"block_x must lie in [1, {d_x}], got {tau_x}")
    if d_y:
        tau_y = config.block_y
        _require(tau_y is not None, "zobceg requires block_y on constrained problems")
        _require(1 <= tau_y <= d_y, f"block_y must lie in [1, {d_y}], got {tau_y}")
    else:
        tau_y = 0
    return _loop(run, _make_block_step(tau_x, tau_y))


def run_zogda(
    problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
) -> RunRecord:
    """Plain descent-ascent with a single two-point estimate per iteration."""
    _require(config.algorithm == "zogda", f"config is for {config.algorithm!r}")
    return _loop(_Run(problem, feasible, config), _zogda_step)


def run_fo_eg(
    problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
) -> RunRecord:
    """Textbook extra-gradient with the exact operator; zero oracle queries."""
    _require(config.algorithm == "fo_eg", f"config is for {config.algorithm!r}")
    if not problem.has_exact_gradients:
        raise ValueError("first-order reference needs exact gradients on the problem")
    return _loop(_Run(problem, feasible, config), _fo_eg_step)


_RUNNERS = {
    "zoeg": run_zoeg,
    "zoceg": run_zoceg,
    "zobceg": run_zobceg,
    "zogda": run_zogda,
    "fo_eg": run_fo_eg,
}


def run(
    problem: BlackBoxProblem, feasible: ProductFeasibleSet, config: SolverConfig
) -> RunRecord:
    """Dispatch to the run function named by ``config.algorithm``."""
    return _RUNNERS[config.algorithm](problem, feasible, config)
