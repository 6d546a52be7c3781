"""Executable acceptance checks for the whole library.

Each criterion is a self-contained function returning a
:class:`CriterionResult` with one measured-versus-required line per
assertion.  The suites group them the way the CLI exposes them: estimator
moment checks, convergence-bound checks on the one-variable program,
the benchmark complexity table, algorithm reductions, rate decay,
query accounting, end-to-end determinism, a nonconvex smoke run, and the
reference-solver audit.  Every check is deterministic: all randomness is
seeded, so a pass is reproducible.
"""

from __future__ import annotations

import filecmp
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algorithms import SolverConfig, run, run_fo_eg, run_zobceg, run_zoceg, run_zoeg, run_zogda
from .core import JointPoint, RadiusSchedule, SeededSampler, StepSchedule, sample_unit_sphere
from .estimators import coord_partial, unige
from .harness import ProblemSpec, build_problem, parse_config, run_experiment
from .metrics import constraint_violation, duality_gap, queries_to_target
from .problems import (
    compute_theory_constants,
    generate_load_tracking,
    make_toy_qp,
    reference_solve_load_tracking,
)

# Reference query budgets for the standard 100-device curtailment benchmark
# (20 seeds, per-evaluation counting, tuned constant steps).  Mean
# queries-to-target must land within BUDGET_FACTOR of these frozen costs,
# and the 5% column must keep its ordering: the full coordinate method
# cheapest, single-coordinate blocks dearest.
BENCHMARK_REFERENCE = {
    "coord_full": {0.05: 581.4, 0.01: 1458.6, 0.001: 2723.4},
    "block5": {0.05: 905.8, 0.01: 1479.1},
    "block1": {0.05: 2460.6, 0.01: 4247.1},
}
BUDGET_FACTOR = 3.0

# Constant steps found by pilot grid search on the benchmark instance; the
# full-coordinate step keeps eta * L <= 1/2 (L is about 12 there).
BENCHMARK_STEPS = {"coord_full": 0.04, "block5": 0.15, "block1": 0.3}


@dataclass
class CriterionResult:
    """Outcome of one acceptance criterion."""

    name: str
    passed: bool
    detail: str
    lines: list = field(default_factory=list)


def _finish(name: str, checks: list) -> CriterionResult:
    """Fold (description, ok) pairs into a result."""
    passed = all(ok for _, ok in checks)
    lines = [f"{'ok ' if ok else 'BAD'} {text}" for text, ok in checks]
    failed = sum(1 for _, ok in checks if not ok)
    detail = (
        f"{len(checks)} checks passed"
        if passed
        else f"{failed} of {len(checks)} checks failed"
    )
    return CriterionResult(name=name, passed=passed, detail=detail, lines=lines)


def _toy_setup():
    instance = make_toy_qp()
    problem = instance.to_blackbox()
    feasible = instance.feasible_set()
    radius = RadiusSchedule(c=1.0, p=1.1, cap=1e-3)
    constants = compute_theory_constants(instance, feasible, radius)
    return instance, problem, feasible, radius, constants


def benchmark_complexity() -> CriterionResult:
    """Mean queries-to-target on the curtailment benchmark versus budget."""
    problem, feasible, _ = build_problem(ProblemSpec(kind="load_tracking", seed=0, size=100))
    radius = RadiusSchedule(c=5.0, p=1.1, cap=1e-3)
    thresholds = [0.05, 0.01, 0.001]
    settings = {
        "coord_full": dict(algorithm="zoceg", iterations=200),
        "block5": dict(algorithm="zobceg", iterations=2000, block_x=5, block_y=1),
        "block1": dict(algorithm="zobceg", iterations=5000, block_x=1, block_y=1),
    }
    means: dict = {}
    checks: list = []
    for label, kwargs in settings.items():
        step = StepSchedule(kind="constant", eta0=BENCHMARK_STEPS[label])
        per_target: dict = {t: [] for t in thresholds}
        for seed in range(20):
            config = SolverConfig(step=step, radius=radius, seed=seed, **kwargs)
            record = run(problem, feasible, config)
            for t, q in zip(thresholds, queries_to_target(record, thresholds, "rel_err")):
                if q is not None:
                    per_target[t].append(q)
        means[label] = {}
        for t in thresholds:
            reached = per_target[t]
            means[label][t] = float(np.mean(reached)) if reached else np.inf
            if t in BENCHMARK_REFERENCE[label]:
                checks.append(
                    (
                        f"{label} reached {t:g} target in all seeds "
                        f"({len(reached)}/20)",
                        len(reached) == 20,
                    )
                )
    for label, budgets in BENCHMARK_REFERENCE.items():
        for t, reference in budgets.items():
            if t == 0.05:
                continue
            measured = means[label][t]
            limit = BUDGET_FACTOR * reference
            checks.append(
                (
                    f"{label} mean queries to {t:g}: {measured:.1f} <= {limit:.1f} "
                    f"({BUDGET_FACTOR:g} x {reference})",
                    measured <= limit,
                )
            )
    a, b, c = (means[l][0.05] for l in ("coord_full", "block5", "block1"))
    checks.append(
        (
            f"5% ordering coord_full {a:.1f} < block5 {b:.1f} < block1 {c:.1f}",
            a < b < c,
        )
    )
    return _finish("benchmark_complexity", checks)


def gap_bound_averaged() -> CriterionResult:
    """Duality gap of the averaged iterate against its guarantee.

    The coordinate extra-gradient method with constant step eta satisfying
    eta * L <= 1/2 guarantees
    ``gap <= (D^2 / eta + 3 L M3 D) / (2 K)`` where D is the product-set
    diameter and M3 the dimension-scaled radius sum.  Zero tolerance: the
    bound is proved, not fitted.
    """
    _, problem, feasible, radius, constants = _toy_setup()
    eta = 0.2
    checks: list = [
        (
            f"step condition eta*L = {eta * constants.smoothness:.4f} <= 0.5",
            eta * constants.smoothness <= 0.5,
        )
    ]
    for iterations in (10, 100, 1000):
        config = SolverConfig(
            algorithm="zoceg",
            iterations=iterations,
            step=StepSchedule(kind="constant", eta0=eta),
            radius=radius,
            seed=0,
            constants=constants,
        )
        record = run_zoceg(problem, feasible, config)
        gap = duality_gap(record.averaged, problem)
        bound = (
            constants.diameter**2 / eta
            + 3.0 * constants.smoothness * constants.scaled_radius_sum * constants.diameter
        ) / (2.0 * iterations)
        checks.append(
            (f"K={iterations}: gap {gap:.4e} <= bound {bound:.4e}", gap <= bound)
        )
    return _finish("gap_bound_averaged", checks)


def feasibility_bound_averaged() -> CriterionResult:
    """Constraint violation and objective gap of the averaged primal iterate.

    Both ``|[phi(x)]_+|`` and ``phi0(x) - phi0*`` obey
    ``D^2 / (2 K eta) + 3 L M3 D / (2 K)``; the objective gap is signed (a
    slightly infeasible average can undershoot) and still bounded above.
    """
    instance, problem, feasible, radius, constants = _toy_setup()
    eta = 0.2
    checks: list = []
    for iterations in (100, 1000):
        config = SolverConfig(
            algorithm="zoceg",
            iterations=iterations,
            step=StepSchedule(kind="constant", eta0=eta),
            radius=radius,
            seed=0,
            constants=constants,
        )
        record = run_zoceg(problem, feasible, config)
        bound = constants.diameter**2 / (2.0 * iterations * eta) + (
            3.0 * constants.smoothness * constants.scaled_radius_sum * constants.diameter
        ) / (2.0 * iterations)
        violation = constraint_violation(record.averaged.x, problem)
        objective_gap = problem.objective(record.averaged.x) - instance.optimal_value
        checks.append(
            (
                f"K={iterations}: violation {violation:.4e} <= bound {bound:.4e}",
                violation <= bound,
            )
        )
        checks.append(
            (
                f"K={iterations}: objective gap {objective_gap:.4e} <= bound {bound:.4e}",
                objective_gap <= bound,
            )
        )
    return _finish("feasibility_bound_averaged", checks)


def coordinate_bias() -> CriterionResult:
    """Forward-difference bias on a diagonal quadratic, closed form.

    For ``h(z) = z'Az + b'z`` with diagonal A the forward difference along
    coordinate i overshoots the true partial by exactly ``r * A_ii``, which
    sits under the smooth-function ceiling ``L r / 2`` with ``L = 2
    max|A_ii|``; the ceiling is attained in the stiffest coordinate.
    """
    diag = np.array([1.5, -0.5, 3.0])
    offset = np.array([1.0, -2.0, 0.5])
    smoothness = 2.0 * float(np.max(np.abs(diag)))

    def h(z):
        return float(z @ (diag * z) + offset @ z)

    points = [np.zeros(3), np.array([0.3, -1.2, 0.7])]
    checks: list = []
    for z in points:
        for r in (1e-1, 1e-3, 1e-6):
            for i in range(3):
                measured = coord_partial(h, z, i, r)
                true = 2.0 * diag[i] * z[i] + offset[i]
                bias = abs(measured - true)
                expected = r * abs(diag[i])
                # Forward differencing cancels |h|-sized terms, so allow
                # rounding noise of that scale relative to r.
                tol = 64.0 * np.finfo(float).eps * (max(abs(h(z)), 1.0) / r + abs(true))
                checks.append(
                    (
                        f"z{'0' if not z.any() else '1'} r={r:g} i={i}: "
                        f"|bias - {expected:.3e}| = {abs(bias - expected):.1e} <= {tol:.1e}",
                        abs(bias - expected) <= tol,
                    )
                )
                ceiling = smoothness * r / 2.0
                checks.append(
                    (
                        f"z{'0' if not z.any() else '1'} r={r:g} i={i}: "
                        f"bias {bias:.3e} <= L r / 2 = {ceiling:.3e}",
                        bias <= ceiling + tol,
                    )
                )
                if i == 2:
                    checks.append(
                        (
                            f"equality in stiffest coordinate at r={r:g}: "
                            f"|bias - L r / 2| = {abs(bias - ceiling):.1e}",
                            abs(bias - ceiling) <= tol,
                        )
                    )
    return _finish("coordinate_bias", checks)


def sphere_estimator_moments() -> CriterionResult:
    """Mean and variance of the two-point sphere estimator.

    On ``h(z) = |z|^2 / 2`` the gradient is ``z`` and the smoothed gradient
    stays within ``L r`` of it, so the empirical mean over many draws must
    land within ``L r`` plus four standard errors of the true gradient; the
    empirical second moment must sit strictly below
    ``9 d^2 G^2 / (d + 2) + 3 d^2 L^2 r^2 / 4`` with G the gradient ceiling
    over the probed ball.
    """
    draws = 100_000
    r = 1e-3
    smoothness = 1.0

    def h(z):
        return 0.5 * float(z @ z)

    checks: list = []
    for dim in (2, 10, 50):
        center = np.full(dim, 1.5 / np.sqrt(dim))
        gradient = center
        ceiling = smoothness * (float(np.linalg.norm(center)) + r)
        sampler = SeededSampler(dim)
        estimates = np.empty((draws, dim))
        for i in range(draws):
            v = sample_unit_sphere(dim, sampler)
            estimates[i] = unige(h, center, r, v)
        mean = estimates.mean(axis=0)
        variance = float(np.mean(np.sum((estimates - mean) ** 2, axis=1)))
        stderr = np.sqrt(variance / draws)
        mean_err = float(np.linalg.norm(mean - gradient))
        mean_tol = smoothness * r + 4.0 * stderr
        var_bound = 9.0 * dim**2 * ceiling**2 / (dim + 2.0) + 3.0 * dim**2 * smoothness**2 * r**2 / 4.0
        checks.append(
            (
                f"d={dim}: |mean - grad| {mean_err:.4e} <= Lr + 4se = {mean_tol:.4e}",
                mean_err <= mean_tol,
            )
        )
        checks.append(
            (
                f"d={dim}: variance {variance:.4e} < bound {var_bound:.4e}",
                variance < var_bound,
            )
        )
    return _finish("sphere_estimator_moments", checks)


def reductions() -> CriterionResult:
    """Full-block equivalence and the vanishing-radius limit."""
    checks: list = []

    _, problem, feasible, radius, _ = _toy_setup()
    step = StepSchedule(kind="constant", eta0=0.2)
    full = SolverConfig(
        algorithm="zobceg", iterations=60, step=step, radius=radius, seed=3,
        block_x=1, block_y=1,
    )
    coord = SolverConfig(algorithm="zoceg", iterations=60, step=step, radius=radius, seed=3)
    rec_full = run_zobceg(problem, feasible, full)
    rec_coord = run_zoceg(problem, feasible, coord)
    worst = max(
        float(np.max(np.abs(rec_full.violation - rec_coord.violation))),
        float(np.max(np.abs(rec_full.rel_err - rec_coord.rel_err))),
        float(np.max(np.abs(rec_full.averaged.as_array() - rec_coord.averaged.as_array()))),
        float(np.max(np.abs(rec_full.last.as_array() - rec_coord.last.as_array()))),
    )
    checks.append((f"full-block blocks == coordinate method: max diff {worst:.2e} <= 1e-12", worst <= 1e-12))

    from .problems import NonconvexSmokeInstance

    smoke = NonconvexSmokeInstance()
    sp, sf = smoke.to_blackbox(), smoke.feasible_set()
    sstep = StepSchedule(kind="constant", eta0=0.05)
    rec_bf = run_zobceg(sp, sf, SolverConfig(
        algorithm="zobceg", iterations=40, step=sstep, radius=radius, seed=9,
        block_x=10, block_y=1,
    ))
    rec_cf = run_zoceg(sp, sf, SolverConfig(
        algorithm="zoceg", iterations=40, step=sstep, radius=radius, seed=9,
    ))
    worst10 = max(
        float(np.max(np.abs(rec_bf.violation - rec_cf.violation))),
        float(np.max(np.abs(rec_bf.last.as_array() - rec_cf.last.as_array()))),
    )
    checks.append((f"10-dim full-block reduction: max diff {worst10:.2e} <= 1e-12", worst10 <= 1e-12))

    tiny = RadiusSchedule(c=1.0, p=1.1, cap=1e-8)
    rec_zo = run_zoceg(problem, feasible, SolverConfig(
        algorithm="zoceg", iterations=100, step=step, radius=tiny, seed=5,
    ))
    rec_fo = run_fo_eg(problem, feasible, SolverConfig(
        algorithm="fo_eg", iterations=100, step=step, radius=tiny, seed=5,
    ))
    drift = max(
        float(np.max(np.abs(rec_zo.last.as_array() - rec_fo.last.as_array()))),
        float(np.max(np.abs(rec_zo.averaged.as_array() - rec_fo.averaged.as_array()))),
    )
    checks.append((f"radius 1e-8 vs exact gradients after 100 iterations: {drift:.2e} <= 1e-5", drift <= 1e-5))
    return _finish("reductions", checks)


def sphere_rate_decay() -> CriterionResult:
    """Gap decay under the inverse-sqrt step scaling.

    With the step ``eta = D / (6 sqrt(6 d K) G)`` the averaged-iterate gap
    should shrink like 1 / sqrt(K); quadrupling K must at least drop the
    20-seed mean gap to 0.6 of its value (0.5 expected).
    """
    _, problem, feasible, radius, constants = _toy_setup()
    dim = problem.d_x + problem.d_y
    means = {}
    for iterations in (10_000, 40_000):
        eta = constants.diameter / (
            6.0 * np.sqrt(6.0 * dim * iterations) * constants.gradient_bound
        )
        gaps = []
        for seed in range(20):
            config = SolverConfig(
                algorithm="zoeg",
                iterations=iterations,
                step=StepSchedule(kind="constant", eta0=eta),
                radius=radius,
                seed=seed,
            )
            record = run_zoeg(problem, feasible, config)
            gaps.append(duality_gap(record.averaged, problem))
        means[iterations] = float(np.mean(gaps))
    ratio = means[40_000] / means[10_000]
    checks = [
        (
            f"mean gap {means[40_000]:.4e} at 4K vs {means[10_000]:.4e} at K: "
            f"ratio {ratio:.3f} <= 0.6",
            ratio <= 0.6,
        )
    ]
    return _finish("sphere_rate_decay", checks)


def query_accounting() -> CriterionResult:
    """Exact closed-form query totals per algorithm."""
    _, problem, feasible, radius, _ = _toy_setup()
    step = StepSchedule(kind="constant", eta0=0.1)
    iterations = 7
    cases = [
        ("zoeg", {}, 4 * iterations),
        ("zoceg", {}, 2 * (1 + 1 + 1) * iterations),
        ("zobceg", dict(block_x=1, block_y=1), 2 * (1 + 1 + 1) * iterations),
        ("zogda", {}, 2 * iterations),
        ("fo_eg", {}, 0),
    ]
    checks: list = []
    for name, extra, expected in cases:
        config = SolverConfig(
            algorithm=name, iterations=iterations, step=step, radius=radius, seed=0, **extra
        )
        record = run(problem, feasible, config)
        checks.append(
            (
                f"{name}: {record.per_f_eval_total} == {expected}",
                record.per_f_eval_total == expected,
            )
        )
        if expected:
            checks.append(
                (
                    f"{name}: final row queries {int(record.queries[-1])} == {expected}",
                    int(record.queries[-1]) == expected,
                )
            )

    wide, wide_set, _ = build_problem(ProblemSpec(kind="load_tracking", seed=0, size=100))
    rec = run(wide, wide_set, SolverConfig(
        algorithm="zoceg", iterations=3, step=StepSchedule(kind="constant", eta0=0.04),
        radius=RadiusSchedule(c=5.0, p=1.1, cap=1e-3), seed=0,
    ))
    expected = 2 * (100 + 1 + 1) * 3
    checks.append((f"zoceg d=100: {rec.per_f_eval_total} == {expected}", rec.per_f_eval_total == expected))
    rec = run(wide, wide_set, SolverConfig(
        algorithm="zobceg", iterations=3, step=StepSchedule(kind="constant", eta0=0.15),
        radius=RadiusSchedule(c=5.0, p=1.1, cap=1e-3), seed=0, block_x=5, block_y=1,
    ))
    expected = 2 * (5 + 1 + 1) * 3
    checks.append((f"zobceg blocks (5,1): {rec.per_f_eval_total} == {expected}", rec.per_f_eval_total == expected))
    return _finish("query_accounting", checks)


_DETERMINISM_CONFIG = """\
[problem]
kind = "toy_qp"

[run]
seeds = [0, 1]
parallelism = 2
output_dir = "unused"

[targets]
rel_err = [0.5, 0.05]

[[solvers]]
label = "coord"
algorithm = "zoceg"
iterations = 120
step = { kind = "constant", eta0 = 0.2 }
radius = { c = 1.0, p = 1.1, cap = 1e-3 }

[[solvers]]
label = "sphere"
algorithm = "zoeg"
iterations = 150
step = { kind = "diminishing", eta0 = 0.1 }
radius = { c = 1.0, p = 1.1, cap = 1e-3 }

[[solvers]]
label = "blocks"
algorithm = "zobceg"
iterations = 120
block_x = 1
block_y = 1
step = { kind = "constant", eta0 = 0.2 }
radius = { c = 1.0, p = 1.1, cap = 1e-3 }
"""


def determinism() -> CriterionResult:
    """Byte-identical outputs for repeated runs of one experiment config."""
    checks: list = []
    with tempfile.TemporaryDirectory() as root:
        root = Path(root)
        config_path = root / "experiment.toml"
        config_path.write_text(_DETERMINISM_CONFIG)
        config = parse_config(config_path)
        status_a = run_experiment(config, output_dir=str(root / "a"))
        status_b = run_experiment(config, output_dir=str(root / "b"))
        checks.append((f"both invocations exit 0 ({status_a}, {status_b})", status_a == 0 and status_b == 0))
        files_a = sorted(p.relative_to(root / "a") for p in (root / "a").rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(root / "b") for p in (root / "b").rglob("*") if p.is_file())
        checks.append((f"same file sets ({len(files_a)} files)", files_a == files_b))
        mismatched = [
            str(rel)
            for rel in files_a
            if not filecmp.cmp(root / "a" / rel, root / "b" / rel, shallow=False)
        ]
        checks.append(
            (
                "all files byte-identical" if not mismatched else f"differing files: {mismatched}",
                not mismatched,
            )
        )
    return _finish("determinism", checks)


def nonconvex_smoke() -> CriterionResult:
    """Bounded behavior on the nonconvex instance, no guarantees claimed.

    Ten thousand iterations per seed must finish without tripping the
    divergence guard, and the final constraint violation must end below the
    starting one in at least 18 of 20 seeds, for both the sphere and the
    block method.
    """
    from .problems import NonconvexSmokeInstance

    instance = NonconvexSmokeInstance()
    problem = instance.to_blackbox()
    feasible = instance.feasible_set()
    radius = RadiusSchedule(c=1.0, p=1.1, cap=1e-3)
    cases = [
        ("zoeg", StepSchedule(kind="diminishing", eta0=0.02), {}),
        ("zobceg", StepSchedule(kind="constant", eta0=0.05), dict(block_x=2, block_y=1)),
    ]
    checks: list = []
    for name, step, extra in cases:
        improved = 0
        tripped = 0
        for seed in range(20):
            start_x = feasible.primal.sample_uniform(SeededSampler(seed))
            start_violation = constraint_violation(start_x, problem)
            config = SolverConfig(
                algorithm=name, iterations=10_000, step=step, radius=radius, seed=seed,
                z0=JointPoint(x=start_x, y=np.zeros(1)), **extra,
            )
            record = run(problem, feasible, config)
            tripped += record.diverged
            improved += record.violation[-1] < start_violation
        checks.append((f"{name}: no divergence-guard trips ({tripped})", tripped == 0))
        checks.append((f"{name}: violation improved in {improved}/20 seeds (need >= 18)", improved >= 18))
    return _finish("nonconvex_smoke", checks)


def reference_solver() -> CriterionResult:
    """Reference-solver audit over 100 random benchmark instances.

    Recomputes the optimality conditions of every returned solution at
    1e-8 and checks that the load-balance function handed to the bisection
    is nonincreasing in the multiplier.
    """
    worst_stationarity = 0.0
    worst_feasibility = 0.0
    worst_slack = 0.0
    monotone = True
    for seed in range(100):
        instance = generate_load_tracking(seed, n=100)
        x, lam, _ = reference_solve_load_tracking(instance)
        weights = 1.0 + instance.gamma
        grad = 2.0 * instance.a * x + instance.b - lam * weights
        interior = (x > 1e-10) & (x < instance.u - 1e-10)
        if np.any(interior):
            worst_stationarity = max(worst_stationarity, float(np.max(np.abs(grad[interior]))))
        gap = float(instance.constraint_values(x)[0])
        worst_feasibility = max(worst_feasibility, gap)
        worst_slack = max(worst_slack, abs(lam * gap))
        grid = np.linspace(0.0, 2.0 * lam + 10.0, 41)
        values = []
        for lam_probe in grid:
            response = np.clip((lam_probe * weights - instance.b) / (2.0 * instance.a), 0.0, instance.u)
            values.append(float(np.dot(weights, response)))
        deltas = np.diff(values)
        if np.any(deltas < -1e-9):
            monotone = False
    checks = [
        (f"stationarity residual {worst_stationarity:.2e} <= 1e-8", worst_stationarity <= 1e-8),
        (f"feasibility residual {worst_feasibility:.2e} <= 1e-8", worst_feasibility <= 1e-8),
        (f"complementary slack |lam * gap| {worst_slack:.2e} <= 1e-6", worst_slack <= 1e-6),
        ("load response nondecreasing in the multiplier on every instance", monotone),
    ]
    return _finish("reference_solver", checks)


CRITERIA = {
    "benchmark_complexity": benchmark_complexity,
    "gap_bound_averaged": gap_bound_averaged,
    "feasibility_bound_averaged": feasibility_bound_averaged,
    "coordinate_bias": coordinate_bias,
    "sphere_estimator_moments": sphere_estimator_moments,
    "reductions": reductions,
    "sphere_rate_decay": sphere_rate_decay,
    "query_accounting": query_accounting,
    "determinism": determinism,
    "nonconvex_smoke": nonconvex_smoke,
    "reference_solver": reference_solver,
}

SUITES = {
    "estimators": ("coordinate_bias", "sphere_estimator_moments"),
    "bounds": ("gap_bound_averaged", "feasibility_bound_averaged"),
    "table2": ("benchmark_complexity",),
    "reductions": ("reductions",),
    "rates": ("sphere_rate_decay",),
    "accounting": ("query_accounting",),
    "determinism": ("determinism",),
    "smoke": ("nonconvex_smoke",),
    "reference": ("reference_solver",),
    "all": tuple(CRITERIA),
}


def run_suite(selector: str = "all") -> list:
    """Run the named suite (or a single criterion name) and collect results."""
    if selector in SUITES:
        names = SUITES[selector]
    elif selector in CRITERIA:
        names = (selector,)
    else:
        options = sorted(set(SUITES) | set(CRITERIA))
        raise ValueError(f"unknown suite {selector!r}; expected one of {options}")
    return [CRITERIA[name]() for name in names]
