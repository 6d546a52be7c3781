"""Tests for problem generators, reference solutions, and constants."""

import numpy as np
import pytest

from zosaddle.core import ProductFeasibleSet, RadiusSchedule
from zosaddle.metrics import constraint_violation, duality_gap
from zosaddle.problems import (
    NonconvexSmokeInstance,
    build_dual_box,
    compute_theory_constants,
    generate_load_tracking,
    load_instance,
    make_toy_qp,
    reference_solve_load_tracking,
    save_instance,
)


def test_generator_keeps_coefficients_in_their_ranges():
    instance = generate_load_tracking(3, n=200)
    assert instance.n == 200
    assert np.all((instance.a > 0.5) & (instance.a < 1.5))
    assert np.all((instance.b >= 0.0) & (instance.b <= 5.0))
    assert np.all((instance.u >= 0.0) & (instance.u <= 50.0))
    assert np.all((instance.gamma > 0.03) & (instance.gamma < 0.15))
    baseline = float(np.dot(1.0 + instance.gamma, instance.u))
    assert instance.demand == pytest.approx(baseline - 1500.0)


def test_generator_is_deterministic_per_seed():
    a = generate_load_tracking(5)
    b = generate_load_tracking(5)
    np.testing.assert_array_equal(a.a, b.a)
    np.testing.assert_array_equal(a.u, b.u)
    assert a.demand == b.demand
    c = generate_load_tracking(6)
    assert not np.array_equal(a.a, c.a)


def test_zero_curtailment_violates_by_exactly_1500():
    # demand is defined as baseline minus 1500, and the constraint reuses the
    # same dot product, so the cancellation is exact in floating point
    for seed in (0, 1, 7, 123):
        instance = generate_load_tracking(seed, n=100)
        assert instance.constraint_values(np.zeros(100))[0] == 1500.0


def test_reference_solution_frozen_values_seed_zero():
    instance = generate_load_tracking(0, n=100)
    x, lam, value = reference_solve_load_tracking(instance)
    assert value == pytest.approx(24269.7087587231, rel=1e-9)
    assert lam == pytest.approx(32.3699783249, rel=1e-8)
    assert np.all(x >= 0.0) and np.all(x <= instance.u)
    assert instance.constraint_values(x)[0] <= 1e-8


def test_reference_solution_satisfies_stationarity():
    for seed in (0, 4, 9):
        instance = generate_load_tracking(seed, n=100)
        x, lam, _ = reference_solve_load_tracking(instance)
        grad = 2.0 * instance.a * x + instance.b - lam * (1.0 + instance.gamma)
        interior = (x > 1e-10) & (x < instance.u - 1e-10)
        if np.any(interior):
            assert float(np.max(np.abs(grad[interior]))) <= 1e-8
        # clamped-at-zero users would need to pay more than the multiplier saves
        assert float(np.min(grad[x <= 1e-10], initial=0.0)) >= -1e-8


def test_small_instance_without_enough_load_is_rejected():
    # ten users cannot shed 1500 kW, so the instance is infeasible
    instance = generate_load_tracking(0, n=10)
    assert instance.demand < 0.0
    with pytest.raises(ValueError):
        reference_solve_load_tracking(instance)


def test_dual_box_frozen_upper_and_containment():
    instance = generate_load_tracking(0, n=100)
    dual = build_dual_box(instance, instance.slater_point())
    assert dual.upper[0] == pytest.approx(159.49103931, abs=1e-6)
    _, lam, _ = reference_solve_load_tracking(instance)
    assert 0.0 <= lam <= dual.upper[0]


def test_dual_box_requires_strict_feasibility():
    instance = generate_load_tracking(0, n=100)
    with pytest.raises(ValueError):
        build_dual_box(instance, np.zeros(100))


def test_theory_constants_load_tracking_frozen():
    instance = generate_load_tracking(0, n=100)
    feasible = ProductFeasibleSet(
        primal=instance.primal_box(),
        dual=build_dual_box(instance, instance.slater_point()),
    )
    constants = compute_theory_constants(
        instance, feasible, RadiusSchedule(c=5.0, p=1.1, cap=1e-3)
    )
    assert constants.smoothness == pytest.approx(12.008815, abs=1e-5)
    assert constants.gradient_bound == pytest.approx(2278.7344, abs=1e-3)
    assert constants.diameter == pytest.approx(326.8104, abs=1e-3)


def test_theory_constants_toy_qp_analytic():
    instance = make_toy_qp()
    radius = RadiusSchedule(c=1.0, p=1.1, cap=1e-3)
    constants = compute_theory_constants(instance, instance.feasible_set(), radius)
    # Lagrangian Hessian [[2, -1], [-1, 0]] has norm 1 + sqrt(2); the box
    # X x Y = [-2,2] x [0,4] has diameter sqrt(16 + 16); |grad| peaks at
    # (x, y) = (-2, 4) with components (-8, 3).
    assert constants.smoothness == pytest.approx(1.0 + np.sqrt(2.0), rel=1e-12)
    assert constants.diameter == pytest.approx(np.sqrt(32.0), rel=1e-12)
    assert constants.gradient_bound == pytest.approx(np.sqrt(73.0), rel=1e-12)
    assert constants.radius_sum == pytest.approx(radius.sum_radii(), rel=1e-12)
    assert constants.scaled_radius_sum == pytest.approx(
        2.0 * constants.radius_sum, rel=1e-12
    )


def test_toy_qp_saddle_and_gap():
    instance = make_toy_qp()
    assert instance.optimal_value == 1.0
    saddle = instance.saddle()
    np.testing.assert_array_equal(saddle.x, [1.0])
    np.testing.assert_array_equal(saddle.y, [2.0])
    problem = instance.to_blackbox()
    assert duality_gap(saddle_to_joint(saddle), problem) == 0.0
    # at x = 2, y = 0: f(2, y*) - f(x*, 0) = (4 + 2(1-2)) - 1 = 1
    from zosaddle.core import JointPoint

    off = JointPoint(x=np.array([2.0]), y=np.array([0.0]))
    assert duality_gap(off, problem) == 1.0


def saddle_to_joint(saddle):
    from zosaddle.core import JointPoint

    return JointPoint(x=saddle.x, y=saddle.y)


def test_toy_qp_box_bounds():
    feasible = make_toy_qp().feasible_set()
    np.testing.assert_array_equal(feasible.primal.lower, [-2.0])
    np.testing.assert_array_equal(feasible.primal.upper, [2.0])
    np.testing.assert_array_equal(feasible.dual.lower, [0.0])
    np.testing.assert_array_equal(feasible.dual.upper, [4.0])


def test_nonconvex_instance_shape_and_bounds():
    instance = NonconvexSmokeInstance()
    assert instance.d_x == 10
    assert instance.d_y == 1
    feasible = instance.feasible_set()
    np.testing.assert_array_equal(feasible.primal.lower, np.zeros(10))
    np.testing.assert_array_equal(feasible.primal.upper, np.full(10, 5.0))
    np.testing.assert_array_equal(feasible.dual.upper, [20.0])
    problem = instance.to_blackbox()
    assert problem.has_exact_gradients
    assert instance.objective(np.zeros(10)) == pytest.approx(0.0)
    assert instance.constraint_values(np.zeros(10))[0] == pytest.approx(40.0)


def test_nonconvex_objective_is_not_convex():
    # convexity would force f(mid) <= (f(a) + f(b)) / 2 for every pair
    instance = NonconvexSmokeInstance()
    best = np.inf
    for t in np.linspace(0.0, 5.0, 51):
        a = np.full(10, t)
        b = np.full(10, 5.0 - t)
        mid = 0.5 * (a + b)
        chord = 0.5 * (instance.objective(a) + instance.objective(b))
        best = min(best, chord - instance.objective(mid))
    assert best < 0.0


def test_save_and_load_round_trip(tmp_path):
    instance = generate_load_tracking(2, n=30)
    path = tmp_path / "instance.json"
    save_instance(instance, path)
    loaded = load_instance(path)
    np.testing.assert_array_equal(loaded.a, instance.a)
    np.testing.assert_array_equal(loaded.b, instance.b)
    np.testing.assert_array_equal(loaded.u, instance.u)
    np.testing.assert_array_equal(loaded.gamma, instance.gamma)
    assert loaded.demand == instance.demand


def test_load_rejects_unknown_kind(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "mystery"}')
    with pytest.raises(ValueError):
        load_instance(path)


def test_violation_metric_uses_positive_part():
    instance = generate_load_tracking(0, n=100)
    problem = instance.to_blackbox()
    assert constraint_violation(np.zeros(100), problem) == 1500.0
    x_feasible = instance.u.copy()
    assert constraint_violation(x_feasible, problem) == 0.0
