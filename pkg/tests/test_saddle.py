"""Tests for the Lagrangian oracle, counting policies, and exact operator."""

import numpy as np
import pytest

from zosaddle.core import JointPoint
from zosaddle.saddle import (
    BlackBoxProblem,
    LagrangianOracle,
    OracleError,
    SaddlePoint,
    eval_operator_exact,
    query_count,
)


def bilinear_problem():
    # f(x, y) = x * y via phi0 = 0 and phi(x) = x
    return BlackBoxProblem(
        d_x=1,
        d_y=1,
        objective=lambda x: 0.0,
        constraints=lambda x: np.array([x[0]]),
        objective_grad=lambda x: np.zeros(1),
        constraints_jac=lambda x: np.array([[1.0]]),
    )


def quadratic_problem():
    # phi0(x) = x1^2 + 2 x2^2, phi(x) = (x1 + x2 - 1, -x1)
    return BlackBoxProblem(
        d_x=2,
        d_y=2,
        objective=lambda x: float(x[0] ** 2 + 2.0 * x[1] ** 2),
        constraints=lambda x: np.array([x[0] + x[1] - 1.0, -x[0]]),
        objective_grad=lambda x: np.array([2.0 * x[0], 4.0 * x[1]]),
        constraints_jac=lambda x: np.array([[1.0, 1.0], [-1.0, 0.0]]),
    )


def test_lagrangian_value_is_objective_plus_weighted_constraints():
    oracle = LagrangianOracle(quadratic_problem())
    x = np.array([2.0, -1.0])
    y = np.array([3.0, 0.5])
    # phi0 = 4 + 2 = 6, phi = (0, -2), y.phi = -1
    assert oracle.value(x, y) == pytest.approx(5.0)


def test_dimension_mismatch_is_rejected():
    oracle = LagrangianOracle(quadratic_problem())
    with pytest.raises(ValueError):
        oracle.value(np.zeros(3), np.zeros(2))
    with pytest.raises(ValueError):
        oracle.value(np.zeros(2), np.zeros(1))


def test_per_f_eval_counter_charges_every_call():
    oracle = LagrangianOracle(quadratic_problem(), counting="per_f_eval")
    x = np.array([1.0, 1.0])
    y = np.zeros(2)
    for expected in (1, 2, 3):
        oracle.value(x, y)
        assert oracle.per_f_eval_count == expected
    assert query_count(oracle) == 3


def test_per_component_counter_charges_new_points_only():
    oracle = LagrangianOracle(quadratic_problem(), counting="per_component")
    x = np.array([1.0, 1.0])
    # first visit: phi0 plus two constraint components
    oracle.value(x, np.zeros(2))
    assert oracle.per_component_count == 3
    # same x with a different multiplier reuses all components
    oracle.value(x, np.array([5.0, -1.0]))
    assert oracle.per_component_count == 3
    oracle.value(np.array([0.0, 0.0]), np.zeros(2))
    assert oracle.per_component_count == 6
    assert query_count(oracle) == 6
    # the per-evaluation counter keeps running alongside
    assert oracle.per_f_eval_count == 3


def test_unknown_counting_policy_rejected():
    with pytest.raises(ValueError):
        LagrangianOracle(quadratic_problem(), counting="wall_clock")


def test_component_cache_eviction_recharges():
    oracle = LagrangianOracle(bilinear_problem(), counting="per_component")
    y = np.zeros(1)
    # fill the cache past its capacity with distinct points
    for i in range(200):
        oracle.value(np.array([float(i)]), y)
    charged = oracle.per_component_count
    assert charged == 200 * 2
    # the earliest point has been evicted by now and costs again
    oracle.value(np.array([0.0]), y)
    assert oracle.per_component_count == charged + 2
    # the newest point is still cached and free
    oracle.value(np.array([199.0]), y)
    assert oracle.per_component_count == charged + 2


def test_nonfinite_oracle_value_raises_oracle_error():
    problem = BlackBoxProblem(
        d_x=1,
        d_y=1,
        objective=lambda x: float("nan"),
        constraints=lambda x: np.array([0.0]),
    )
    oracle = LagrangianOracle(problem)
    with pytest.raises(OracleError) as excinfo:
        oracle.value(np.array([0.5]), np.zeros(1))
    assert excinfo.value.iteration is None
    np.testing.assert_array_equal(excinfo.value.x, [0.5])


def test_exact_operator_matches_hand_gradients():
    oracle = LagrangianOracle(quadratic_problem())
    z = JointPoint(x=np.array([2.0, -1.0]), y=np.array([3.0, 0.5]))
    # grad_x f = (2x1, 4x2) + J'y = (4, -4) + (3 - 0.5, 3) = (6.5, -1)
    # dual block = -phi = (2, -2) sign flipped -> -(0, -2) = (0, 2)
    operator = eval_operator_exact(oracle, z)
    np.testing.assert_allclose(operator, [6.5, -1.0, 0.0, 2.0])


def test_exact_operator_requires_gradients():
    problem = BlackBoxProblem(
        d_x=1, d_y=1, objective=lambda x: 0.0, constraints=lambda x: np.array([0.0])
    )
    assert not problem.has_exact_gradients
    oracle = LagrangianOracle(problem)
    with pytest.raises(ValueError):
        eval_operator_exact(oracle, JointPoint(x=np.zeros(1), y=np.zeros(1)))


def test_unconstrained_problem_has_empty_dual_block():
    problem = BlackBoxProblem(
        d_x=2,
        d_y=0,
        objective=lambda x: float(x @ x),
        constraints=lambda x: np.zeros(0),
        objective_grad=lambda x: 2.0 * x,
    )
    oracle = LagrangianOracle(problem)
    z = JointPoint(x=np.array([1.0, -2.0]), y=np.zeros(0))
    assert oracle.value(z.x, z.y) == pytest.approx(5.0)
    np.testing.assert_allclose(eval_operator_exact(oracle, z), [2.0, -4.0])


def test_saddle_point_stores_float_arrays():
    point = SaddlePoint(x=[1, 2], y=[3], value=4.0)
    assert point.x.dtype == np.float64
    np.testing.assert_array_equal(point.x, [1.0, 2.0])
