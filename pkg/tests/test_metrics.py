"""Tests for metric computation, aggregation, and CSV output."""

import numpy as np
import pytest

from zosaddle.algorithms import SolverConfig, run
from zosaddle.core import JointPoint, RadiusSchedule, StepSchedule
from zosaddle.metrics import (
    CSV_HEADER,
    DiagnosticCounter,
    aggregate,
    constraint_violation,
    duality_gap,
    objective_error,
    queries_to_target,
    summary_payload,
    write_csv,
)
from zosaddle.problems import make_toy_qp
from zosaddle.saddle import BlackBoxProblem, SaddlePoint


def toy_problem():
    return make_toy_qp().to_blackbox()


def small_config(**overrides):
    base = dict(
        algorithm="zoceg",
        iterations=40,
        step=StepSchedule(kind="constant", eta0=0.2),
        radius=RadiusSchedule(c=1.0, p=1.1, cap=1e-3),
        seed=0,
    )
    base.update(overrides)
    return SolverConfig(**base)


def test_constraint_violation_positive_part_norm():
    problem = BlackBoxProblem(
        d_x=1,
        d_y=3,
        objective=lambda x: 0.0,
        constraints=lambda x: np.array([3.0, -4.0, 4.0]),
    )
    assert constraint_violation(np.zeros(1), problem) == 5.0


def test_objective_error_relative_for_positive_optimum():
    problem = toy_problem()
    err, is_abs = objective_error(np.array([2.0]), problem)
    assert err == pytest.approx(3.0)
    assert not is_abs


def test_objective_error_absolute_when_optimum_not_positive():
    problem = BlackBoxProblem(
        d_x=1,
        d_y=0,
        objective=lambda x: float(x[0]),
        constraints=lambda x: np.zeros(0),
        optimum=SaddlePoint(x=np.zeros(1), y=np.zeros(0), value=0.0),
    )
    err, is_abs = objective_error(np.array([0.25]), problem)
    assert err == pytest.approx(0.25)
    assert is_abs


def test_objective_error_without_optimum_is_none():
    problem = BlackBoxProblem(
        d_x=1, d_y=0, objective=lambda x: 0.0, constraints=lambda x: np.zeros(0)
    )
    assert objective_error(np.zeros(1), problem) == (None, False)


def test_duality_gap_zero_at_saddle_and_one_off_saddle():
    problem = toy_problem()
    saddle = problem.optimum
    assert duality_gap(JointPoint(x=saddle.x, y=saddle.y), problem) == 0.0
    assert duality_gap(JointPoint(x=np.array([2.0]), y=np.array([0.0])), problem) == 1.0


def test_duality_gap_nonnegative_on_grid():
    problem = toy_problem()
    for x in np.linspace(-2.0, 2.0, 9):
        for y in np.linspace(0.0, 4.0, 9):
            gap = duality_gap(JointPoint(x=np.array([x]), y=np.array([y])), problem)
            assert gap >= -1e-12


def test_queries_to_target_picks_first_crossing():
    record = run(toy_problem(), make_toy_qp().feasible_set(), small_config())
    thresholds = [1.0, 0.05]
    answers = queries_to_target(record, thresholds, "rel_err")
    for threshold, queries in zip(thresholds, answers):
        assert queries is not None
        i = int(np.argmax(record.queries == queries))
        assert record.rel_err[i] <= threshold
        assert np.all(record.rel_err[:i] > threshold)
    # an unreachable target reports None
    assert queries_to_target(record, [1e-300], "rel_err") == [None]


def test_queries_to_target_unknown_metric():
    record = run(toy_problem(), make_toy_qp().feasible_set(), small_config())
    with pytest.raises(ValueError):
        queries_to_target(record, [0.1], "loss")


def test_csv_round_trip(tmp_path):
    feasible = make_toy_qp().feasible_set()
    record = run(toy_problem(), feasible, small_config(iterations=25))
    path = tmp_path / "run.csv"
    write_csv(record, path)
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert CSV_HEADER == "iter,queries,rel_err,violation,gap"
    assert len(lines) == 26
    cells = lines[7].split(",")
    assert int(cells[0]) == int(record.iterations[6])
    assert int(cells[1]) == int(record.queries[6])
    # repr round-trips doubles exactly
    assert float(cells[2]) == record.rel_err[6]
    assert float(cells[3]) == record.violation[6]
    assert float(cells[4]) == record.gap[6]


def test_csv_blank_cells_without_optimum(tmp_path):
    instance = make_toy_qp()
    anonymous = BlackBoxProblem(
        d_x=1,
        d_y=1,
        objective=instance.objective,
        constraints=instance.constraint_values,
    )
    record = run(anonymous, instance.feasible_set(), small_config(iterations=5))
    assert record.rel_err is None
    assert record.gap is None
    path = tmp_path / "run.csv"
    write_csv(record, path)
    for line in path.read_text().splitlines()[1:]:
        cells = line.split(",")
        assert cells[2] == ""
        assert cells[4] == ""


def test_aggregate_means_and_reach_rates():
    problem = toy_problem()
    feasible = make_toy_qp().feasible_set()
    records = [run(problem, feasible, small_config(seed=s)) for s in range(4)]
    summary = aggregate(records, targets={"rel_err": [1.0, 1e-300]})
    assert summary.runs == 4
    stacked = np.vstack([r.rel_err for r in records])
    np.testing.assert_allclose(summary.rel_err_mean, stacked.mean(axis=0))
    np.testing.assert_allclose(summary.rel_err_std, stacked.std(axis=0, ddof=1))
    easy, impossible = summary.target_stats
    assert easy.reach_rate == 1.0
    assert easy.mean_queries is not None
    assert impossible.reach_rate == 0.0
    assert impossible.mean_queries is None


def test_aggregate_rejects_mismatched_configs():
    problem = toy_problem()
    feasible = make_toy_qp().feasible_set()
    a = run(problem, feasible, small_config(seed=0))
    b = run(problem, feasible, small_config(seed=1, iterations=41))
    with pytest.raises(ValueError):
        aggregate([a, b])
    with pytest.raises(ValueError):
        aggregate([a])


def test_aggregate_allows_seed_differences_only():
    problem = toy_problem()
    feasible = make_toy_qp().feasible_set()
    records = [run(problem, feasible, small_config(seed=s)) for s in (3, 11)]
    summary = aggregate(records)
    assert summary.algorithm == "zoceg"


def test_summary_payload_shape():
    problem = toy_problem()
    feasible = make_toy_qp().feasible_set()
    records = [run(problem, feasible, small_config(seed=s)) for s in range(2)]
    payload = summary_payload(aggregate(records, targets={"violation": [1.0]}))
    assert payload["runs"] == 2
    assert "final" in payload
    assert payload["targets"][0]["metric"] == "violation"
    assert payload["targets"][0]["reach_rate"] == 1.0


def test_diagnostic_counter_accumulates():
    counter = DiagnosticCounter()
    assert counter.count == 0
    counter.charge(2)
    counter.charge(3)
    assert counter.count == 5
    problem = toy_problem()
    constraint_violation(np.zeros(1), problem, counter)
    assert counter.count == 6
