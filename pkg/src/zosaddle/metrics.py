"""Solution-quality measures and multi-run aggregation.

Everything here is diagnostic: evaluations feed a separate
:class:`DiagnosticCounter` and never touch the query counter an algorithm is
being graded on.  Relative error is reported as the magnitude
``|phi0(x) - phi0*| / phi0*``, since primal-dual trajectories routinely pass
through infeasible points whose raw objective sits below the optimum; when
``phi0* <= 0`` the absolute error is reported instead and flagged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import TYPE_CHECKING, Optional

import numpy as np

from .core import JointPoint, Vector
from .saddle import BlackBoxProblem, SaddlePoint

if TYPE_CHECKING:  # pragma: no cover
    from .algorithms import RunRecord

METRIC_KINDS = ("rel_err", "violation", "gap")

CSV_HEADER = "iter,queries,rel_err,violation,gap"


class DiagnosticCounter:
    """Query meter for diagnostic evaluations, separate from any algorithm's."""

    def __init__(self) -> None:
        self.count = 0

    def charge(self, amount: int) -> None:
        self.count += amount


@dataclass(frozen=True)
class MetricRow:
    """Solution quality at one recorded iterate.

    Attributes:
        iteration: Iteration index ``k``.
        queries: Cumulative oracle queries after that iteration.
        rel_err: Objective error; ``None`` when no optimal value is known.
        violation: l2 norm of the positive constraint parts, nonnegative.
        gap: Duality gap; ``None`` when no saddle is known.
    """

    iteration: int
    queries: int
    rel_err: Optional[float]
    violation: float
    gap: Optional[float]


def constraint_violation(
    x: Vector, problem: BlackBoxProblem, counter: Optional[DiagnosticCounter] = None
) -> float:
    """l2 norm of ``max(phi(x), 0)``; zero whenever ``x`` is feasible."""
    if problem.d_y == 0:
        return 0.0
    phi = np.asarray(problem.constraints(x), dtype=np.float64)
    if counter is not None:
        counter.charge(1)
    return float(np.linalg.norm(np.maximum(phi, 0.0)))


def objective_error(
    x: Vector, problem: BlackBoxProblem, counter: Optional[DiagnosticCounter] = None
) -> tuple[Optional[float], bool]:
    """Error of ``phi0(x)`` against the known optimum.

    Returns ``(error, is_absolute)``: the relative magnitude when the optimal
    value is positive, the absolute magnitude (flagged) when it is zero or
    negative, and ``(None, False)`` when no optimum is known.
    """
    if problem.optimum is None:
        return None, False
    value = float(problem.objective(x))
    if counter is not None:
        counter.charge(1)
    best = problem.optimum.value
    if best > 0.0:
        return abs(value - best) / best, False
    return abs(value - best), True


def duality_gap(
    z: JointPoint,
    problem: BlackBoxProblem,
    saddle: Optional[SaddlePoint] = None,
    counter: Optional[DiagnosticCounter] = None,
) -> Optional[float]:
    """The gap ``f(x, y*) - f(x*, y)``, zero exactly at a saddle point.

    Uses the problem's stored optimum when no saddle is given; returns
    ``None`` if neither is available.
    """
    if saddle is None:
        saddle = problem.optimum
    if saddle is None:
        return None
    phi0_x, phi_x = problem.components_at(z.x)
    phi0_star, phi_star = problem.components_at(saddle.x)
    if counter is not None:
        counter.charge(2)
    left = phi0_x + float(saddle.y @ phi_x) if problem.d_y else phi0_x
    right = phi0_star + float(z.y @ phi_star) if problem.d_y else phi0_star
    return left - right


def queries_to_target(
    record: "RunRecord", targets, metric: str = "rel_err"
) -> list[Optional[int]]:
    """First cumulative query count at which a metric reaches each target.

    For each threshold the answer is the ``queries`` entry of the earliest
    row whose metric is ``<= threshold``, or ``None`` if no row qualifies.
    """
    if metric not in METRIC_KINDS:
        raise ValueError(f"unknown metric kind {metric!r}; expected one of {METRIC_KINDS}")
    values = getattr(record, metric)
    if values is None:
        return [None for _ in targets]
    out: list[Optional[int]] = []
    for threshold in targets:
        hits = values <= threshold
        if np.any(hits):
            out.append(int(record.queries[int(np.argmax(hits))]))
        else:
            out.append(None)
    return out


@dataclass(frozen=True, eq=False)
class TargetStat:
    """How a set of runs fared against one threshold of one metric."""

    metric: str
    threshold: float
    reach_rate: float
    mean_queries: Optional[float]


@dataclass(eq=False)
class AggregateSummary:
    """Across-seed trajectory statistics and queries-to-target means.

    Standard deviations use the unbiased ``n - 1`` estimator.  ``gap`` and
    ``rel_err`` statistics are present only when every run carries them.
    """

    algorithm: str
    runs: int
    iterations: np.ndarray
    queries: np.ndarray
    rel_err_mean: Optional[np.ndarray]
    rel_err_std: Optional[np.ndarray]
    violation_mean: np.ndarray
    violation_std: np.ndarray
    gap_mean: Optional[np.ndarray]
    gap_std: Optional[np.ndarray]
    target_stats: list[TargetStat]


def _stack(records: list, field: str):
    columns = [getattr(r, field) for r in records]
    if any(c is None for c in columns):
        return None, None
    stacked = np.vstack(columns)
    return stacked.mean(axis=0), stacked.std(axis=0, ddof=1)


def aggregate(records: list, targets: Optional[dict] = None) -> AggregateSummary:
    """Combine runs that differ only by seed into one summary.

    ``targets`` maps metric kinds to threshold lists, e.g.
    ``{"rel_err": [0.05, 0.01], "violation": [5.0, 1.0]}``.

    Raises:
        ValueError: With fewer than two records or mismatched configs.
    """
    if len(records) < 2:
        raise ValueError(f"aggregation needs at least 2 records, got {len(records)}")
    reference = replace(records[0].config, seed=0)
    for r in records[1:]:
        if replace(r.config, seed=0) != reference:
            raise ValueError("records have mismatched configs; only seeds may differ")
    lengths = {r.iterations.shape[0] for r in records}
    if len(lengths) != 1:
        raise ValueError(f"records have mismatched lengths {sorted(lengths)}")

    rel_mean, rel_std = _stack(records, "rel_err")
    gap_mean, gap_std = _stack(records, "gap")
    viol_mean, viol_std = _stack(records, "violation")

    target_stats: list[TargetStat] = []
    for metric, thresholds in (targets or {}).items():
        for threshold in thresholds:
            per_run = [queries_to_target(r, [threshold], metric)[0] for r in records]
            reached = [q for q in per_run if q is not None]
            target_stats.append(
                TargetStat(
                    metric=metric,
                    threshold=float(threshold),
                    reach_rate=len(reached) / len(records),
                    mean_queries=float(np.mean(reached)) if reached else None,
                )
            )
    return AggregateSummary(
        algorithm=records[0].algorithm,
        runs=len(records),
        iterations=records[0].iterations.copy(),
        queries=records[0].queries.copy(),
        rel_err_mean=rel_mean,
        rel_err_std=rel_std,
        violation_mean=viol_mean,
        violation_std=viol_std,
        gap_mean=gap_mean,
        gap_std=gap_std,
        target_stats=target_stats,
    )


def _format_cell(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_csv(record: "RunRecord", path) -> None:
    """Write one run's per-iteration rows; deterministic byte-for-byte."""
    lines = [CSV_HEADER]
    k_arr = record.iterations
    q_arr = record.queries
    rel = record.rel_err
    gap = record.gap
    for i in range(k_arr.shape[0]):
        lines.append(
            ",".join(
                [
                    str(int(k_arr[i])),
                    str(int(q_arr[i])),
                    _format_cell(None if rel is None else rel[i]),
                    _format_cell(record.violation[i]),
                    _format_cell(None if gap is None else gap[i]),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def summary_payload(summary: AggregateSummary) -> dict:
    """JSON-ready view of a summary: final trajectory stats plus target table."""
    final = {
        "violation_mean": float(summary.violation_mean[-1]),
        "violation_std": float(summary.violation_std[-1]),
    }
    if summary.rel_err_mean is not None:
        final["rel_err_mean"] = float(summary.rel_err_mean[-1])
        final["rel_err_std"] = float(summary.rel_err_std[-1])
    if summary.gap_mean is not None:
        final["gap_mean"] = float(summary.gap_mean[-1])
        final["gap_std"] = float(summary.gap_std[-1])
    return {
        "algorithm": summary.algorithm,
        "runs": summary.runs,
        "recorded_iterations": int(summary.iterations.shape[0]),
        "total_queries": int(summary.queries[-1]),
        "final": final,
        "targets": [
            {
                "metric": t.metric,
                "threshold": t.threshold,
                "reach_rate": t.reach_rate,
                "mean_queries": t.mean_queries,
            }
            for t in summary.target_stats
        ],
    }


def write_summary(summary: AggregateSummary, path) -> None:
    """Write a summary as JSON with explicit field names."""
    Path(path).write_text(
        json.dumps(summary_payload(summary), indent=2, sort_keys=True) + "\n"
    )
