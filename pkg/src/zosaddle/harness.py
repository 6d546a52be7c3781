"""Experiment orchestration: config files, multi-seed sweeps, and outputs.

An experiment is described by a TOML file (schema below), expands into one
run per (solver, seed) pair against a single shared problem instance, and
leaves behind per-run CSV trajectories, per-solver summaries, and a manifest
holding every parameter needed to replay the experiment.  Outputs are
deterministic: running the same config twice produces byte-identical files.

Config schema::

    [problem]
    kind = "load_tracking"      # or "toy_qp" / "nonconvex_smoke"
    seed = 0                    # generator seed (load_tracking)
    size = 100                  # number of devices (load_tracking)
    # path = "instance.json"    # alternatively, a serialized instance

    [run]
    seeds = [0, 1, 2, 3]
    parallelism = 4
    output_dir = "out"

    [targets]
    rel_err = [0.05, 0.01, 0.001]
    violation = [5.0, 1.0, 0.1]

    [[solvers]]
    label = "coord-full"
    algorithm = "zoceg"
    iterations = 2000
    step = { kind = "constant", eta0 = 0.04 }
    radius = { c = 5.0, p = 1.1, cap = 1e-3 }
    # block_x / block_y for zobceg; counting = "per_f_eval" by default
"""

from __future__ import annotations

import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .algorithms import ALGORITHMS, RunRecord, SolverConfig, run
from .core import ProductFeasibleSet, RadiusSchedule, StepSchedule
from .metrics import (
    METRIC_KINDS,
    aggregate,
    queries_to_target,
    summary_payload,
    write_csv,
)
from .problems import (
    LoadTrackingInstance,
    NonconvexSmokeInstance,
    ToyQPInstance,
    build_dual_box,
    generate_load_tracking,
    load_instance,
    make_toy_qp,
    reference_solve_load_tracking,
)
from .saddle import BlackBoxProblem, SaddlePoint

PROBLEM_KINDS = ("load_tracking", "toy_qp", "nonconvex_smoke")


@dataclass(frozen=True)
class ProblemSpec:
    """Which problem an experiment runs on.

    Either a generator ``kind`` (with ``seed`` and ``size`` where relevant)
    or a ``path`` to a serialized instance.
    """

    kind: Optional[str] = None
    seed: int = 0
    size: int = 100
    path: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """A parsed, validated experiment definition."""

    problem: ProblemSpec
    solvers: tuple
    seeds: tuple
    targets: dict
    output_dir: str
    parallelism: int


def _parse_schedule(table, problems: list, context: str):
    step = None
    radius = None
    step_raw = table.get("step")
    if not isinstance(step_raw, dict):
        problems.append(f"{context}: missing or malformed step table")
    else:
        try:
            step = StepSchedule(
                kind=step_raw.get("kind", "constant"),
                eta0=float(step_raw.get("eta0", 0.0)),
            )
        except (TypeError, ValueError) as err:
            problems.append(f"{context}: {err}")
    radius_raw = table.get("radius", {"c": 1.0, "p": 1.1, "cap": 1e-3})
    if not isinstance(radius_raw, dict):
        problems.append(f"{context}: malformed radius table")
    else:
        try:
            radius = RadiusSchedule(
                c=float(radius_raw.get("c", 1.0)),
                p=float(radius_raw.get("p", 1.1)),
                cap=float(radius_raw.get("cap", 1e-3)),
            )
        except (TypeError, ValueError) as err:
            problems.append(f"{context}: {err}")
    return step, radius


def parse_config(path) -> ExperimentConfig:
    """Read and validate an experiment file.

    Every violated rule is reported, not just the first; the error message
    carries one line per violation.

    Raises:
        ValueError: On malformed TOML (with parser context) or any failed
            validation.
    """
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError:
        raise ValueError(f"{path}: config file does not exist")
    except tomllib.TOMLDecodeError as err:
        raise ValueError(f"{path}: malformed TOML: {err}")

    problems: list[str] = []

    prob_raw = data.get("problem")
    spec = ProblemSpec()
    if not isinstance(prob_raw, dict):
        problems.append("missing [problem] table")
    else:
        kind = prob_raw.get("kind")
        inst_path = prob_raw.get("path")
        if kind is None and inst_path is None:
            problems.append("[problem] needs either kind or path")
        if kind is not None and kind not in PROBLEM_KINDS:
            problems.append(
                f"[problem] unknown kind {kind!r}; expected one of {PROBLEM_KINDS}"
            )
        if inst_path is not None and not Path(inst_path).exists():
            problems.append(f"[problem] path does not exist: {inst_path}")
        spec = ProblemSpec(
            kind=kind,
            seed=int(prob_raw.get("seed", 0)),
            size=int(prob_raw.get("size", 100)),
            path=inst_path,
        )
        if spec.size < 1:
            problems.append(f"[problem] size must be positive, got {spec.size}")

    run_raw = data.get("run", {})
    seeds_raw = run_raw.get("seeds", [])
    seeds: list[int] = []
    if not seeds_raw:
        problems.append("[run] seeds must be a nonempty list")
    else:
        seen = set()
        for s in seeds_raw:
            s = int(s)
            if s in seen:
                problems.append(f"[run] duplicate seed {s}")
            seen.add(s)
            seeds.append(s)
    parallelism = int(run_raw.get("parallelism", 1))
    if parallelism < 1:
        problems.append(f"[run] parallelism must be at least 1, got {parallelism}")
    output_dir = str(run_raw.get("output_dir", "out"))

    targets: dict[str, tuple] = {}
    for metric, thresholds in (data.get("targets") or {}).items():
        if metric not in METRIC_KINDS:
            problems.append(
                f"[targets] unknown metric {metric!r}; expected one of {METRIC_KINDS}"
            )
            continue
        values = [float(t) for t in thresholds]
        if any(b >= a for a, b in zip(values, values[1:])):
            problems.append(
                f"[targets] {metric} thresholds must be strictly decreasing, got {values}"
            )
        targets[metric] = tuple(values)

    solvers_raw = data.get("solvers", [])
    solvers: list[tuple[str, SolverConfig]] = []
    if not solvers_raw:
        problems.append("at least one [[solvers]] entry is required")
    labels = set()
    for index, entry in enumerate(solvers_raw):
        label = entry.get("label") or entry.get("algorithm") or f"solver{index}"
        context = f"[[solvers]] {label!r}"
        if label in labels:
            problems.append(f"{context}: duplicate label")
        labels.add(label)
        algorithm = entry.get("algorithm")
        if algorithm not in ALGORITHMS:
            problems.append(
                f"{context}: unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}"
            )
            continue
        step, radius = _parse_schedule(entry, problems, context)
        if step is None or radius is None:
            continue
        try:
            config = SolverConfig(
                algorithm=algorithm,
                iterations=int(entry.get("iterations", 0)),
                step=step,
                radius=radius,
                block_x=entry.get("block_x"),
                block_y=entry.get("block_y"),
                output=entry.get("output", "both"),
                counting=entry.get("counting", "per_f_eval"),
            )
        except (TypeError, ValueError) as err:
            problems.append(f"{context}: {err}")
            continue
        solvers.append((str(label), config))

    if problems:
        raise ValueError(
            f"invalid experiment config {path}:\n" + "\n".join(f"  - {p}" for p in problems)
        )
    return ExperimentConfig(
        problem=spec,
        solvers=tuple(solvers),
        seeds=tuple(seeds),
        targets=targets,
        output_dir=output_dir,
        parallelism=parallelism,
    )


def build_problem(spec: ProblemSpec):
    """Materialize a problem spec.

    Returns ``(problem, feasible, meta)`` where ``meta`` is a JSON-ready
    description of everything problem-side that a replay needs: the
    ProblemSpec fields, the resolved dual box, and the reference optimum when one is
    computed.  Load-tracking instances get their optimum from the reference
    solver and their dual box from the full-curtailment Slater point.
    """
    if spec.path is not None:
        instance = load_instance(spec.path)
    elif spec.kind == "load_tracking":
        instance = generate_load_tracking(spec.seed, n=spec.size)
    elif spec.kind == "toy_qp":
        instance = make_toy_qp()
    elif spec.kind == "nonconvex_smoke":
        instance = NonconvexSmokeInstance()
    else:
        raise ValueError(f"problem spec is incomplete: {spec}")

    meta = {
        "kind": spec.kind,
        "generator_seed": spec.seed,
        "size": spec.size,
        "path": spec.path,
    }
    if isinstance(instance, LoadTrackingInstance):
        x_star, lam, value = reference_solve_load_tracking(instance)
        optimum = SaddlePoint(x=x_star, y=np.array([lam]), value=value)
        problem = instance.to_blackbox(optimum)
        dual = build_dual_box(instance, instance.slater_point())
        feasible = ProductFeasibleSet(primal=instance.primal_box(), dual=dual)
        meta["optimal_value"] = value
        meta["optimal_multiplier"] = lam
    elif isinstance(instance, (ToyQPInstance, NonconvexSmokeInstance)):
        problem = instance.to_blackbox()
        feasible = instance.feasible_set()
        if problem.optimum is not None:
            meta["optimal_value"] = problem.optimum.value
    else:
        raise ValueError(f"unsupported instance type {type(instance).__name__}")
    if meta["kind"] is None:
        slugs = {
            LoadTrackingInstance: "load_tracking",
            ToyQPInstance: "toy_qp",
            NonconvexSmokeInstance: "nonconvex_smoke",
        }
        meta["kind"] = slugs[type(instance)]
    meta["d_x"] = problem.d_x
    meta["d_y"] = problem.d_y
    meta["dual_box_upper"] = [float(v) for v in feasible.dual.upper]
    return problem, feasible, meta


def _solver_meta(label: str, config: SolverConfig) -> dict:
    return {
        "label": label,
        "algorithm": config.algorithm,
        "iterations": config.iterations,
        "step": {"kind": config.step.kind, "eta0": config.step.eta0},
        "radius": {"c": config.radius.c, "p": config.radius.p, "cap": config.radius.cap},
        "block_x": config.block_x,
        "block_y": config.block_y,
        "output": config.output,
        "counting": config.counting,
    }


def _single_run_payload(record: RunRecord, targets: dict) -> dict:
    final = {"violation": float(record.violation[-1])}
    if record.rel_err is not None:
        final["rel_err"] = float(record.rel_err[-1])
    if record.gap is not None:
        final["gap"] = float(record.gap[-1])
    rows = []
    for metric, thresholds in targets.items():
        counts = queries_to_target(record, list(thresholds), metric)
        for threshold, queries in zip(thresholds, counts):
            rows.append(
                {
                    "metric": metric,
                    "threshold": float(threshold),
                    "reach_rate": 1.0 if queries is not None else 0.0,
                    "mean_queries": None if queries is None else float(queries),
                }
            )
    return {
        "algorithm": record.algorithm,
        "runs": 1,
        "recorded_iterations": int(record.iterations.shape[0]),
        "total_queries": int(record.queries[-1]),
        "final": final,
        "targets": rows,
    }


def run_experiment(
    config: ExperimentConfig,
    output_dir: Optional[str] = None,
    parallelism: Optional[int] = None,
    verbose: int = 0,
) -> int:
    """Execute every (solver, seed) run of an experiment and write outputs.

    Layout under the output directory: ``<label>/seed<seed>.csv`` per run,
    ``<label>/summary.json`` per solver, and ``manifest.json`` at the root.
    Runs execute concurrently up to the configured degree; all files are
    written from the calling thread afterwards, in a fixed order.  A failed
    run is recorded in the manifest, leaves the other runs untouched, and
    turns the exit status nonzero.
    """
    out_root = Path(output_dir if output_dir is not None else config.output_dir)
    degree = parallelism if parallelism is not None else config.parallelism
    problem, feasible, problem_meta = build_problem(config.problem)

    jobs = [
        (label, solver, seed)
        for label, solver in config.solvers
        for seed in config.seeds
    ]

    def attempt(job):
        label, solver, seed = job
        try:
            return "ok", run(problem, feasible, replace(solver, seed=seed))
        except Exception as err:  # noqa: BLE001 - isolate per-run failures
            return "error", f"{type(err).__name__}: {err}"

    with ThreadPoolExecutor(max_workers=max(1, min(degree, len(jobs)))) as pool:
        outcomes = list(pool.map(attempt, jobs))

    out_root.mkdir(parents=True, exist_ok=True)
    run_status: dict = {}
    failed = False
    by_label: dict[str, list[RunRecord]] = {label: [] for label, _ in config.solvers}
    for (label, _, seed), (status, payload) in zip(jobs, outcomes):
        entry: dict = {"status": status}
        if status == "ok":
            record: RunRecord = payload
            by_label[label].append(record)
            entry["diverged"] = record.diverged
            if record.warnings:
                entry["warnings"] = list(record.warnings)
            if verbose:
                print(f"{label} seed {seed}: {record.iterations.shape[0]} iterations, "
                      f"{int(record.queries[-1])} queries")
        else:
            failed = True
            entry["message"] = payload
            print(f"{label} seed {seed}: FAILED ({payload})", file=sys.stderr)
        run_status.setdefault(label, {})[f"seed{seed}"] = entry

    for label, _ in config.solvers:
        solver_dir = out_root / label
        solver_dir.mkdir(parents=True, exist_ok=True)
        records = by_label[label]
        for record in records:
            write_csv(record, solver_dir / f"seed{record.config.seed}.csv")
        if len(records) >= 2:
            summary = aggregate(records, {m: list(t) for m, t in config.targets.items()})
            payload = summary_payload(summary)
        elif records:
            payload = _single_run_payload(records[0], config.targets)
        else:
            payload = None
        if payload is not None:
            (solver_dir / "summary.json").write_text(
                json.dumps(payload, indent=2, sort_keys=True) + "\n"
            )

    manifest = {
        "problem": problem_meta,
        "solvers": [_solver_meta(label, solver) for label, solver in config.solvers],
        "seeds": list(config.seeds),
        "targets": {m: list(t) for m, t in config.targets.items()},
        "parallelism": degree,
        "initial_point_rule": "x0 uniform in the primal box per seed, y0 = 0",
        "runs": run_status,
    }
    (out_root / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    return 1 if failed else 0


def run_acceptance_suite(selector: str = "all", verbose: int = 0) -> int:
    """Run one named acceptance suite and print a line per criterion.

    Returns a process exit status: zero when every selected criterion
    passes.
    """
    from .acceptance import run_suite

    results = run_suite(selector)
    worst = 0
    for result in results:
        flag = "PASS" if result.passed else "FAIL"
        print(f"[{flag}] {result.name}: {result.detail}")
        if verbose:
            for line in result.lines:
                print(f"       {line}")
        if not result.passed:
            worst = 1
    return worst
