"""Benchmark problem generators, reference solutions, and problem constants.

Three instance families: a randomized load-tracking program (curtail n users'
consumption to meet a reduced aggregate target at minimal quadratic cost), a
one-variable quadratic program with a hand-checkable saddle point, and a small
nonconvex smoke instance used only for trajectory checks.  The load-tracking
reference solution comes from an independent dual-bisection solver so solver
output is never graded against itself.

All instance oracles are defined on the whole space, not just their boxes, so
perturbed evaluations slightly outside the feasible region are safe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import BoxSet, ProductFeasibleSet, RadiusSchedule, SeededSampler, Vector
from .saddle import BlackBoxProblem, SaddlePoint, TheoryConstants

_BRACKET_LIMIT = 1e9
_BISECT_WIDTH = 1e-12
_BISECT_RESIDUAL = 1e-9
_KKT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LoadTrackingInstance:
    """Load curtailment with quadratic discomfort costs.

    User ``i`` consumes ``u_i`` and can be curtailed by ``x_i`` in
    ``[0, u_i]`` at cost ``a_i x_i^2 + b_i x_i``.  Aggregate consumption after
    curtailment, including per-user loss factors, is
    ``p_c(x) = sum (1 + gamma_i) (u_i - x_i)`` and must not exceed the target
    level ``demand``.  One inequality constraint, so ``d_y = 1``.

    Attributes:
        a: Quadratic cost coefficients, strictly positive (1/kW).
        b: Linear cost coefficients (dimensionless).
        u: Baseline load levels (kW).
        gamma: Loss coefficients (dimensionless).
        demand: Target aggregate consumption level D (kW).
    """

    a: Vector
    b: Vector
    u: Vector
    gamma: Vector
    demand: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "u", "gamma"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        sizes = {self.a.shape[0], self.b.shape[0], self.u.shape[0], self.gamma.shape[0]}
        if len(sizes) != 1:
            raise ValueError("coefficient vectors must share one length")
        if self.n < 1:
            raise ValueError("instance needs at least one user")
        if np.any(self.a <= 0.0):
            raise ValueError("quadratic coefficients must be strictly positive")
        if np.any(self.u < 0.0):
            raise ValueError("baseline loads must be nonnegative")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def d_x(self) -> int:
        return self.n

    @property
    def d_y(self) -> int:
        return 1

    def consumption(self, x: Vector) -> float:
        """Aggregate consumption ``p_c(x)`` after curtailing by ``x``."""
        return float(np.dot(1.0 + self.gamma, self.u - x))

    def objective(self, x: Vector) -> float:
        return float(np.dot(self.a, np.square(x)) + np.dot(self.b, x))

    def objective_grad(self, x: Vector) -> Vector:
        return 2.0 * self.a * x + self.b

    def constraint_values(self, x: Vector) -> Vector:
        return np.array([self.consumption(x) - self.demand])

    def constraints_jac(self, x: Vector) -> np.ndarray:
        return -(1.0 + self.gamma)[np.newaxis, :]

    def primal_box(self) -> BoxSet:
        return BoxSet(lower=np.zeros(self.n), upper=self.u.copy())

    def slater_point(self) -> Vector:
        # Full curtailment zeroes consumption, strictly feasible when demand > 0.
        return self.u.copy()

    def quadratic_data(self) -> tuple[np.ndarray, Vector, np.ndarray, Vector]:
        """``(Q, q, A, c)`` with phi0 = x'Qx + q'x and phi = Ax + c."""
        q_mat = np.diag(self.a)
        a_mat = -(1.0 + self.gamma)[np.newaxis, :]
        offset = np.array([float(np.dot(1.0 + self.gamma, self.u)) - self.demand])
        return q_mat, self.b.copy(), a_mat, offset

    def phi0_lower_bound_on_box(self) -> float:
        """Exact minimum of the separable objective over the primal box."""
        minimizer = np.clip(-self.b / (2.0 * self.a), 0.0, self.u)
        return float(np.dot(self.a, np.square(minimizer)) + np.dot(self.b, minimizer))

    def to_blackbox(self, optimum: SaddlePoint | None = None) -> BlackBoxProblem:
        return BlackBoxProblem(
            d_x=self.n,
            d_y=1,
            objective=self.objective,
            constraints=self.constraint_values,
            objective_grad=self.objective_grad,
            constraints_jac=self.constraints_jac,
            optimum=optimum,
        )


def generate_load_tracking(seed: int, n: int = 100) -> LoadTrackingInstance:
    """Draw a random load-tracking instance.

    Cost and load coefficients come from fixed uniform ranges
    (``a ~ U(0.5, 1.5)``, ``b ~ U(0, 5)``, ``u ~ U(0, 50)`` kW,
    ``gamma ~ U(0.03, 0.15)``) and the target level is set 1500 kW below the
    uncurtailed consumption, so the zero-curtailment point violates the
    constraint by exactly 1500.
    """
    if n < 1:
        raise ValueError(f"instance size must be at least 1, got {n}")
    sampler = SeededSampler(seed)
    a = sampler.uniform(n, 0.5, 1.5)
    b = sampler.uniform(n, 0.0, 5.0)
    u = sampler.uniform(n, 0.0, 50.0)
    gamma = sampler.uniform(n, 0.03, 0.15)
    baseline = float(np.dot(1.0 + gamma, u))
    return LoadTrackingInstance(a=a, b=b, u=u, gamma=gamma, demand=baseline - 1500.0)


def _curtailment_response(instance: LoadTrackingInstance, lam: float) -> Vector:
    """Box-clamped minimizer of the Lagrangian in x for multiplier ``lam``."""
    raw = (lam * (1.0 + instance.gamma) - instance.b) / (2.0 * instance.a)
    return np.clip(raw, 0.0, instance.u)


def _load_gap(instance: LoadTrackingInstance, lam: float) -> float:
    return instance.consumption(_curtailment_response(instance, lam)) - instance.demand


def _verify_kkt(instance: LoadTrackingInstance, x: Vector, lam: float) -> None:
    stationarity = 2.0 * instance.a * x + instance.b - lam * (1.0 + instance.gamma)
    interior = (x > 0.0) & (x < instance.u)
    residual = float(np.max(np.abs(stationarity[interior]), initial=0.0))
    at_lower = float(np.max(-stationarity[x <= 0.0], initial=0.0))
    at_upper = float(np.max(stationarity[x >= instance.u], initial=0.0))
    gap = _load_gap(instance, lam)
    slack = lam * gap
    checks = {
        "interior stationarity": residual,
        "lower-bound multiplier sign": at_lower,
        "upper-bound multiplier sign": at_upper,
        "primal feasibility": gap,
    }
    bad = {k: v for k, v in checks.items() if v > _KKT_TOL}
    if bad or not (-1e-6 <= slack <= 0.0):
        raise RuntimeError(f"reference solution failed KKT verification: {bad}, slack={slack}")


def reference_solve_load_tracking(
    instance: LoadTrackingInstance,
) -> tuple[Vector, float, float]:
    """Solve a load-tracking instance by bisection on the dual multiplier.

    For a fixed multiplier the Lagrangian minimizer in ``x`` is a clamp with a
    closed form, and the constraint value at that minimizer is nonincreasing
    in the multiplier, so the active multiplier is a one-dimensional root.
    Returns ``(x_star, lambda_star, phi0_star)`` after checking KKT residuals
    to 1e-8.

    Raises:
        ValueError: If the instance is infeasible or no bisection bracket
            exists below a multiplier of 1e9.
    """
    if instance.demand < 0.0:
        raise ValueError(
            f"instance is infeasible: full curtailment still exceeds the target "
            f"by {-instance.demand}"
        )
    if _load_gap(instance, 0.0) <= 0.0:
        lam = 0.0
    else:
        hi = 1.0
        while _load_gap(instance, hi) > 0.0:
            hi *= 2.0
            if hi > _BRACKET_LIMIT:
                raise ValueError(
                    f"no bisection bracket for the multiplier below {_BRACKET_LIMIT}"
                )
        lo = 0.0
        while hi - lo > _BISECT_WIDTH:
            mid = 0.5 * (lo + hi)
            gap = _load_gap(instance, mid)
            if gap <= 0.0:
                hi = mid
                if -gap <= _BISECT_RESIDUAL:
                    break
            else:
                lo = mid
        lam = hi  # the feasible side of the bracket
    x = _curtailment_response(instance, lam)
    _verify_kkt(instance, x, lam)
    return x, lam, instance.objective(x)


@dataclass(frozen=True, eq=False)
class ToyQPInstance:
    """A small quadratic program with an analytically known saddle point.

    ``phi0(x) = x'Qx + q'x`` subject to ``Ax + c <= 0`` on box ``X``, with the
    dual confined to box ``Y``.  The stored saddle is validated against the
    projected KKT conditions at construction.
    """

    quadratic: np.ndarray
    linear: Vector
    constraint_matrix: np.ndarray
    constraint_offset: Vector
    primal: BoxSet
    dual: BoxSet
    saddle_x: Vector
    saddle_y: Vector
    optimal_value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "quadratic", np.asarray(self.quadratic, dtype=np.float64))
        object.__setattr__(self, "linear", np.asarray(self.linear, dtype=np.float64))
        object.__setattr__(
            self, "constraint_matrix", np.asarray(self.constraint_matrix, dtype=np.float64)
        )
        object.__setattr__(
            self, "constraint_offset", np.asarray(self.constraint_offset, dtype=np.float64)
        )
        object.__setattr__(self, "saddle_x", np.asarray(self.saddle_x, dtype=np.float64))
        object.__setattr__(self, "saddle_y", np.asarray(self.saddle_y, dtype=np.float64))
        d_x, d_y = self.d_x, self.d_y
        if self.quadratic.shape != (d_x, d_x):
            raise ValueError("quadratic matrix shape mismatch")
        if self.constraint_matrix.shape != (d_y, d_x):
            raise ValueError("constraint matrix shape mismatch")
        if self.constraint_offset.shape != (d_y,):
            raise ValueError("constraint offset shape mismatch")
        if self.dual.dimension != d_y:
            raise ValueError("dual box dimension mismatch")
        self._check_saddle()

    def _check_saddle(self) -> None:
        # Projected stationarity in both blocks, feasibility, complementary
        # slackness; all must hold to 1e-10 for the stored saddle.
        tol = 1e-10
        x, y = self.saddle_x, self.saddle_y
        grad_x = self.objective_grad(x) + self.constraint_matrix.T @ y
        phi = self.constraint_values(x)
        moved_x = np.clip(x - grad_x, self.primal.lower, self.primal.upper)
        moved_y = np.clip(y + phi, self.dual.lower, self.dual.upper)
        problems = {}
        if float(np.max(np.abs(moved_x - x), initial=0.0)) > tol:
            problems["primal stationarity"] = moved_x - x
        if float(np.max(np.abs(moved_y - y), initial=0.0)) > tol:
            problems["dual stationarity"] = moved_y - y
        if float(np.max(phi, initial=0.0)) > tol:
            problems["feasibility"] = phi
        if abs(float(np.dot(y, phi))) > tol:
            problems["complementary slackness"] = float(np.dot(y, phi))
        if abs(self.objective(x) - self.optimal_value) > tol:
            problems["optimal value"] = self.objective(x)
        if problems:
            raise ValueError(f"stored saddle fails KKT validation: {problems}")

    @property
    def d_x(self) -> int:
        return self.primal.dimension

    @property
    def d_y(self) -> int:
        return self.constraint_matrix.shape[0]

    def objective(self, x: Vector) -> float:
        return float(x @ self.quadratic @ x + self.linear @ x)

    def objective_grad(self, x: Vector) -> Vector:
        return 2.0 * (self.quadratic @ x) + self.linear

    def constraint_values(self, x: Vector) -> Vector:
        return self.constraint_matrix @ x + self.constraint_offset

    def constraints_jac(self, x: Vector) -> np.ndarray:
        return self.constraint_matrix.copy()

    def primal_box(self) -> BoxSet:
        return self.primal

    def feasible_set(self) -> ProductFeasibleSet:
        return ProductFeasibleSet(primal=self.primal, dual=self.dual)

    def saddle(self) -> SaddlePoint:
        return SaddlePoint(x=self.saddle_x, y=self.saddle_y, value=self.optimal_value)

    def quadratic_data(self) -> tuple[np.ndarray, Vector, np.ndarray, Vector]:
        return (
            self.quadratic,
            self.linear,
            self.constraint_matrix,
            self.constraint_offset,
        )

    def phi0_lower_bound_on_box(self) -> float:
        diagonal = np.diag(self.quadratic)
        if np.all(np.abs(self.quadratic - np.diag(diagonal)) == 0.0) and np.all(
            diagonal > 0.0
        ):
            minimizer = np.clip(
                -self.linear / (2.0 * diagonal), self.primal.lower, self.primal.upper
            )
            return self.objective(minimizer)
        # Non-separable: fall back to the unconstrained minimum, still a
        # valid lower bound on the box for a convex objective.
        minimizer = np.linalg.solve(2.0 * self.quadratic, -self.linear)
        return self.objective(minimizer)

    def to_blackbox(self) -> BlackBoxProblem:
        return BlackBoxProblem(
            d_x=self.d_x,
            d_y=self.d_y,
            objective=self.objective,
            constraints=self.constraint_values,
            objective_grad=self.objective_grad,
            constraints_jac=self.constraints_jac,
            optimum=self.saddle(),
        )


def make_toy_qp() -> ToyQPInstance:
    """The canonical one-variable test program.

    ``min x^2`` subject to ``1 - x <= 0`` on ``X = [-2, 2]`` with dual box
    ``Y = [0, 4]``.  The constraint is active at the optimum ``x* = 1`` with
    multiplier ``y* = 2`` and value 1.
    """
    return ToyQPInstance(
        quadratic=np.array([[1.0]]),
        linear=np.array([0.0]),
        constraint_matrix=np.array([[-1.0]]),
        constraint_offset=np.array([1.0]),
        primal=BoxSet(lower=np.array([-2.0]), upper=np.array([2.0])),
        dual=BoxSet(lower=np.array([0.0]), upper=np.array([4.0])),
        saddle_x=np.array([1.0]),
        saddle_y=np.array([2.0]),
        optimal_value=1.0,
    )


@dataclass(frozen=True, eq=False)
class NonconvexSmokeInstance:
    """Small nonconvex program for divergence smoke tests only.

    Objective ``sum_i x_i^2 + 0.5 sin(3 x_i)`` over ``[0, upper]^{d_x}`` with
    the single affine constraint ``sum_i (upper - x_i) <= demand``, i.e. the
    total reduction from the box ceiling must stay small enough.  Smooth and
    evaluable everywhere; no ground truth is claimed.
    """

    d_x: int = 10
    upper: float = 5.0
    demand: float = 10.0
    dual_cap: float = 20.0

    def __post_init__(self) -> None:
        if self.d_x < 1:
            raise ValueError("d_x must be at least 1")
        if self.upper <= 0.0 or self.dual_cap <= 0.0:
            raise ValueError("upper and dual_cap must be positive")
        if not 0.0 < self.demand < self.d_x * self.upper:
            raise ValueError("demand must lie strictly between 0 and the box total")

    @property
    def d_y(self) -> int:
        return 1

    def objective(self, x: Vector) -> float:
        return float(np.sum(np.square(x) + 0.5 * np.sin(3.0 * x)))

    def objective_grad(self, x: Vector) -> Vector:
        return 2.0 * x + 1.5 * np.cos(3.0 * x)

    def constraint_values(self, x: Vector) -> Vector:
        return np.array([float(np.sum(self.upper - x)) - self.demand])

    def constraints_jac(self, x: Vector) -> np.ndarray:
        return -np.ones((1, self.d_x))

    def primal_box(self) -> BoxSet:
        return BoxSet(lower=np.zeros(self.d_x), upper=np.full(self.d_x, self.upper))

    def feasible_set(self) -> ProductFeasibleSet:
        dual = BoxSet(lower=np.zeros(1), upper=np.array([self.dual_cap]))
        return ProductFeasibleSet(primal=self.primal_box(), dual=dual)

    def to_blackbox(self) -> BlackBoxProblem:
        return BlackBoxProblem(
            d_x=self.d_x,
            d_y=1,
            objective=self.objective,
            constraints=self.constraint_values,
            objective_grad=self.objective_grad,
            constraints_jac=self.constraints_jac,
        )


def build_dual_box(instance, slater_point: Vector) -> BoxSet:
    """Bound the dual box from a strictly feasible point.

    The optimal multipliers of a convex program with a strictly feasible
    point ``xbar`` satisfy
    ``|y*|_1 <= (phi0(xbar) - min_X phi0) / min_j(-phi_j(xbar))``; the bound
    is doubled for margin and used as the ceiling of ``[0, y_max]^{d_y}``.

    Raises:
        ValueError: If the provided point is not strictly feasible.
    """
    d_y = instance.d_y
    if d_y == 0:
        return BoxSet(lower=np.zeros(0), upper=np.zeros(0))
    slater_point = np.asarray(slater_point, dtype=np.float64)
    phi = np.asarray(instance.constraint_values(slater_point), dtype=np.float64)
    if np.any(phi >= 0.0):
        raise ValueError(
            f"slater point must be strictly feasible, got constraint values {phi}"
        )
    margin = float(np.min(-phi))
    y_max = 2.0 * (instance.objective(slater_point) - instance.phi0_lower_bound_on_box()) / margin
    box = BoxSet(lower=np.zeros(d_y), upper=np.full(d_y, y_max))
    saddle_y = getattr(instance, "saddle_y", None)
    if saddle_y is not None and np.any(np.asarray(saddle_y) > y_max):
        raise ValueError(
            f"dual bound {y_max} fails to contain the known multiplier {saddle_y}"
        )
    return box


def compute_theory_constants(
    instance, feasible: ProductFeasibleSet, radius: RadiusSchedule
) -> TheoryConstants:
    """Constants of the convergence bounds for a quadratic/affine instance.

    The Lagrangian of such an instance has a constant Hessian, so the
    smoothness constant is its spectral norm.  The gradient bound is the
    componentwise supremum of the affine gradient over the product box (the
    boxwise interval bound, tight when one corner maximizes every component).
    Radius totals are summed to convergence.

    Raises:
        ValueError: For instances without quadratic/affine structure.
    """
    if not hasattr(instance, "quadratic_data"):
        raise ValueError("constants unavailable: instance is not quadratic/affine")
    q_mat, q_vec, a_mat, _ = instance.quadratic_data()
    d_x = q_vec.shape[0]
    d_y = a_mat.shape[0]
    if feasible.d_x != d_x or feasible.d_y != d_y:
        raise ValueError(
            f"feasible set of shape ({feasible.d_x}, {feasible.d_y}) vs instance "
            f"({d_x}, {d_y})"
        )

    hessian = np.zeros((d_x + d_y, d_x + d_y))
    hessian[:d_x, :d_x] = 2.0 * q_mat
    hessian[:d_x, d_x:] = a_mat.T
    hessian[d_x:, :d_x] = a_mat
    smoothness = float(np.max(np.abs(np.linalg.eigvalsh(hessian))))

    lower, upper = feasible.concatenated_bounds()
    mid = 0.5 * (lower + upper)
    half = 0.5 * (upper - lower)
    # grad f = [2Q x + q + A' y; A x + c]: affine in z, so each component's
    # supremum over the box has the interval closed form |center| + |coef|.h.
    coeffs = np.zeros((d_x + d_y, d_x + d_y))
    coeffs[:d_x, :d_x] = 2.0 * q_mat
    coeffs[:d_x, d_x:] = a_mat.T
    coeffs[d_x:, :d_x] = a_mat
    constants = np.concatenate([q_vec, instance.quadratic_data()[3]])
    centers = constants + coeffs @ mid
    sups = np.abs(centers) + np.abs(coeffs) @ half
    gradient_bound = float(np.linalg.norm(sups))

    m1 = radius.sum_radii()
    m2 = radius.sum_squared_radii()
    m3 = (np.sqrt(d_x) + np.sqrt(d_y)) * m1
    return TheoryConstants(
        gradient_bound=gradient_bound,
        smoothness=smoothness,
        diameter=feasible.diameter,
        radius_sum=m1,
        radius_sq_sum=m2,
        scaled_radius_sum=float(m3),
    )


_INSTANCE_KINDS = {
    "load_tracking": LoadTrackingInstance,
    "toy_qp": ToyQPInstance,
    "nonconvex_smoke": NonconvexSmokeInstance,
}


def save_instance(instance, path) -> None:
    """Write an instance to a JSON file, one field per key."""
    if isinstance(instance, LoadTrackingInstance):
        payload = {
            "kind": "load_tracking",
            "a": instance.a.tolist(),
            "b": instance.b.tolist(),
            "u": instance.u.tolist(),
            "gamma": instance.gamma.tolist(),
            "demand": instance.demand,
        }
    elif isinstance(instance, ToyQPInstance):
        payload = {
            "kind": "toy_qp",
            "quadratic": instance.quadratic.tolist(),
            "linear": instance.linear.tolist(),
            "constraint_matrix": instance.constraint_matrix.tolist(),
            "constraint_offset": instance.constraint_offset.tolist(),
            "primal_lower": instance.primal.lower.tolist(),
            "primal_upper": instance.primal.upper.tolist(),
            "dual_lower": instance.dual.lower.tolist(),
            "dual_upper": instance.dual.upper.tolist(),
            "saddle_x": instance.saddle_x.tolist(),
            "saddle_y": instance.saddle_y.tolist(),
            "optimal_value": instance.optimal_value,
        }
    elif isinstance(instance, NonconvexSmokeInstance):
        payload = {
            "kind": "nonconvex_smoke",
            "d_x": instance.d_x,
            "upper": instance.upper,
            "demand": instance.demand,
            "dual_cap": instance.dual_cap,
        }
    else:
        raise ValueError(f"cannot serialize instance of type {type(instance).__name__}")
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_instance(path):
    """Read an instance previously written by :func:`save_instance`."""
    payload = json.loads(Path(path).read_text())
    kind = payload.pop("kind", None)
    if kind not in _INSTANCE_KINDS:
        raise ValueError(f"unknown instance kind {kind!r} in {path}")
    if kind == "load_tracking":
        return LoadTrackingInstance(
            a=np.array(payload["a"]),
            b=np.array(payload["b"]),
            u=np.array(payload["u"]),
            gamma=np.array(payload["gamma"]),
            demand=payload["demand"],
        )
    if kind == "toy_qp":
        return ToyQPInstance(
            quadratic=np.array(payload["quadratic"]),
            linear=np.array(payload["linear"]),
            constraint_matrix=np.array(payload["constraint_matrix"]),
            constraint_offset=np.array(payload["constraint_offset"]),
            primal=BoxSet(
                lower=np.array(payload["primal_lower"]),
                upper=np.array(payload["primal_upper"]),
            ),
            dual=BoxSet(
                lower=np.array(payload["dual_lower"]),
                upper=np.array(payload["dual_upper"]),
            ),
            saddle_x=np.array(payload["saddle_x"]),
            saddle_y=np.array(payload["saddle_y"]),
            optimal_value=payload["optimal_value"],
        )
    return NonconvexSmokeInstance(
        d_x=payload["d_x"],
        upper=payload["upper"],
        demand=payload["demand"],
        dual_cap=payload["dual_cap"],
    )
