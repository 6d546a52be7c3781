"""Black-box problem wrapper and the counted Lagrangian oracle.

A constrained program ``min phi0(x) s.t. phi(x) <= 0`` is handled through its
Lagrangian ``f(x, y) = phi0(x) + y . phi(x)``, a convex-concave saddle function
on ``X x Y``.  Solvers only ever see ``f`` through :class:`LagrangianOracle`,
which meters every evaluation; exact gradients, when the problem carries them,
are reserved for first-order baselines and diagnostics.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import JointPoint, Vector

COUNTING_POLICIES = ("per_f_eval", "per_component")

# Distinct x vectors the component-level cache keeps; enough for one shared
# base plus a long dual sweep inside any single estimator call.
_CACHE_CAPACITY = 128


class OracleError(RuntimeError):
    """An oracle produced a non-finite value.

    Attributes:
        x: The primal point that triggered the failure.
        iteration: Filled in by solvers when the failure happens mid-run.
    """

    def __init__(self, message: str, x: Vector, iteration: Optional[int] = None) -> None:
        super().__init__(message)
        self.x = np.array(x, dtype=np.float64)
        self.iteration = iteration


@dataclass(frozen=True, eq=False)
class SaddlePoint:
    """A known optimum: primal solution, multiplier, and optimal value."""

    x: Vector
    y: Vector
    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class BlackBoxProblem:
    """A constrained program exposed through function values only.

    Attributes:
        d_x: Number of decision variables.
        d_y: Number of inequality constraints (may be zero).
        objective: ``phi0``, maps a length-``d_x`` vector to a scalar.
        constraints: ``phi``, maps a length-``d_x`` vector to a length-``d_y``
            vector of constraint values (``<= 0`` means feasible).
        objective_grad: Optional exact gradient of ``phi0``.
        constraints_jac: Optional exact Jacobian of ``phi``, shape
            ``(d_y, d_x)``.
        optimum: Optional known saddle point for diagnostics.

    The callables must be defined on the primal box inflated by the largest
    smoothing radius plus one step, since estimators evaluate at unprojected
    perturbed points.  The bundled benchmark problems satisfy this globally.
    """

    d_x: int
    d_y: int
    objective: Callable[[Vector], float]
    constraints: Callable[[Vector], Vector]
    objective_grad: Optional[Callable[[Vector], Vector]] = None
    constraints_jac: Optional[Callable[[Vector], np.ndarray]] = None
    optimum: Optional[SaddlePoint] = None

    def __post_init__(self) -> None:
        if self.d_x < 1:
            raise ValueError(f"d_x must be at least 1, got {self.d_x}")
        if self.d_y < 0:
            raise ValueError(f"d_y must be nonnegative, got {self.d_y}")

    @property
    def has_exact_gradients(self) -> bool:
        if self.objective_grad is None:
            return False
        return self.d_y == 0 or self.constraints_jac is not None

    def components_at(self, x: Vector) -> tuple[float, Vector]:
        """Evaluate ``(phi0(x), phi(x))`` with finiteness checks, uncounted."""
        phi0 = float(self.objective(x))
        if self.d_y:
            phi = np.asarray(self.constraints(x), dtype=np.float64)
        else:
            phi = np.zeros(0)
        if phi.shape != (self.d_y,):
            raise ValueError(
                f"constraint oracle returned shape {phi.shape}, expected ({self.d_y},)"
            )
        if not np.isfinite(phi0) or not np.all(np.isfinite(phi)):
            raise OracleError("oracle returned a non-finite value", x=x)
        return phi0, phi


class LagrangianOracle:
    """Metered access to ``f(x, y) = phi0(x) + y . phi(x)``.

    Two query counters run side by side.  ``per_f_eval`` charges one unit per
    Lagrangian evaluation, the accounting used for oracle-complexity tables.
    ``per_component`` charges ``d_y + 1`` component evaluations the first time
    an ``x`` is seen and nothing on a repeat, which models a system where the
    constraint values at a cached ``x`` can be re-weighted for free.  The
    ``counting`` policy picks which counter :func:`query_count` reports.
    """

    def __init__(self, problem: BlackBoxProblem, counting: str = "per_f_eval") -> None:
        if counting not in COUNTING_POLICIES:
            raise ValueError(
                f"unknown counting policy {counting!r}; expected one of {COUNTING_POLICIES}"
            )
        self.problem = problem
        self.counting = counting
        self.per_f_eval_count = 0
        self.per_component_count = 0
        self._cache: OrderedDict[bytes, tuple[float, Vector]] = OrderedDict()

    def value(self, x: Vector, y: Vector) -> float:
        """Counted evaluation of the Lagrangian at ``(x, y)``."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.shape != (self.problem.d_x,):
            raise ValueError(
                f"x of shape {x.shape} vs problem with d_x={self.problem.d_x}"
            )
        if y.shape != (self.problem.d_y,):
            raise ValueError(
                f"y of shape {y.shape} vs problem with d_y={self.problem.d_y}"
            )
        self.per_f_eval_count += 1
        key = x.tobytes()
        cached = self._cache.get(key)
        if cached is None:
            phi0, phi = self.problem.components_at(x)
            self.per_component_count += self.problem.d_y + 1
            self._cache[key] = (phi0, phi)
            if len(self._cache) > _CACHE_CAPACITY:
                self._cache.popitem(last=False)
        else:
            phi0, phi = cached
            self._cache.move_to_end(key)
        if self.problem.d_y:
            return phi0 + float(y @ phi)
        return phi0

    def reset_counts(self) -> None:
        self.per_f_eval_count = 0
        self.per_component_count = 0
        self._cache.clear()


def eval_lagrangian(oracle: LagrangianOracle, z: JointPoint) -> float:
    """Counted Lagrangian value at a joint point."""
    return oracle.value(z.x, z.y)


def query_count(oracle: LagrangianOracle) -> int:
    """Query total under the oracle's configured counting policy."""
    if oracle.counting == "per_f_eval":
        return oracle.per_f_eval_count
    return oracle.per_component_count


def eval_operator_exact(oracle: LagrangianOracle, z: JointPoint) -> Vector:
    """The monotone saddle operator ``F(z) = [grad_x f; -grad_y f]`` exactly.

    Needs the problem's analytic gradients; the dual block of ``F`` is just
    ``-phi(x)`` because ``f`` is affine in ``y``.  Uncounted.
    """
    problem = oracle.problem
    if not problem.has_exact_gradients:
        raise ValueError("problem does not carry exact gradients")
    grad_x = np.asarray(problem.objective_grad(z.x), dtype=np.float64)
    if problem.d_y:
        jac = np.asarray(problem.constraints_jac(z.x), dtype=np.float64)
        if jac.shape != (problem.d_y, problem.d_x):
            raise ValueError(
                f"constraint Jacobian has shape {jac.shape}, "
                f"expected ({problem.d_y}, {problem.d_x})"
            )
        grad_x = grad_x + jac.T @ z.y
        phi = np.asarray(problem.constraints(z.x), dtype=np.float64)
        return np.concatenate([grad_x, -phi])
    return grad_x.copy()


@dataclass(frozen=True)
class TheoryConstants:
    """Problem constants the convergence bounds are stated in.

    Attributes:
        gradient_bound: ``G``, a bound on ``|grad f|`` over the feasible set.
        smoothness: ``L``, the largest curvature of ``f`` on the set.
        diameter: Diameter of the product set.
        radius_sum: Total of the smoothing radii.
        radius_sq_sum: Total of the squared radii.
        scaled_radius_sum: Radius sum scaled by ``sqrt(d_x) + sqrt(d_y)``,
            the form the coordinate-method bound consumes.
    """

    gradient_bound: float
    smoothness: float
    diameter: float
    radius_sum: float
    radius_sq_sum: float
    scaled_radius_sum: float

    def __post_init__(self) -> None:
        for name in (
            "gradient_bound",
            "smoothness",
            "diameter",
            "radius_sum",
            "radius_sq_sum",
            "scaled_radius_sum",
        ):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")
