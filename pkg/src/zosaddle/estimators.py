"""Zeroth-order gradient estimators built from function values only.

Two families.  Coordinate estimators probe one basis direction at a time with
a forward difference ``(h(z + r e_i) - h(z)) / r`` and share the base value
across a sweep.  The two-point sphere estimator probes a single random
direction ``v`` on the unit sphere and rescales by the dimension, trading
per-call cost for variance.  Operator-valued variants wrap both for the
saddle setting, where the dual block of the target operator carries a flipped
sign.  Perturbed points are evaluated as-is, without projection; oracles are
expected to tolerate the small excursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .core import JointPoint, Vector
from .saddle import LagrangianOracle

_UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EstimateReport:
    """A gradient estimate together with how it was produced.

    Attributes:
        estimate: The estimated gradient vector.
        radius: Smoothing radius used.
        queries: Function evaluations consumed, matching the closed form for
            the estimator kind.
        perturbation: The sampled direction(s) or the probed index set.
    """

    estimate: Vector
    radius: float
    queries: int
    perturbation: np.ndarray


def _check_radius(r: float) -> float:
    if not (np.isfinite(r) and r > 0.0):
        raise ValueError(f"smoothing radius must be positive, got {r}")
    return float(r)


def coord_partial(h: Callable[[Vector], float], z: Vector, i: int, r: float) -> float:
    """Forward-difference estimate of the i-th partial derivative of ``h``.

    Exact on affine functions; for an L-smooth ``h`` the bias is at most
    ``L * r / 2``.  Consumes 2 evaluations.
    """
    r = _check_radius(r)
    z = np.asarray(z, dtype=np.float64)
    if not 0 <= i < z.shape[0]:
        raise ValueError(f"coordinate index {i} out of range for dimension {z.shape[0]}")
    shifted = z.copy()
    shifted[i] += r
    return (float(h(shifted)) - float(h(z))) / r


def coord_full(h: Callable[[Vector], float], z: Vector, r: float) -> EstimateReport:
    """Full-gradient estimate from forward differences in every coordinate.

    The base value ``h(z)`` is evaluated once and shared, so ``d + 1``
    evaluations cover all ``d`` coordinates.
    """
    r = _check_radius(r)
    z = np.asarray(z, dtype=np.float64)
    d = z.shape[0]
    base = float(h(z))
    estimate = np.empty(d)
    for i in range(d):
        shifted = z.copy()
        shifted[i] += r
        estimate[i] = (float(h(shifted)) - base) / r
    return EstimateReport(
        estimate=estimate,
        radius=r,
        queries=d + 1,
        perturbation=np.arange(d, dtype=np.int64),
    )


def _check_direction(v: Vector, d: int) -> Vector:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (d,):
        raise ValueError(f"direction of shape {v.shape} vs dimension {d}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > _UNIT_NORM_TOL:
        raise ValueError(f"direction must have unit norm, got |v| = {norm}")
    return v


def unige(h: Callable[[Vector], float], z: Vector, r: float, v: Vector) -> Vector:
    """Two-point estimate of the full gradient along one sphere direction.

    Returns ``((h(z + r v) - h(z)) / (r / d)) * v``.  Over uniform ``v`` the
    expectation is the gradient of the sphere-smoothed ``h``.  Consumes 2
    evaluations.
    """
    r = _check_radius(r)
    z = np.asarray(z, dtype=np.float64)
    d = z.shape[0]
    v = _check_direction(v, d)
    diff = float(h(z + r * v)) - float(h(z))
    return (diff * d / r) * v


def unige_operator(oracle: LagrangianOracle, z: JointPoint, r: float, v: Vector) -> Vector:
    """Two-point estimate of the saddle operator ``[grad_x f; -grad_y f]``.

    The joint point is perturbed along ``v`` as drawn, and the dual block of
    the output direction is sign-flipped so the estimate ascends in ``y``.
    Consumes 2 Lagrangian queries.
    """
    r = _check_radius(r)
    d_x, d_y = z.d_x, z.d_y
    d = d_x + d_y
    v = _check_direction(v, d)
    base = oracle.value(z.x, z.y)
    shifted = oracle.value(z.x + r * v[:d_x], z.y + r * v[d_x:])
    scale = (shifted - base) * d / r
    out = scale * v
    if d_y:
        out[d_x:] = -out[d_x:]
    return out


def _block_estimate(
    oracle: LagrangianOracle,
    x: Vector,
    y: Vector,
    idx_x: NDArray[np.int64],
    idx_y: NDArray[np.int64],
    r: float,
) -> tuple[Vector, Vector]:
    """Forward differences of f over selected primal and dual coordinates.

    Returns full-length ``(g_x, g_y)`` with nonzeros only on the selected
    indices.  One shared base evaluation; the dual perturbations reuse the
    base ``x``, so they come right after it to keep the component cache warm.
    """
    base = oracle.value(x, y)
    g_x = np.zeros(x.shape[0])
    g_y = np.zeros(y.shape[0])
    for j in idx_y:
        shifted = y.copy()
        shifted[j] += r
        g_y[j] = (oracle.value(x, shifted) - base) / r
    for i in idx_x:
        shifted = x.copy()
        shifted[i] += r
        g_x[i] = (oracle.value(shifted, y) - base) / r
    return g_x, g_y


def block_coord(
    oracle: LagrangianOracle,
    z: JointPoint,
    idx_x,
    idx_y,
    r: float,
) -> tuple[Vector, Vector]:
    """Block-coordinate estimate of ``(grad_x f, grad_y f)`` at ``z``.

    Probes only the listed coordinates and leaves the rest at zero, consuming
    ``len(idx_x) + len(idx_y) + 1`` queries through the shared base.  The
    primal block must be nonempty; the dual block may be empty only for an
    unconstrained problem.  Because f is affine in y, every dual entry equals
    the corresponding constraint value at ``x`` up to rounding.
    """
    r = _check_radius(r)
    idx_x = np.asarray(idx_x, dtype=np.int64)
    idx_y = np.asarray(idx_y, dtype=np.int64)
    if idx_x.size == 0:
        raise ValueError("primal index set must be nonempty")
    if idx_y.size == 0 and z.d_y > 0:
        raise ValueError("dual index set must be nonempty when constraints exist")
    if idx_x.size and (idx_x.min() < 0 or idx_x.max() >= z.d_x):
        raise ValueError(f"primal index out of range for d_x={z.d_x}: {idx_x}")
    if idx_y.size and (idx_y.min() < 0 or idx_y.max() >= z.d_y):
        raise ValueError(f"dual index out of range for d_y={z.d_y}: {idx_y}")
    if np.unique(idx_x).size != idx_x.size or np.unique(idx_y).size != idx_y.size:
        raise ValueError("index sets must not contain duplicates")
    return _block_estimate(oracle, z.x, z.y, idx_x, idx_y, r)
