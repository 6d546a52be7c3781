"""Shared geometry, schedules, and randomness for the saddle-point solvers.

Everything downstream works on a product feasible set ``Z = X x Y`` where both
factors are axis-aligned boxes and the dual box has a zero lower bound.  This
module owns those set types, Euclidean projection onto them, the step and
smoothing-radius schedules, and a seeded sampler with substreams so every
stochastic component of a run can be replayed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

Vector = NDArray[np.float64]

_TAIL_TOL = 1e-12


def _as_vector(values, name: str) -> Vector:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class JointPoint:
    """A primal-dual pair ``(x, y)`` treated as one point of the product space.

    Attributes:
        x: Primal coordinates, shape ``(d_x,)``.
        y: Dual coordinates, shape ``(d_y,)``.  May be empty for problems
            without inequality constraints.
    """

    x: Vector
    y: Vector

    def __post_init__(self) -> None:
        x = _as_vector(self.x, "x")
        y = _as_vector(self.y, "y")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise ValueError("joint point coordinates must be finite")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def d_x(self) -> int:
        return self.x.shape[0]

    @property
    def d_y(self) -> int:
        return self.y.shape[0]

    @property
    def dimension(self) -> int:
        return self.d_x + self.d_y

    def as_array(self) -> Vector:
        """Concatenated ``[x; y]`` copy of the point."""
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_array(cls, z: Vector, d_x: int) -> "JointPoint":
        z = _as_vector(z, "z")
        if not 0 <= d_x <= z.shape[0]:
            raise ValueError(f"d_x={d_x} incompatible with a point of length {z.shape[0]}")
        return cls(x=z[:d_x].copy(), y=z[d_x:].copy())


@dataclass(frozen=True, eq=False)
class BoxSet:
    """Axis-aligned box ``{p : lower <= p <= upper}``.

    Attributes:
        lower: Componentwise lower bounds.
        upper: Componentwise upper bounds, ``upper >= lower`` everywhere.
    """

    lower: Vector
    upper: Vector

    def __post_init__(self) -> None:
        lower = _as_vector(self.lower, "lower")
        upper = _as_vector(self.upper, "upper")
        if lower.shape != upper.shape:
            raise ValueError(
                f"bound shapes differ: {lower.shape} vs {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("box bounds must be finite")
        if np.any(lower > upper):
            bad = int(np.argmax(lower > upper))
            raise ValueError(
                f"lower bound exceeds upper bound at index {bad}: "
                f"{lower[bad]} > {upper[bad]}"
            )
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def contains(self, point: Vector, atol: float = 0.0) -> bool:
        point = _as_vector(point, "point")
        if point.shape != self.lower.shape:
            raise ValueError(
                f"point of length {point.shape[0]} vs box of dimension {self.dimension}"
            )
        return bool(
            np.all(point >= self.lower - atol) and np.all(point <= self.upper + atol)
        )

    def sample_uniform(self, sampler: "SeededSampler") -> Vector:
        """Draw a point uniformly from the box."""
        unit = sampler.uniform(self.dimension)
        return self.lower + unit * (self.upper - self.lower)


@dataclass(frozen=True, eq=False)
class ProductFeasibleSet:
    """The feasible product ``Z = X x Y`` with a dual box anchored at zero."""

    primal: BoxSet
    dual: BoxSet

    def __post_init__(self) -> None:
        if self.dual.dimension and np.any(self.dual.lower != 0.0):
            raise ValueError("dual box must have a zero lower bound")

    @property
    def d_x(self) -> int:
        return self.primal.dimension

    @property
    def d_y(self) -> int:
        return self.dual.dimension

    @property
    def dimension(self) -> int:
        return self.d_x + self.d_y

    @property
    def diameter(self) -> float:
        """Largest distance between two points of the product set."""
        return float(
            np.hypot(self.primal.diameter, self.dual.diameter)
        )

    def concatenated_bounds(self) -> tuple[Vector, Vector]:
        lower = np.concatenate([self.primal.lower, self.dual.lower])
        upper = np.concatenate([self.primal.upper, self.dual.upper])
        return lower, upper

    def contains(self, z: JointPoint, atol: float = 0.0) -> bool:
        return self.primal.contains(z.x, atol) and self.dual.contains(z.y, atol)


def project_box(point: Vector, box: BoxSet) -> Vector:
    """Euclidean projection of ``point`` onto ``box`` (componentwise clamp).

    Raises:
        ValueError: On dimension mismatch or non-finite input.
    """
    point = _as_vector(point, "point")
    if point.shape != box.lower.shape:
        raise ValueError(
            f"point of length {point.shape[0]} vs box of dimension {box.dimension}"
        )
    if point.shape[0] and not np.all(np.isfinite(point)):
        raise ValueError("cannot project a non-finite point")
    return np.minimum(np.maximum(point, box.lower), box.upper)


def project_product(z: JointPoint, feasible: ProductFeasibleSet) -> JointPoint:
    """Project a joint point onto ``X x Y``, factor by factor."""
    return JointPoint(
        x=project_box(z.x, feasible.primal),
        y=project_box(z.y, feasible.dual),
    )


@dataclass(frozen=True)
class StepSchedule:
    """Step-size rule ``eta_k``.

    ``constant`` keeps ``eta0`` for every iteration; ``diminishing`` uses
    ``eta0 / sqrt(k + 1)``.

    Attributes:
        kind: Either ``"constant"`` or ``"diminishing"``.
        eta0: Base step size, strictly positive.
    """

    kind: str
    eta0: float

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "diminishing"):
            raise ValueError(f"unknown step schedule kind {self.kind!r}")
        if not (np.isfinite(self.eta0) and self.eta0 > 0.0):
            raise ValueError(f"eta0 must be positive and finite, got {self.eta0}")

    def value(self, k: int) -> float:
        if k < 0:
            raise ValueError(f"iteration index must be nonnegative, got {k}")
        if self.kind == "constant":
            return self.eta0
        return self.eta0 / np.sqrt(k + 1.0)


@dataclass(frozen=True)
class RadiusSchedule:
    """Smoothing-radius rule ``r_k = min(c / (k + 1)**p, cap)``.

    ``p > 1`` makes both ``sum r_k`` and ``sum r_k**2`` finite, which the
    convergence guarantees rely on; the cap keeps early radii inside the
    evaluability margin of the oracle.

    Attributes:
        c: Scale of the decaying branch, strictly positive.
        p: Decay exponent, strictly greater than one.
        cap: Upper clamp on the radius, strictly positive.
    """

    c: float
    p: float
    cap: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"c must be positive and finite, got {self.c}")
        if not (np.isfinite(self.p) and self.p > 1.0):
            raise ValueError(f"p must exceed 1 for summable radii, got {self.p}")
        if not (np.isfinite(self.cap) and self.cap > 0.0):
            raise ValueError(f"cap must be positive and finite, got {self.cap}")

    def value(self, k: int) -> float:
        if k < 0:
            raise ValueError(f"iteration index must be nonnegative, got {k}")
        return min(self.c / (k + 1.0) ** self.p, self.cap)

    def _capped_count(self) -> int:
        # r_k sits at the cap exactly while (k + 1)**p <= c / cap.
        ratio = self.c / self.cap
        if ratio < 1.0:
            return 0
        return int(np.floor(ratio ** (1.0 / self.p)))

    def _tail_sum(self, exponent: float, scale: float) -> float:
        """Sum ``scale * n**-exponent`` over all n >= 1, to high accuracy.

        The first terms are summed directly and the remainder is replaced by a
        midpoint integral whose error stays below ``_TAIL_TOL * max(1, scale)``.
        """
        tol = _TAIL_TOL * max(1.0, scale)
        # Midpoint-rule error after n0 terms is below scale*exponent*n0**-(exponent+1)/24.
        n0 = int(np.ceil((scale * exponent / (24.0 * tol)) ** (1.0 / (exponent + 1.0))))
        n0 = max(n0, 16)
        n = np.arange(1, n0 + 1, dtype=np.float64)
        head = float(np.sum(scale * n ** (-exponent)))
        tail = scale * (n0 + 0.5) ** (1.0 - exponent) / (exponent - 1.0)
        return head + tail

    def sum_radii(self) -> float:
        """``sum_{k>=0} r_k``, the total smoothing budget of the schedule."""
        m = self._capped_count()
        full = self._tail_sum(self.p, self.c)
        if m == 0:
            return full
        n = np.arange(1, m + 1, dtype=np.float64)
        head_uncapped = float(np.sum(self.c * n ** (-self.p)))
        return m * self.cap + full - head_uncapped

    def sum_squared_radii(self) -> float:
        """``sum_{k>=0} r_k**2``."""
        m = self._capped_count()
        full = self._tail_sum(2.0 * self.p, self.c**2)
        if m == 0:
            return full
        n = np.arange(1, m + 1, dtype=np.float64)
        head_uncapped = float(np.sum(self.c**2 * n ** (-2.0 * self.p)))
        return m * self.cap**2 + full - head_uncapped


class SeededSampler:
    """Deterministic random source identified by ``(seed, stream)``.

    Two samplers built from the same pair produce byte-identical draw
    sequences on any platform, provided draws are requested in the same
    order.  Distinct streams under one seed are statistically independent,
    so each run of a multi-run experiment can own stream ``run_index``.
    """

    def __init__(self, seed: int, stream: int = 0) -> None:
        if seed < 0 or stream < 0:
            raise ValueError(f"seed and stream must be nonnegative, got {seed}, {stream}")
        self.seed = int(seed)
        self.stream = int(stream)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def standard_normal(self, n: int) -> Vector:
        return self.generator.standard_normal(n)

    def uniform(self, n: int, low: float = 0.0, high: float = 1.0) -> Vector:
        return self.generator.uniform(low, high, size=n)

    def __repr__(self) -> str:
        return f"SeededSampler(seed={self.seed}, stream={self.stream})"


def sample_unit_sphere(d: int, sampler: SeededSampler) -> Vector:
    """Draw a uniform direction on the unit sphere in ``R^d``.

    Normalizes a standard normal vector; for ``d = 1`` this reduces to a
    fair coin over ``{-1, +1}``.
    """
    if d < 1:
        raise ValueError(f"sphere dimension must be at least 1, got {d}")
    v = sampler.standard_normal(d)
    norm = float(np.linalg.norm(v))
    while norm == 0.0:
        v = sampler.standard_normal(d)
        norm = float(np.linalg.norm(v))
    return v / norm


def sample_coordinate_subset(d: int, tau: int, sampler: SeededSampler) -> NDArray[np.int64]:
    """Draw ``tau`` distinct coordinate indices from ``{0, ..., d-1}``.

    Every size-``tau`` subset is equally likely.  When ``tau == d`` the full
    index range is returned directly and the sampler is left untouched, so a
    full-block caller stays draw-for-draw identical to one that never
    samples subsets at all.
    """
    if d < 1:
        raise ValueError(f"dimension must be at least 1, got {d}")
    if not 1 <= tau <= d:
        raise ValueError(f"subset size must satisfy 1 <= tau <= {d}, got {tau}")
    if tau == d:
        return np.arange(d, dtype=np.int64)
    idx = sampler.generator.choice(d, size=tau, replace=False)
    return np.sort(idx.astype(np.int64))
