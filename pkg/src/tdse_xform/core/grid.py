"""Uniform space/time discretizations and the sampled fields living on them."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import XformError


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 8:
            raise XformError("grid-too-small", f"need n >= 8, got {self.n}")
        if not self.x_max > self.x_min:
            raise XformError("invalid-grid", "x_max must exceed x_min")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def points(self):
        return np.linspace(self.x_min, self.x_max, self.n)

    def refined(self, factor=2):
        """Grid with the spacing divided by ``factor`` over the same interval."""
        return SpatialGrid(self.x_min, self.x_max, factor * (self.n - 1) + 1)


@dataclass(frozen=True)
class TimeAxis:
    t0: float
    t1: float
    m: int

    def __post_init__(self):
        if self.m < 4:
            raise XformError("axis-too-small", f"need m >= 4, got {self.m}")
        if not self.t1 > self.t0:
            raise XformError("invalid-axis", "t1 must exceed t0")

    @property
    def dt(self):
        return (self.t1 - self.t0) / self.m

    @property
    def times(self):
        return np.linspace(self.t0, self.t1, self.m + 1)

    def refined(self, factor=2):
        return TimeAxis(self.t0, self.t1, factor * self.m)

    def contains(self, t, slack=1e-12):
        t = np.asarray(t)
        pad = slack * max(1.0, abs(self.t1 - self.t0))
        return bool(np.all((t >= self.t0 - pad) & (t <= self.t1 + pad)))


def mesh(grid, axis):
    """Broadcastable ``(x, t)`` arrays of shape ``(1, n)`` and ``(m+1, 1)``."""
    return grid.points[None, :], axis.times[:, None]


@dataclass(frozen=True)
class ComplexField:
    grid: SpatialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.grid.n,):
            raise XformError(
                "mismatched-discretization",
                f"expected {self.grid.n} values, got shape {values.shape}",
            )
        if not np.all(np.isfinite(values)):
            raise XformError("non-finite", "field contains non-finite values")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpaceTimeField:
    """Samples indexed ``values[k, j]`` = f(x_j, t_k)."""

    grid: SpatialGrid
    axis: TimeAxis
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.axis.m + 1, self.grid.n):
            raise XformError(
                "mismatched-discretization",
                f"expected shape {(self.axis.m + 1, self.grid.n)}, got {values.shape}",
            )
        object.__setattr__(self, "values", values)

    def slice_at(self, k):
        return ComplexField(self.grid, self.values[k])

    def with_values(self, values):
        return SpaceTimeField(self.grid, self.axis, values)


def sample(f, grid, axis):
    """Evaluate a callable ``f(x, t)`` on the space-time mesh."""
    x, t = mesh(grid, axis)
    values = np.asarray(f(x, t))
    values = np.broadcast_to(values, (axis.m + 1, grid.n)).copy()
    return SpaceTimeField(grid, axis, values)
