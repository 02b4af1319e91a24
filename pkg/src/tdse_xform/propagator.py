"""Crank-Nicolson reference propagator and finite-difference TDSE residuals.

Convention throughout: ``i psi_t = -psi_xx + V(x, t) psi``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .core import ComplexField, SpaceTimeField, TimeAxis, SpatialGrid, diff_array, mesh
from .errors import XformError

EDGE_INIT_TOL = 1e-8
EDGE_RUN_TOL = 1e-6


@dataclass(frozen=True)
class PropagationRun:
    grid: SpatialGrid
    axis: TimeAxis
    V: object  # callable V(x, t) or SpaceTimeField on (grid, axis)
    psi_init: ComplexField
    boundary: str = "dirichlet-zero"

    def __post_init__(self):
        if self.boundary != "dirichlet-zero":
            raise ValueError("only dirichlet-zero boundaries are supported")
        if self.psi_init.grid != self.grid:
            raise XformError("mismatched-discretization", "psi_init lives on another grid")
        v = np.abs(self.psi_init.values)
        if max(v[0], v[-1]) > EDGE_INIT_TOL * v.max():
            raise XformError("wavepacket-hit-boundary", "initial state is not supported away from the edges")


def _potential_at(V, x, t, k, axis):
    if isinstance(V, SpaceTimeField):
        # midpoint of two stored slices
        return 0.5 * (V.values[k, 1:-1] + V.values[k + 1, 1:-1]).real
    return np.broadcast_to(np.real(V(x, t)), x.shape)


def propagate(run):
    """Trajectory on ``run.grid`` x ``run.axis``; V is taken at step midpoints."""
    grid, axis = run.grid, run.axis
    dx, dt = grid.dx, axis.dt
    x = grid.points[1:-1]
    n = grid.n - 2
    times = axis.times
    out = np.zeros((axis.m + 1, grid.n), dtype=complex)
    psi = np.asarray(run.psi_init.values, dtype=complex).copy()
    psi[0] = psi[-1] = 0.0
    out[0] = psi
    off = -1.0 / dx**2
    half = 0.5j * dt
    ab = np.empty((3, n), dtype=complex)
    for k in range(axis.m):
        v = _potential_at(run.V, x, times[k] + 0.5 * dt, k, axis)
        diag = 2.0 / dx**2 + v
        inner = psi[1:-1]
        h_psi = diag * inner
        h_psi[1:] += off * inner[:-1]
        h_psi[:-1] += off * inner[1:]
        rhs = inner - half * h_psi
        ab[0, 1:] = half * off
        ab[1] = 1.0 + half * diag
        ab[2, :-1] = half * off
        psi[1:-1] = solve_banded((1, 1), ab, rhs, check_finite=False)
        out[k + 1] = psi
        peak = np.abs(psi).max()
        if max(abs(psi[1]), abs(psi[-2])) > EDGE_RUN_TOL * peak:
            raise XformError("wavepacket-hit-boundary", f"edge amplitude too large at t = {times[k + 1]:.6g}")
    return SpaceTimeField(grid, axis, out)


def norms(traj):
    """Discrete L2 norm (sum |psi|^2 dx) of each time slice."""
    return np.sum(np.abs(traj.values) ** 2, axis=1) * traj.grid.dx


def norm_drift(traj):
    """Largest relative change of the norm over a single step."""
    nrm = norms(traj)
    return float(np.max(np.abs(np.diff(nrm)) / nrm[:-1]))


def residual_field(psi, V):
    """``i psi_t + psi_xx - V psi`` on interior samples.

    Central differences in t (2nd order), 4th-order stencils in x; the first
    and last time slices and two points at each x-edge are dropped.
    """
    grid, axis = psi.grid, psi.axis
    v = psi.values
    psi_t = (v[2:] - v[:-2]) / (2 * axis.dt)
    psi_xx = diff_array(v, grid.dx, 2, axis=1)[1:-1]
    if isinstance(V, SpaceTimeField):
        pot = V.values
    else:
        x, t = mesh(grid, axis)
        pot = np.broadcast_to(V(x, t), v.shape)
    r = 1j * psi_t + psi_xx - pot[1:-1] * v[1:-1]
    return r[:, 2:-2]


def residual(psi, V):
    return float(np.max(np.abs(residual_field(psi, V))))


def compare(trajectory, exact):
    """``(l2_error_final, linf_error)`` after one global phase fix at t0."""
    if trajectory.grid != exact.grid or trajectory.axis != exact.axis:
        raise XformError("mismatched-discretization", "trajectory and exact solution differ in shape")
    a, b = trajectory.values, exact.values
    overlap = np.vdot(a[0], b[0])
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    diff = a * phase - b
    l2 = float(np.sqrt(np.sum(np.abs(diff[-1]) ** 2) * trajectory.grid.dx))
    return l2, float(np.max(np.abs(diff)))
