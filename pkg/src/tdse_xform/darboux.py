"""Time-dependent Darboux transformation of the TDSE.

A seed solution exp(-chi) of ``i psi_t = -psi_xx + V0 psi`` defines the
intertwining operator ``L = L1(t) (d/dx + chi_x)`` and the partner potential

    V1 = V0 + 2 chi_xx + i (log L1)_t,   L1 = exp(-2 ∫_{t0}^t Im chi_xx ds),

which is real exactly when Im chi is quadratic in x.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .core import (
    SampledTime,
    SpaceTimeField,
    SpatialGrid,
    cumulative_simpson_along,
    diff_array,
    exp_integral,
    fd_weights,
    mesh,
    sample,
    unwrap_log,
)
from .core import expr as E
from .core.timefunc import AnalyticTime
from .errors import XformError

ANALYTIC_REALITY_TOL = 1e-8


@dataclass
class SeedSamples:
    """chi = chi0 + i chi1 and its derivatives at a set of points."""

    chi: np.ndarray
    chi_x: np.ndarray
    chi_xx: np.ndarray
    chi_xxx: np.ndarray
    chi_t: np.ndarray
    V0: np.ndarray


class SeedSolution:
    """Complex log ``chi`` of a TDSE solution ``exp(-chi)`` with potential V0."""

    analytic = True

    def samples(self, x, t):
        raise NotImplementedError

    def chi1_xx_time(self, x_ref, t0, axis):
        """Im chi_xx at ``x_ref`` as a time function."""
        raise NotImplementedError

    def chi0_slice_expr(self, t0):
        """Re chi at ``t = t0`` as an Expr in x, when available."""
        return None

    def chi1_expr(self):
        return None

    def psi(self, x, t):
        return np.exp(-self.samples(x, t).chi)


class ExprSeed(SeedSolution):
    def __init__(self, chi0, chi1, V0):
        self.chi0 = E.as_expr(chi0)
        self.chi1 = E.as_expr(chi1)
        self.V0 = E.as_expr(V0)

    def samples(self, x, t):
        c0, c1 = self.chi0, self.chi1

        def both(k):
            return c0.diff_n("x", k)(x, t) + 1j * c1.diff_n("x", k)(x, t)

        return SeedSamples(
            chi=both(0),
            chi_x=both(1),
            chi_xx=both(2),
            chi_xxx=both(3),
            chi_t=c0.diff("t")(x, t) + 1j * c1.diff("t")(x, t),
            V0=self.V0(x, t),
        )

    def chi1_xx_time(self, x_ref, t0, axis):
        return AnalyticTime(self.chi1.diff_n("x", 2).subs("x", x_ref), t0, axis)

    def chi0_slice_expr(self, t0):
        return self.chi0.subs("t", t0)

    def chi1_expr(self):
        return self.chi1


class SampledSeed(SeedSolution):
    """Seed known only on a space-time mesh; derivatives by finite differences."""

    analytic = False

    def __init__(self, chi, V0):
        if not isinstance(chi, SpaceTimeField):
            raise TypeError("chi must be a SpaceTimeField")
        self.grid, self.axis = chi.grid, chi.axis
        v = chi.values
        dx, dt = self.grid.dx, self.axis.dt
        self._s = SeedSamples(
            chi=v,
            chi_x=diff_array(v, dx, 1, axis=1),
            chi_xx=diff_array(v, dx, 2, axis=1),
            chi_xxx=diff_array(v, dx, 3, axis=1),
            chi_t=diff_array(v, dt, 1, axis=0),
            V0=np.broadcast_to(np.real(V0.values if isinstance(V0, SpaceTimeField) else V0), v.shape),
        )

    @classmethod
    def from_psi(cls, psi, V0):
        return cls(unwrap_log(psi), V0)

    def samples(self, x, t):
        shape = np.broadcast_shapes(np.shape(x), np.shape(t))
        if shape != self._s.chi.shape:
            raise XformError("mismatched-discretization", "sampled seed lives on its own mesh")
        return self._s

    def chi1_xx_time(self, x_ref, t0, axis):
        j = int(round((x_ref - self.grid.x_min) / self.grid.dx))
        return SampledTime(self.axis, self._s.chi_xx[:, j].imag)


def seed_residual(seed, grid, axis):
    """max |chi0_t + chi1_xx - 2 chi0_x chi1_x| and max |V0 - (chi1_t - chi0_xx - chi1_x^2 + chi0_x^2)|."""
    x, t = mesh(grid, axis)
    s = seed.samples(x, t)
    c0x, c1x = s.chi_x.real, s.chi_x.imag
    im_res = s.chi_t.real + s.chi_xx.imag - 2 * c0x * c1x
    re_res = s.V0 - (s.chi_t.imag - s.chi_xx.real - c1x**2 + c0x**2)
    return float(np.max(np.abs(im_res))), float(np.max(np.abs(re_res)))


def check_reality(seed, grid, axis):
    """max |Im chi_xxx| over the mesh."""
    x, t = mesh(grid, axis)
    return float(np.max(np.abs(seed.samples(x, t).chi_xxx.imag)))


def _sampled_tolerance(seed, grid, axis):
    # 10 x the chi_xxx stencil error: Richardson estimate of the truncation
    # part plus the rounding part eps |chi1| sum|w| / dx^3
    x, t = mesh(grid, axis)
    fine = seed.samples(x, t).chi.imag
    # worst stencil is the one-sided one at the edge
    w = max(np.sum(np.abs(fd_weights(tuple(range(-i, 7 - i)), 3))) for i in range(4))
    rounding = np.finfo(float).eps * max(1.0, float(np.max(np.abs(fine)))) * w / grid.dx**3
    if grid.n < 15:
        return max(10.0 * rounding, 1e-6)
    coarse = fine[:, ::2]
    d_fine = diff_array(fine, grid.dx, 3, axis=1)[:, ::2]
    d_coarse = diff_array(coarse, 2 * grid.dx, 3, axis=1)
    est = np.max(np.abs(d_fine - d_coarse)[:, 4:-4]) / 15.0
    return 10.0 * (est + rounding)


@dataclass
class DarbouxOperator:
    """``L = L1(t) (d/dx + chi_x)`` built from ``seed``."""

    seed: SeedSolution
    L1: object
    imxx: object  # Im chi_xx at x_ref, a time function
    x_ref: float
    t0: float

    def chi_x(self, x, t):
        return self.seed.samples(x, t).chi_x

    def log_l1_rate(self, t):
        """(log L1)_t = -2 Im chi_xx(x_ref, t)."""
        return -2.0 * np.asarray(self.imxx(t))

    def potential(self, x, t):
        s = self.seed.samples(x, t)
        return s.V0 + 2 * s.chi_xx + 1j * self.log_l1_rate(t)

    def potential_samples(self, grid, axis):
        x, t = mesh(grid, axis)
        return SpaceTimeField(grid, axis, self.potential(x, t))


def build_darboux(seed, grid, axis, t0=None, tol=None):
    """Operator and partner potential for ``seed`` on the given window.

    Returns ``(op, V1)`` with ``V1`` a callable for analytic seeds and a
    :class:`SpaceTimeField` otherwise.
    """
    t0 = axis.t0 if t0 is None else t0
    if tol is None:
        tol = ANALYTIC_REALITY_TOL if seed.analytic else _sampled_tolerance(seed, grid, axis)
    defect = check_reality(seed, grid, axis)
    if defect > tol:
        raise XformError("reality-violated", f"max |Im chi_xxx| = {defect:.3e} > {tol:.3e}")
    x_ref = 0.5 * (grid.x_min + grid.x_max)
    if not seed.analytic:
        x_ref = grid.points[grid.n // 2]
    x, t = mesh(grid, axis)
    s = seed.samples(x, t)
    imxx_fn = seed.chi1_xx_time(x_ref, t0, axis if not seed.analytic else None)
    spread = np.max(np.abs(s.chi_xx.imag - np.asarray(imxx_fn(axis.times))[:, None]))
    if spread > tol * max(1.0, grid.x_max - grid.x_min):
        raise XformError("reality-violated", f"Im chi_xx varies with x by {spread:.3e}")
    L1 = exp_integral(imxx_fn, -2.0, t0)
    op = DarbouxOperator(seed, L1, imxx_fn, x_ref, t0)
    V1 = op.potential(x, t)
    imag = float(np.max(np.abs(V1.imag)))
    if imag > tol * max(1.0, float(np.max(np.abs(V1.real)))):
        raise XformError("reality-violated", f"max |Im V1| = {imag:.3e}")
    if seed.analytic:
        return op, op.potential
    return op, SpaceTimeField(grid, axis, V1)


def apply_L(op, psi0, grid=None, axis=None):
    """``psi1 = L1 (psi0_x + chi_x psi0)``.

    An Expr ``psi0`` (with an analytic seed) gives an exact callable; a
    :class:`SpaceTimeField` gives samples with 4th-order x-derivatives. Any
    other callable is sampled on ``grid`` x ``axis`` first.
    """
    if isinstance(psi0, E.Expr) and op.seed.analytic:
        dpsi = psi0.diff("x")

        def psi1(x, t):
            return op.L1(t) * (dpsi(x, t) + op.chi_x(x, t) * psi0(x, t))

        return psi1
    if not isinstance(psi0, SpaceTimeField):
        if grid is None or axis is None:
            raise ValueError("a grid and axis are needed to sample psi0")
        psi0 = sample(psi0, grid, axis)
    x, t = mesh(psi0.grid, psi0.axis)
    v = psi0.values
    dv = diff_array(v, psi0.grid.dx, 1, axis=1)
    l1 = np.asarray(op.L1(psi0.axis.times))[:, None]
    return psi0.with_values(l1 * (dv + op.chi_x(x, t) * v))


def _x_index(grid, x0):
    j = int(round((x0 - grid.x_min) / grid.dx))
    if j < 0 or j >= grid.n or abs(grid.x_min + j * grid.dx - x0) > 1e-9 * max(1.0, grid.dx):
        raise XformError("out-of-range", f"x0 = {x0} is not a grid point")
    return j


def _anchor_derivative(v, j0, h, width=7):
    # c0(t) depends only on psi1_x at the anchor, so it gets its own
    # 6th-order stencil, one-sided when the anchor sits near an edge
    n = v.shape[1]
    start = min(max(j0 - width // 2, 0), n - width)
    w = fd_weights(tuple(range(start - j0, start - j0 + width)), 1)
    return sum(wk * v[:, start + k] for k, wk in enumerate(w)) / h


def inverse_darboux(op, psi1, x0=None, t0=None):
    """Recover a V0 solution from a V1 solution ``psi1`` (samples).

    psi0 = exp(-chi)/L1 [∫_{x0}^x exp(chi) psi1 dy + c0(t)], with
    c0(t) = i L1 ∫_{t0}^t exp(chi(x0,s))/L1 (psi1_x - chi_x psi1)(x0, s) ds.
    """
    grid, axis = psi1.grid, psi1.axis
    x0 = grid.x_min if x0 is None else x0
    t0 = axis.t0 if t0 is None else t0
    if abs(t0 - axis.t0) > 1e-12:
        raise XformError("out-of-range", "the time anchor must be the axis start")
    j0 = _x_index(grid, x0)
    x, t = mesh(grid, axis)
    s = op.seed.samples(x, t)
    v = psi1.values
    integrand = np.exp(s.chi) * v
    G = np.zeros_like(integrand)
    G[:, j0:] = cumulative_simpson_along(integrand[:, j0:], grid.dx, axis=1) if grid.n - j0 > 1 else 0
    if j0 > 0:
        left = integrand[:, : j0 + 1][:, ::-1]
        G[:, : j0 + 1] = -cumulative_simpson_along(left, grid.dx, axis=1)[:, ::-1]
    l1 = np.asarray(op.L1(axis.times), dtype=float)
    dv = _anchor_derivative(v, j0, grid.dx)
    edge = np.exp(s.chi[:, j0]) / l1 * (dv - s.chi_x[:, j0] * v[:, j0])
    c0 = 1j * l1 * cumulative_simpson_along(edge, axis.dt)
    psi0 = np.exp(-s.chi) / l1[:, None] * (G + c0[:, None])
    return psi1.with_values(psi0)


@dataclass(frozen=True)
class IntegrabilityReport:
    value: float
    status: str  # "decaying" or "non-decaying"


def square_integrability_diagnostic(vbar, grid, growth_tol=1e-3):
    """Truncated ∫|Vbar|(1 + |xbar|) dxbar over ``grid``; advisory only.

    The status compares the full window with its central half: a relative
    increase above ``growth_tol`` marks the potential as non-decaying.
    """
    xb = grid.points
    w = np.abs(np.asarray(vbar(xb, 0.0))) * (1 + np.abs(xb))
    value = float(simpson(w, x=xb))
    half = SpatialGrid(0.5 * (grid.x_min + grid.x_max) - 0.25 * (grid.x_max - grid.x_min),
                       0.5 * (grid.x_min + grid.x_max) + 0.25 * (grid.x_max - grid.x_min),
                       (grid.n - 1) // 2 + 1)
    xh = half.points
    inner = float(simpson(np.abs(np.asarray(vbar(xh, 0.0))) * (1 + np.abs(xh)), x=xh))
    growing = abs(value - inner) > growth_tol * max(abs(value), 1e-300)
    return IntegrabilityReport(value, "non-decaying" if growing else "decaying")
