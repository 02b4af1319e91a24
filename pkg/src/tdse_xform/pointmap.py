"""Form-preserving point transformations of the TDSE.

A transformation is fixed by three real time functions ``A``, ``B``, ``C``
(``C > 0``) and a reference instant ``t0``:

    xbar = x / C(t) + B(t),          tbar = ∫_{t0}^t ds / C(s)^2,
    psi(x, t) = C^{-1/2} exp[(i/4)(C'/C x^2 - 2 B' C x + A)] psibar(xbar, tbar),
    V(x, t) = Vbar(xbar, tbar) / C^2 - C''/(4C) x^2 + (C B''/2 + B' C') x
              - (C^2 B'^2 + A') / 4.

"Push forward" goes from the barred problem to ``(x, t)``; "pull back" goes
the other way. Functions of space-time are plain callables ``f(x, t)`` that
broadcast over numpy arrays (an :class:`~tdse_xform.core.expr.Expr` is one).
"""

from dataclasses import dataclass

import numpy as np

from .core import AnalyticTime, TimeAxis, constant, power_of
from .core.timefunc import TimeFunction, integral_of
from .errors import XformError

SCALE_TOL = 1e-14


@dataclass(frozen=True)
class PointTransform:
    A: TimeFunction
    B: TimeFunction
    C: TimeFunction
    t0: float = 0.0
    axis: TimeAxis = None

    def __post_init__(self):
        if self.C.t0 != self.t0:
            raise ValueError("C must be integrated from the transform's t0")
        if self.axis is not None:
            c = np.asarray(self.C(self.axis.times), dtype=float)
            if np.any(~np.isfinite(c)) or np.any(c <= SCALE_TOL):
                raise XformError("degenerate-scale", "C(t) must stay positive on the axis")
        tbar = integral_of(power_of(self.C, -2.0))
        object.__setattr__(self, "_tbar", tbar)

    @classmethod
    def identity(cls, t0=0.0, axis=None):
        return cls(constant(0.0, t0, axis), constant(0.0, t0, axis), constant(1.0, t0, axis), t0, axis)

    # coordinates ------------------------------------------------------------
    def scale(self, t):
        c = np.asarray(self.C(t), dtype=float)
        if np.any(np.abs(c) <= SCALE_TOL):
            raise XformError("degenerate-scale", "C(t) vanishes")
        return c

    def tbar(self, t):
        return self._tbar(t)

    def map_point(self, x, t):
        return np.asarray(x) / self.scale(t) + self.B(t), self.tbar(t)

    def invert_time(self, tbar, tol=1e-12):
        """Solve tbar(t) = tbar by vectorized bisection on the working axis."""
        if self.axis is None:
            raise XformError("out-of-range", "inverting time needs a working axis")
        tbar = np.asarray(tbar, dtype=float)
        lo_v, hi_v = self.tbar(self.axis.t0), self.tbar(self.axis.t1)
        pad = 1e-12 * max(1.0, abs(hi_v - lo_v))
        if np.any(tbar < lo_v - pad) or np.any(tbar > hi_v + pad):
            raise XformError("out-of-range", "tbar outside the image of the axis")
        lo = np.full(tbar.shape, float(self.axis.t0))
        hi = np.full(tbar.shape, float(self.axis.t1))
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            below = self.tbar(mid) < tbar
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def invert_point(self, xbar, tbar):
        t = self.invert_time(tbar)
        return (np.asarray(xbar) - self.B(t)) * self.scale(t), t

    # the gauge factor ------------------------------------------------------
    def _gauge(self, x, t):
        """C^{-1/2} exp[(i/4)(C'/C x^2 - 2 B' C x + A)]."""
        try:
            c, c1 = self.scale(t), self.C.d1(t)
            b1 = self.B.d1(t)
        except NotImplementedError:
            raise XformError("missing-derivative", "C and B need first derivatives") from None
        x = np.asarray(x)
        phase = 0.25 * (c1 / c * x**2 - 2 * b1 * c * x + self.A(t))
        return c ** -0.5 * np.exp(1j * phase)

    def _potential_terms(self, x, t):
        """-C''/(4C) x^2 + (C B''/2 + B' C') x - (C^2 B'^2 + A')/4."""
        try:
            c, c1, c2 = self.scale(t), self.C.d1(t), self.C.d2(t)
            b1, b2 = self.B.d1(t), self.B.d2(t)
            a1 = self.A.d1(t)
        except NotImplementedError:
            raise XformError("missing-derivative", "C, B need two derivatives, A one") from None
        x = np.asarray(x)
        return -c2 / (4 * c) * x**2 + (c * b2 / 2 + b1 * c1) * x - 0.25 * (c**2 * b1**2 + a1)

    def is_identity(self):
        return all(
            isinstance(f, AnalyticTime) and f.is_zero() for f in (self.A, self.B)
        ) and isinstance(self.C, AnalyticTime) and getattr(self.C.expr, "value", None) == 1.0


def map_point(tr, x, t):
    return tr.map_point(x, t)


def invert_time(tr, tbar):
    return tr.invert_time(tbar)


def pushforward_wavefunction(tr, psibar):
    """psi(x, t) from psibar(xbar, tbar)."""

    def psi(x, t):
        xb, tb = tr.map_point(x, t)
        return tr._gauge(x, t) * psibar(xb, tb)

    return psi


def pullback_wavefunction(tr, psi):
    """psibar(xbar, tbar) from psi(x, t); needs the transform's working axis."""

    def psibar(xbar, tbar):
        x, t = tr.invert_point(xbar, tbar)
        return psi(x, t) / tr._gauge(x, t)

    return psibar


def pullback_at(tr, values, x, t):
    """Barred values at the images of the sample points ``(x, t)``.

    ``values`` are samples of psi at ``(x, t)``; the result is psibar at
    ``map_point(x, t)``. No time inversion is needed.
    """
    return np.asarray(values) / tr._gauge(x, t)


def pushforward_at(tr, values, x, t):
    """Inverse of :func:`pullback_at`."""
    return np.asarray(values) * tr._gauge(x, t)


def transform_potential(tr, vbar):
    """V(x, t) from Vbar(xbar, tbar)."""

    def V(x, t):
        xb, tb = tr.map_point(x, t)
        c = tr.scale(t)
        return vbar(xb, tb) / c**2 + tr._potential_terms(x, t)

    return V


def potential_pullback_at(tr, v_values, x, t):
    """Vbar at ``map_point(x, t)`` from samples of V at ``(x, t)``."""
    c = tr.scale(t)
    return c**2 * (np.asarray(v_values) - tr._potential_terms(x, t))


def inverse_transform_potential(tr, V):
    """Vbar(xbar, tbar) from V(x, t), solving the potential law for Vbar."""

    def vbar(xbar, tbar):
        x, t = tr.invert_point(xbar, tbar)
        return potential_pullback_at(tr, V(x, t), x, t)

    return vbar


def scaling_transform(omega, t0=None, axis=None):
    """The transform with A = B = 0 and C = omega^{-1/2}."""
    t0 = omega.t0 if t0 is None else t0
    zero = constant(0.0, t0, axis or omega.axis)
    return PointTransform(zero, zero, power_of(omega, -0.5), t0, axis or omega.axis)


__all__ = [
    "PointTransform",
    "inverse_transform_potential",
    "invert_time",
    "map_point",
    "potential_pullback_at",
    "pullback_at",
    "pullback_wavefunction",
    "pushforward_at",
    "pushforward_wavefunction",
    "scaling_transform",
    "transform_potential",
]
