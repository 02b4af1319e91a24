"""Real functions of time with first/second derivatives and integrals from t0.

Three flavours share one interface (``f(t)``, ``f.d1(t)``, ``f.d2(t)``,
``f.integral(t)``):

* :class:`AnalyticTime` wraps an :class:`~tdse_xform.core.expr.Expr` in ``t``;
  derivatives are exact and integrals use the antiderivative table when it
  applies.
* :class:`SampledTime` interpolates samples on a :class:`TimeAxis` with a
  cubic spline.
* :class:`GenericTime` is built from callables; it is what the composite
  constructors below fall back to when no closed form exists.
"""

import math

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from ..errors import XformError
from . import expr as E
from .calculus import DEFAULT_PANEL_WIDTH, antiderivative, cumulative_simpson_along, simpson_from


class TimeFunction:
    t0 = 0.0
    axis = None

    def __call__(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    @property
    def expr(self):
        """The underlying Expr for analytic functions, else None."""
        return None

    def integral(self, t):
        """``∫_{t0}^t f(s) ds`` (vectorized in ``t``)."""
        self._check_range(t)
        return simpson_from(self, self.t0, t, self._panel_width())

    def _panel_width(self):
        if self.axis is None:
            return DEFAULT_PANEL_WIDTH
        return min(DEFAULT_PANEL_WIDTH, self.axis.dt)

    def _check_range(self, t):
        if self.axis is not None and not self.axis.contains(t):
            raise XformError(
                "out-of-range",
                f"t outside [{self.axis.t0}, {self.axis.t1}]",
            )

    def is_zero(self):
        return False


class AnalyticTime(TimeFunction):
    def __init__(self, expr, t0=0.0, axis=None):
        expr = E.as_expr(expr)
        if expr.depends_on("x"):
            raise ValueError("a time function may not depend on x")
        self._expr = expr
        self.t0 = float(t0)
        self.axis = axis
        self._anti = None
        self._anti_done = False

    @property
    def expr(self):
        return self._expr

    def __call__(self, t):
        return self._expr(0.0, t)

    def d1(self, t):
        return self._expr.diff("t")(0.0, t)

    def d2(self, t):
        return self._expr.diff_n("t", 2)(0.0, t)

    @property
    def antiderivative(self):
        if not self._anti_done:
            self._anti = antiderivative(self._expr, "t")
            self._anti_done = True
        return self._anti

    def integral(self, t):
        self._check_range(t)
        F = self.antiderivative
        if F is None:
            return simpson_from(self, self.t0, t, self._panel_width())
        return F(0.0, t) - F(0.0, self.t0)

    def is_zero(self):
        return E.const_value(self._expr) == 0

    def __repr__(self):
        return f"AnalyticTime({self._expr})"


class SampledTime(TimeFunction):
    def __init__(self, axis, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (axis.m + 1,):
            raise XformError("mismatched-discretization", "one value per axis node required")
        self.axis = axis
        self.t0 = axis.t0
        self.values = values
        self._spline = CubicSpline(axis.times, values)
        self._anti = self._spline.antiderivative()
        self._nodes = cumulative_simpson_along(values, axis.dt)

    def __call__(self, t):
        self._check_range(t)
        return self._spline(t)

    def d1(self, t):
        self._check_range(t)
        return self._spline(t, 1)

    def d2(self, t):
        self._check_range(t)
        return self._spline(t, 2)

    def integral(self, t):
        # Simpson at the nodes, spline between them
        self._check_range(t)
        t = np.asarray(t, dtype=float)
        k = np.clip(np.floor((t - self.t0) / self.axis.dt).astype(int), 0, self.axis.m)
        tk = self.axis.times[k]
        return self._nodes[k] + self._anti(t) - self._anti(tk)

    def is_zero(self):
        return not np.any(self.values)


class GenericTime(TimeFunction):
    def __init__(self, value, d1, d2, t0=0.0, axis=None):
        self._value, self._d1, self._d2 = value, d1, d2
        self.t0 = float(t0)
        self.axis = axis

    def __call__(self, t):
        return self._value(np.asarray(t, dtype=float))

    def d1(self, t):
        return self._d1(np.asarray(t, dtype=float))

    def d2(self, t):
        return self._d2(np.asarray(t, dtype=float))


def cumulative_integral(f, t):
    return f.integral(t)


def constant(value, t0=0.0, axis=None):
    return AnalyticTime(E.Const(float(value)), t0, axis)


def analytic(text_or_expr, t0=0.0, axis=None):
    if isinstance(text_or_expr, str):
        from .parse import parse_expr

        text_or_expr = parse_expr(text_or_expr)
    return AnalyticTime(text_or_expr, t0, axis)


# ---------------------------------------------------------------------------
# composite constructors: closed form when possible, callables otherwise
# ---------------------------------------------------------------------------


def _closed_integral(f):
    if isinstance(f, AnalyticTime) and f.antiderivative is not None:
        F = f.antiderivative
        return E.sub(F, E.Const(float(F(0.0, f.t0))))
    return None


def _tabulated_integral(f):
    """``∫_{t0}^t f`` on the working axis as a cubic Hermite spline.

    The running integral is tabulated once by composite Simpson on panels
    no wider than the default panel width; node slopes are f itself, so
    lookups are O(1) and nested integrals stay cheap.
    """
    axis = f.axis
    span = axis.t1 - axis.t0
    panels = max(2 * axis.m, 2 * math.ceil(span / (2 * DEFAULT_PANEL_WIDTH)))
    fine = np.linspace(axis.t0, axis.t1, 2 * panels + 1)
    vals = np.asarray(f(fine), dtype=float)
    # Simpson on pairs of half-panels gives the integral at every other node
    h = fine[1] - fine[0]
    pair = h / 3 * (vals[:-2:2] + 4 * vals[1:-1:2] + vals[2::2])
    nodes = fine[::2]
    cum = np.concatenate([[0.0], np.cumsum(pair)])
    spl = CubicHermiteSpline(nodes, cum, vals[::2])
    offset = float(spl(f.t0))

    def value(t):
        f._check_range(t)
        return spl(t) - offset

    return value


def exp_integral(f, k, t0=None):
    """``exp(k ∫_{t0}^t f)``."""
    t0 = f.t0 if t0 is None else t0
    if f.t0 != t0:
        raise ValueError("integration origin mismatch")
    if f.is_zero():
        return constant(1.0, t0, f.axis)
    closed = _closed_integral(f)
    if closed is not None:
        return AnalyticTime(E.exp(E.mul(k, closed)), t0, f.axis)
    integral = _tabulated_integral(f) if f.axis is not None else f.integral

    def value(t):
        return np.exp(k * integral(t))

    def d1(t):
        return k * f(t) * value(t)

    def d2(t):
        ft = f(t)
        return (k * f.d1(t) + k * k * ft * ft) * value(t)

    return GenericTime(value, d1, d2, t0, f.axis)


def integral_of(f, k=1.0):
    """``k ∫_{t0}^t f`` as a time function."""
    if f.is_zero():
        return constant(0.0, f.t0, f.axis)
    closed = _closed_integral(f)
    if closed is not None:
        return AnalyticTime(E.mul(k, closed), f.t0, f.axis)
    integral = _tabulated_integral(f) if f.axis is not None else f.integral
    return GenericTime(
        lambda t: k * integral(t),
        lambda t: k * f(t),
        lambda t: k * f.d1(t),
        f.t0,
        f.axis,
    )


def quotient(num, den):
    """``num / den``."""
    if num.is_zero():
        return constant(0.0, num.t0, num.axis or den.axis)
    if isinstance(num, AnalyticTime) and isinstance(den, AnalyticTime):
        return AnalyticTime(E.div(num.expr, den.expr), num.t0, num.axis or den.axis)

    def d1(t):
        q = den(t)
        return (num.d1(t) * q - num(t) * den.d1(t)) / q**2

    def d2(t):
        n, n1, n2 = num(t), num.d1(t), num.d2(t)
        q, q1, q2 = den(t), den.d1(t), den.d2(t)
        return n2 / q - (2 * n1 * q1 + n * q2) / q**2 + 2 * n * q1**2 / q**3

    return GenericTime(lambda t: num(t) / den(t), d1, d2, num.t0, num.axis or den.axis)


def scaled(f, k):
    """``k f``."""
    if isinstance(f, AnalyticTime):
        return AnalyticTime(E.mul(k, f.expr), f.t0, f.axis)
    return GenericTime(lambda t: k * f(t), lambda t: k * f.d1(t), lambda t: k * f.d2(t), f.t0, f.axis)


def power_of(f, p):
    """``f ** p`` for positive ``f``."""
    if isinstance(f, AnalyticTime):
        return AnalyticTime(E.power(f.expr, p), f.t0, f.axis)

    def d1(t):
        return p * f(t) ** (p - 1) * f.d1(t)

    def d2(t):
        v = f(t)
        return p * (p - 1) * v ** (p - 2) * f.d1(t) ** 2 + p * v ** (p - 1) * f.d2(t)

    return GenericTime(lambda t: f(t) ** p, d1, d2, f.t0, f.axis)
