"""Differentiation, quadrature and complex-log utilities on uniform grids."""

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import cumulative_simpson, simpson

from ..errors import XformError
from . import expr as E
from .grid import ComplexField, SpaceTimeField

# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def fd_weights(offsets, order):
    """Weights w with sum(w_k f(x + o_k h)) = h**order f^(order)(x) + O(h^p).

    Solves the Vandermonde moment system; exact for polynomials of degree
    < len(offsets).
    """
    offsets = np.asarray(offsets, dtype=float)
    k = len(offsets)
    A = np.vander(offsets, k, increasing=True).T
    rhs = np.zeros(k)
    rhs[order] = math.factorial(order)
    return tuple(np.linalg.solve(A, rhs))


_CENTRAL_HALF_WIDTH = {1: 2, 2: 2, 3: 3}


def diff_array(values, h, order, axis=-1):
    """4th-order finite-difference derivative of ``values`` along ``axis``.

    Symmetric stencils in the interior; off-centred stencils of width
    ``order + 4`` near the edges keep 4th order there too.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    f = np.moveaxis(np.asarray(values), axis, -1)
    n = f.shape[-1]
    if n < 8:
        raise XformError("grid-too-small", f"need at least 8 samples, got {n}")
    r = _CENTRAL_HALF_WIDTH[order]
    out = np.empty(f.shape, dtype=np.result_type(f, float))
    w = fd_weights(tuple(range(-r, r + 1)), order)
    acc = np.zeros(f[..., r:n - r].shape, dtype=out.dtype)
    for j, wj in enumerate(w):
        if wj != 0.0:
            acc += wj * f[..., j:n - 2 * r + j]
    out[..., r:n - r] = acc
    width = order + 4
    for i in list(range(r)) + list(range(n - r, n)):
        start = 0 if i < r else n - width
        offs = tuple(range(start - i, start - i + width))
        wb = fd_weights(offs, order)
        out[..., i] = sum(wj * f[..., start + j] for j, wj in enumerate(wb))
    out /= h ** order
    return np.moveaxis(out, -1, axis)


def diff_x(field, order=1):
    """x-derivative of a ComplexField or SpaceTimeField (same type back)."""
    if isinstance(field, SpaceTimeField):
        return field.with_values(diff_array(field.values, field.grid.dx, order, axis=1))
    if isinstance(field, ComplexField):
        return ComplexField(field.grid, diff_array(field.values, field.grid.dx, order))
    raise TypeError("diff_x expects a ComplexField or SpaceTimeField")


def diff_t(field, order=1):
    """t-derivative of a SpaceTimeField with the same stencils as ``diff_x``."""
    return field.with_values(diff_array(field.values, field.axis.dt, order, axis=0))


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

DEFAULT_PANEL_WIDTH = 2.0 ** -10


def simpson_from(f, t0, t, h=DEFAULT_PANEL_WIDTH):
    """Composite Simpson of a vectorized ``f`` over ``[t0, t]`` for each t.

    All requested upper limits share one panel count, chosen so that the
    longest interval uses panels no wider than ``h``.
    """
    t = np.asarray(t, dtype=float)
    flat, inverse = np.unique(t.ravel(), return_inverse=True)
    span = np.max(np.abs(flat - t0)) if flat.size else 0.0
    if span == 0.0:
        return np.zeros(t.shape)
    n_panels = max(2, 2 * math.ceil(span / (2 * h)))
    u = np.linspace(0.0, 1.0, n_panels + 1)
    s = t0 + (flat - t0)[:, None] * u[None, :]
    vals = np.asarray(f(s))
    vals = np.broadcast_to(vals, s.shape)
    res = simpson(vals, x=u, axis=-1) * (flat - t0)
    return res[inverse].reshape(t.shape)


def cumulative_simpson_along(values, h, axis=-1):
    """Cumulative integral from the first sample, composite Simpson, 0 at start."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        # scipy casts complex input to real internally
        re = cumulative_simpson(values.real, dx=h, axis=axis, initial=0)
        im = cumulative_simpson(values.imag, dx=h, axis=axis, initial=0)
        return re + 1j * im
    return cumulative_simpson(values, dx=h, axis=axis, initial=0)


# ---------------------------------------------------------------------------
# exact antiderivatives from a fixed table
# ---------------------------------------------------------------------------


def _trim(c):
    c = np.atleast_1d(np.asarray(c, dtype=float))
    k = len(c)
    while k > 1 and c[k - 1] == 0.0:
        k -= 1
    return c[:k]


def as_rational(e, var):
    """``(num, den)`` ascending coefficient arrays if ``e`` is a rational
    function of ``var`` with real numeric coefficients, else None."""
    if not e.depends_on(var):
        if e.variables:
            return None
        v = E.const_value(e)
        if v is None or np.iscomplexobj(v):
            return None
        return _trim([float(v)]), _trim([1.0])
    if isinstance(e, E.Var):
        return _trim([0.0, 1.0]), _trim([1.0])
    if isinstance(e, (E.Add, E.Sub, E.Mul, E.Div)):
        ra, rb = as_rational(e.a, var), as_rational(e.b, var)
        if ra is None or rb is None:
            return None
        (na, da), (nb, db) = ra, rb
        if isinstance(e, E.Add):
            return _trim(P.polyadd(P.polymul(na, db), P.polymul(nb, da))), _trim(P.polymul(da, db))
        if isinstance(e, E.Sub):
            return _trim(P.polysub(P.polymul(na, db), P.polymul(nb, da))), _trim(P.polymul(da, db))
        if isinstance(e, E.Mul):
            return _trim(P.polymul(na, nb)), _trim(P.polymul(da, db))
        return _trim(P.polymul(na, db)), _trim(P.polymul(da, nb))
    if isinstance(e, E.Pow) and e.exponent.is_integer():
        rb = as_rational(e.base, var)
        if rb is None:
            return None
        nb, db = rb
        k = int(e.exponent)
        if k < 0:
            nb, db, k = db, nb, -k
        return _trim(P.polypow(nb, k)), _trim(P.polypow(db, k))
    return None


def as_polynomial(e, var):
    r = as_rational(e, var)
    if r is None or len(r[1]) != 1:
        return None
    return _trim(r[0] / r[1][0])


def _poly(c, v):
    return E.polynomial([float(a) for a in c], v)


def _rational_antiderivative(num, den, v):
    q, r = P.polydiv(num, den) if len(den) > 1 else (num / den[0], np.zeros(1))
    q, r = _trim(q), _trim(r)
    pieces = []
    if np.any(q != 0):
        pieces.append(_poly(P.polyint(q), v))
    deg = len(den) - 1
    if deg >= 1 and np.any(r != 0):
        if deg == 1:
            d0, d1 = den
            pieces.append(_log_linear(r[0] / d1, d0, d1, v))
        elif deg == 2:
            c, b, a = den
            u = r[1] if len(r) > 1 else 0.0
            w = r[0]
            disc = 4 * a * c - b * b
            if disc > 0:
                s = math.sqrt(disc)
                # (u t + w)/(a t^2 + b t + c) = (u/2a) D'/D + (w - u b/2a)/D
                pieces.append(E.mul(u / (4 * a), E.log(E.power(_poly(den, v), 2))))
                arg = E.div(_poly([b, 2 * a], v), s)
                pieces.append(E.mul((w - u * b / (2 * a)) * 2 / s, E.arctan(arg)))
            elif disc < 0:
                s = math.sqrt(-disc)
                t1, t2 = (-b - s) / (2 * a), (-b + s) / (2 * a)
                # partial fractions over the two real roots
                k1 = (u * t1 + w) / (a * (t1 - t2))
                k2 = (u * t2 + w) / (a * (t2 - t1))
                pieces.append(_log_linear(k1, -t1, 1.0, v))
                pieces.append(_log_linear(k2, -t2, 1.0, v))
            else:
                return None
        else:
            return None
    if not pieces:
        return E.ZERO
    out = pieces[0]
    for p in pieces[1:]:
        out = E.add(out, p)
    return out


def _log_linear(k, d0, d1, v):
    # k log|d0 + d1 v|, written as (k/2) log((d0 + d1 v)^2) to stay real
    return E.mul(0.5 * k, E.log(E.power(_poly([d0, d1], v), 2)))


def _linear_coeffs(e, var):
    c = as_polynomial(e, var)
    if c is None or len(c) != 2 or c[1] == 0:
        return None
    return c


def antiderivative(e, var="t"):
    """An exact antiderivative of ``e`` in ``var`` from a fixed table, or None.

    Table: rational functions with denominators of degree <= 2 (polynomials,
    ``1/(1+t^2)``, ``t/(1+t^2)``, ...), ``P(t) exp(k t + c)``,
    ``sin/cos(k t + c)``, sums and constant multiples of these.
    """
    e = E.as_expr(e)
    if not e.depends_on(var):
        return E.mul(e, E.Var(var))
    r = as_rational(e, var)
    if r is not None:
        return _rational_antiderivative(r[0], r[1], var)
    if isinstance(e, (E.Add, E.Sub)):
        fa, fb = antiderivative(e.a, var), antiderivative(e.b, var)
        if fa is None or fb is None:
            return None
        return E.add(fa, fb) if isinstance(e, E.Add) else E.sub(fa, fb)
    if isinstance(e, E.Mul):
        for c, u in ((e.a, e.b), (e.b, e.a)):
            if not c.depends_on(var):
                fu = antiderivative(u, var)
                return None if fu is None else E.mul(c, fu)
        for p, q in ((e.a, e.b), (e.b, e.a)):
            poly = as_polynomial(p, var)
            if poly is not None and isinstance(q, E.Func) and q.name == "exp":
                return _poly_exp_antiderivative(poly, q, var)
        return None
    if isinstance(e, E.Div) and not e.b.depends_on(var):
        fa = antiderivative(e.a, var)
        return None if fa is None else E.div(fa, e.b)
    if isinstance(e, E.Func):
        lin = _linear_coeffs(e.arg, var)
        if lin is None:
            return None
        k = lin[1]
        if e.name == "exp":
            return _poly_exp_antiderivative(np.array([1.0]), e, var)
        if e.name == "sin":
            return E.mul(-1.0 / k, E.cos(e.arg))
        if e.name == "cos":
            return E.mul(1.0 / k, E.sin(e.arg))
    return None


def _poly_exp_antiderivative(poly, exp_node, var):
    lin = _linear_coeffs(exp_node.arg, var)
    if lin is None:
        return None
    k = lin[1]
    # int P e^{kt} = e^{kt} sum_j (-1)^j P^(j) / k^(j+1)
    total = np.zeros(1)
    d = np.asarray(poly, dtype=float)
    j = 0
    while np.any(d != 0):
        total = P.polyadd(total, ((-1) ** j / k ** (j + 1)) * d)
        d = P.polyder(d) if len(d) > 1 else np.zeros(1)
        j += 1
    return E.mul(_poly(_trim(total), var), exp_node)


# ---------------------------------------------------------------------------
# complex logarithm
# ---------------------------------------------------------------------------

NODE_THRESHOLD = 1e-12


def unwrap_log(psi):
    """Complex chi with psi = exp(-chi), Im chi continuous along x and t.

    Continuity along x within each time slice, along t at the left edge;
    the branch at (x_min, t0) is the principal one.
    """
    single = isinstance(psi, ComplexField)
    vals = np.atleast_2d(psi.values)
    mod = np.abs(vals)
    bad = np.argwhere(mod < NODE_THRESHOLD)
    if bad.size:
        k, j = bad[0]
        where = f"x index {j}" if single else f"time index {k}, x index {j}"
        raise XformError("node-in-domain", f"|psi| < {NODE_THRESHOLD} at {where}")
    phase = np.unwrap(np.angle(vals), axis=1)
    edge = np.unwrap(np.angle(vals[:, 0]))
    phase += (edge - phase[:, 0])[:, None]
    chi = -np.log(mod) - 1j * phase
    if single:
        return ComplexField(psi.grid, chi[0])
    return psi.with_values(chi)
