"""Reduction of reality-preserving Darboux transforms to static ones.

If ``Im chi = a(t) x^2 + b(t) x + c(t)``, then the point transformation with

    C = exp(-4 ∫a),   B = 2 ∫ b / C,   A = -4 c

maps the seed potential V0 to the static ``F'^2 - F''`` (F read off from
``Re chi`` at t0) and its Darboux partner V1 to ``F'^2 + F''``.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicSpline

from .core import (
    AnalyticTime,
    SampledTime,
    SpaceTimeField,
    TimeFunction,
    diff_array,
    exp_integral,
    integral_of,
    mesh,
    quotient,
    sample,
    scaled,
)
from .core import expr as E
from .darboux import SeedSamples, SeedSolution, apply_L, build_darboux
from .errors import XformError
from .pointmap import PointTransform, potential_pullback_at, pullback_at


@dataclass(frozen=True)
class QuadraticPhase:
    a: TimeFunction
    b: TimeFunction
    c: TimeFunction
    defect: float = 0.0


class GeneratorSeed(SeedSolution):
    """Seed assembled from a static generator F and a quadratic phase.

    chi0 = -2 ∫a + F(x/C + B),  chi1 = a x^2 + b x + c, with C and B as in
    :func:`theorem_transform`; the seed potential follows from the TDSE.
    """

    def __init__(self, F, a, b, c, t0=0.0, axis=None):
        self.F = E.as_expr(F)
        if self.F.depends_on("t"):
            raise ValueError("F must depend on x only")
        self.a, self.b, self.c = a, b, c
        self.t0 = t0
        self.transform = theorem_transform(QuadraticPhase(a, b, c), t0, axis)
        self._dF = [self.F.diff_n("x", k) for k in range(5)]

    @property
    def phase(self):
        return QuadraticPhase(self.a, self.b, self.c, 0.0)

    def samples(self, x, t):
        tr = self.transform
        x = np.asarray(x, dtype=float)
        C, C1 = tr.scale(t), tr.C.d1(t)
        B, B1 = tr.B(t), tr.B.d1(t)
        a, a1 = self.a(t), self.a.d1(t)
        b, b1 = self.b(t), self.b.d1(t)
        c1 = self.c.d1(t)
        xb = x / C + B
        F = [d(xb, 0.0) for d in self._dF[:4]]
        chi0 = 0.5 * np.log(C) + F[0]
        chi0_x = F[1] / C
        chi0_xx = F[2] / C**2
        chi0_xxx = F[3] / C**3
        chi0_t = -2 * a + F[1] * (-x * C1 / C**2 + B1)
        chi1 = a * x**2 + b * x + self.c(t)
        chi1_t = a1 * x**2 + b1 * x + c1
        V0 = (a1 - 4 * a**2) * x**2 + (b1 - 4 * a * b) * x + c1 - b**2 + chi0_x**2 - chi0_xx
        shape = np.broadcast_shapes(np.shape(x), np.shape(t))

        def full(v):
            return np.broadcast_to(v, shape)

        return SeedSamples(
            chi=full(chi0 + 1j * chi1),
            chi_x=full(chi0_x + 1j * (2 * a * x + b)),
            chi_xx=full(chi0_xx + 2j * a),
            chi_xxx=full(chi0_xxx + 0j),
            chi_t=full(chi0_t + 1j * chi1_t),
            V0=full(V0),
        )

    def chi1_xx_time(self, x_ref, t0, axis):
        return scaled(self.a, 2.0)

    def chi0_slice_expr(self, t0):
        tr = self.transform
        C0, B0 = float(tr.scale(t0)), float(tr.B(t0))
        return E.add(0.5 * np.log(C0), self.F.subs("x", E.add(E.div(E.X, C0), B0)))

    def chi1_expr(self):
        if all(isinstance(f, AnalyticTime) for f in (self.a, self.b, self.c)):
            x = E.X
            return E.add(E.add(E.mul(self.a.expr, E.power(x, 2)), E.mul(self.b.expr, x)), self.c.expr)
        return None


def _analytic_t0(axis, t0):
    return axis.t0 if t0 is None else t0


def fit_quadratic_phase(source, grid=None, axis=None, t0=None):
    """Fit ``Im chi = a x^2 + b x + c``; returns a :class:`QuadraticPhase`.

    ``source`` may be a seed, an Expr for Im chi, or a SpaceTimeField of Im
    chi. Exprs are split exactly by differentiation at x = 0 (defect =
    max |d^3/dx^3 Im chi| on the mesh, or exactly 0 when that derivative
    folds to zero); samples get a per-slice least-squares fit whose largest
    residual is the defect.
    """
    if isinstance(source, GeneratorSeed):
        return source.phase
    t0 = _analytic_t0(axis, t0) if axis is not None else (0.0 if t0 is None else t0)
    chi1 = source
    if isinstance(source, SeedSolution):
        chi1 = source.chi1_expr()
        if chi1 is None:
            if grid is None or axis is None:
                raise ValueError("sampled seeds need a grid and axis")
            x, t = mesh(grid, axis)
            chi1 = SpaceTimeField(grid, axis, source.samples(x, t).chi.imag)
    if isinstance(chi1, E.Expr):
        d3 = chi1.diff_n("x", 3)
        if E.const_value(d3) == 0:
            defect = 0.0
        elif grid is not None and axis is not None:
            x, t = mesh(grid, axis)
            defect = float(np.max(np.abs(d3(x, t))))
        else:
            raise ValueError("a grid and axis are needed to measure the defect")
        a = E.mul(0.5, chi1.diff_n("x", 2).subs("x", 0.0))
        b = chi1.diff("x").subs("x", 0.0)
        c = chi1.subs("x", 0.0)
        mk = lambda e: AnalyticTime(e, t0, axis)  # noqa: E731
        return QuadraticPhase(mk(a), mk(b), mk(c), defect)
    if isinstance(chi1, SpaceTimeField):
        g, ax = chi1.grid, chi1.axis
        xs = g.points
        xm = 0.5 * (g.x_min + g.x_max)
        coef = P.polyfit(xs - xm, np.real(chi1.values).T, 2)  # (3, m+1), in x - xm
        fitted = P.polyval(xs - xm, coef)  # (m+1, n)
        defect = float(np.max(np.abs(fitted - np.real(chi1.values))))
        c2, c1, c0 = coef[2], coef[1], coef[0]
        # re-expand about x = 0
        a = c2
        b = c1 - 2 * c2 * xm
        c = c0 - c1 * xm + c2 * xm**2
        return QuadraticPhase(SampledTime(ax, a), SampledTime(ax, b), SampledTime(ax, c), defect)
    raise TypeError("expected a seed, an Expr or a SpaceTimeField")


def theorem_transform(q, t0=None, axis=None):
    """The point transformation C = exp(-4∫a), B = 2∫b/C, A = -4c."""
    t0 = q.a.t0 if t0 is None else t0
    axis = axis or q.a.axis
    C = exp_integral(q.a, -4.0, t0)
    B = integral_of(quotient(q.b, C), 2.0)
    A = scaled(q.c, -4.0)
    return PointTransform(A, B, C, t0, axis)


@dataclass(frozen=True)
class StaticGenerator:
    """F(xbar) with derivatives; callables of ``(xbar, t=0)``."""

    F: object
    dF: object
    d2F: object
    expr: object = None

    @classmethod
    def from_expr(cls, F):
        F = E.as_expr(F)
        return cls(F, F.diff("x"), F.diff_n("x", 2), F)

    @classmethod
    def from_samples(cls, xs, values):
        spl = CubicSpline(xs, values)
        d1, d2 = spl.derivative(1), spl.derivative(2)
        return cls(lambda x, t=0.0: spl(x), lambda x, t=0.0: d1(x), lambda x, t=0.0: d2(x))


def extract_F(seed, tr, grid, axis, tol=1e-8):
    """F(xbar) = Re chi(xbar, t0), checked against every later slice.

    Consistency: max |chi0(x, t) - log(C)/2 - F(x/C + B)| <= tol (scaled by
    max(1, |chi0|)); otherwise ``seed-inconsistent``.
    """
    t0 = tr.t0
    F_expr = seed.chi0_slice_expr(t0)
    if F_expr is not None:
        g = StaticGenerator.from_expr(F_expr)
    else:
        k0 = int(round((t0 - axis.t0) / axis.dt))
        x, t = mesh(grid, axis)
        g = StaticGenerator.from_samples(grid.points, seed.samples(x, t).chi.real[k0])
    x, t = mesh(grid, axis)
    chi0 = seed.samples(x, t).chi.real
    xb, _ = tr.map_point(x, t)
    pred = 0.5 * np.log(tr.scale(t)) + g.F(xb, 0.0)
    err = np.abs(chi0 - pred)
    if F_expr is None:
        # spline F is only trusted inside the sampled window
        err = np.where((xb >= grid.x_min) & (xb <= grid.x_max), err, 0.0)
    scale = max(1.0, float(np.max(np.abs(chi0))))
    worst = float(np.max(err))
    if worst > tol * scale:
        raise XformError("seed-inconsistent", f"Re chi deviates from the generator by {worst:.3e}")
    return g


def static_potentials(g):
    """``(Vbar0, Vbar1) = (F'^2 - F'', F'^2 + F'')`` as callables of xbar."""
    if g.expr is not None:
        d1, d2 = g.expr.diff("x"), g.expr.diff_n("x", 2)
        sq = E.power(d1, 2)
        return E.sub(sq, d2), E.add(sq, d2)

    def v0(x, t=0.0):
        return g.dF(x) ** 2 - g.d2F(x)

    def v1(x, t=0.0):
        return g.dF(x) ** 2 + g.d2F(x)

    return v0, v1


@dataclass(frozen=True)
class TheoremReport:
    fit_defect: float
    potential_defect: float  # max |pullback(V0) - (F'^2 - F'')(xbar)|
    image_defect: float  # max |T(e^{-chi}) - e^{-F}| relative
    im2_defect: float  # reduced imaginary equation residual


@dataclass(frozen=True)
class CommutationReport:
    defect: float
    wave_defect: float
    potential_defect: float
    test_residual: float


def reduce_seed(seed, grid, axis, tol=1e-8):
    """Run the whole reduction: phase fit, transform, generator."""
    q = fit_quadratic_phase(seed, grid, axis)
    tr = theorem_transform(q, axis.t0, axis)
    g = extract_F(seed, tr, grid, axis, tol)
    return q, tr, g


def theorem_check(seed, grid, axis):
    q, tr, g = reduce_seed(seed, grid, axis)
    x, t = mesh(grid, axis)
    s = seed.samples(x, t)
    xb, _ = tr.map_point(x, t)
    v0bar, _ = static_potentials(g)
    pulled = potential_pullback_at(tr, np.real(s.V0), x, t)
    pot = float(np.max(np.abs(pulled - v0bar(xb, 0.0))))
    img = pullback_at(tr, np.exp(-s.chi), x, t)
    target = np.exp(-g.F(xb, 0.0))
    image = float(np.max(np.abs(img - target) / np.abs(target)))
    a, b = q.a(t), q.b(t)
    im2 = s.chi_t.real - 2 * (2 * a * x + b) * s.chi_x.real + 2 * a
    return TheoremReport(q.defect, pot, image, float(np.max(np.abs(im2))))


def verify_commutation(seed, psi_test, grid, axis, V0=None):
    """Defect of T∘D = Dbar∘T on the window, for one test solution.

    ``psi_test`` is a callable solving the seed's TDSE. Path 1 applies the
    time-dependent operator and then pulls back; path 2 pulls back and then
    applies ``d/dxbar + F'(xbar)``. Both differentiate samples with the same
    4th-order stencils (``d/dxbar = C d/dx`` on a fixed slice).
    """
    from .propagator import residual

    q, tr, g = reduce_seed(seed, grid, axis)
    op, _ = build_darboux(seed, grid, axis)
    x, t = mesh(grid, axis)
    psi = sample(psi_test, grid, axis)
    xb, _ = tr.map_point(x, t)
    C = tr.scale(t)

    path1 = pullback_at(tr, apply_L(op, psi).values, x, t)
    psibar = pullback_at(tr, psi.values, x, t)
    path2 = C * diff_array(psibar, grid.dx, 1, axis=1) + g.dF(xb, 0.0) * psibar
    wave = float(np.max(np.abs(path1 - path2)))

    _, v1bar = static_potentials(g)
    v1 = op.potential(x, t)
    pot = float(np.max(np.abs(potential_pullback_at(tr, v1.real, x, t) - v1bar(xb, 0.0))))

    v0 = V0 if V0 is not None else SpaceTimeField(grid, axis, np.real(seed.samples(x, t).V0))
    test_res = residual(psi, v0)
    return CommutationReport(max(wave, pot), wave, pot, test_res)
