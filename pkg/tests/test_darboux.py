import numpy as np
import pytest

from tdse_xform import XformError
from tdse_xform.catalog import entry_free_particle, free_gaussian_expr, free_particle_v1
from tdse_xform.core import SpatialGrid, TimeAxis, mesh, parse_expr, sample
from tdse_xform.core import expr as E
from tdse_xform.darboux import (
    ExprSeed,
    SampledSeed,
    apply_L,
    build_darboux,
    check_reality,
    inverse_darboux,
    seed_residual,
    square_integrability_diagnostic,
)
from tdse_xform.propagator import residual

GRID = SpatialGrid(0.5, 4.0, 512)
AXIS = TimeAxis(0.0, 1.0, 256)


def free_seed(n=1):
    return entry_free_particle(n).seed


def harmonic_seed():
    # chi = x^2/4 solves the static problem with V0 = x^2/4 - 1/2
    return ExprSeed(parse_expr("x^2/4"), E.Const(0.0), parse_expr("x^2/4 - 0.5"))


def test_reality_defect_examples():
    g, ax = SpatialGrid(-2, 2, 41), TimeAxis(0, 1, 8)
    quad = ExprSeed(E.Const(0.0), parse_expr("sin(t)*x^2 + t*x + 3"), E.Const(0.0))
    assert check_reality(quad, g, ax) == 0
    assert check_reality(harmonic_seed(), g, ax) == 0
    cubic = ExprSeed(E.Const(0.0), parse_expr("x^3"), E.Const(0.0))
    assert check_reality(cubic, g, ax) == pytest.approx(6.0)


def test_reality_violation_is_rejected():
    cubic = ExprSeed(E.Const(0.0), parse_expr("x^3"), E.Const(0.0))
    with pytest.raises(XformError) as e:
        build_darboux(cubic, SpatialGrid(-1, 1, 21), TimeAxis(0, 1, 8))
    assert e.value.code == "reality-violated"


def test_static_seed_gives_static_transform():
    g, ax = SpatialGrid(-3, 3, 61), TimeAxis(0, 1, 8)
    op, V1 = build_darboux(harmonic_seed(), g, ax)
    assert np.all(op.L1(ax.times) == 1.0)
    x, t = mesh(g, ax)
    assert np.allclose(V1(x, t), x**2 / 4 + 0.5)


def test_free_particle_partner_potential():
    op, V1 = build_darboux(free_seed(), GRID, AXIS)
    x, t = mesh(GRID, AXIS)
    v = V1(x, t)
    assert np.max(np.abs(v.imag)) < 1e-10
    assert np.max(np.abs(v.real - free_particle_v1(1)(x, t))) < 1e-8
    L1 = op.L1(AXIS.times)
    assert L1[0] == 1.0 and np.all(L1 > 0)
    # with the canonical normalisation L1 equals the scale sqrt(1 + t^2)
    assert np.allclose(L1, np.sqrt(1 + AXIS.times**2), rtol=1e-14)


def test_seed_is_in_the_kernel():
    seed = free_seed()
    op, _ = build_darboux(seed, GRID, AXIS)
    psi0 = E.exp(E.mul(-1.0, E.add(seed.chi0, E.mul(1j, seed.chi1))))
    x, t = mesh(GRID, AXIS)
    assert np.max(np.abs(apply_L(op, psi0)(x, t))) < 1e-10 * np.max(np.abs(psi0(x, t)))


def test_harmonic_ladder_against_brute_force():
    g, ax = SpatialGrid(-4, 4, 401), TimeAxis(0, 1, 8)
    op, _ = build_darboux(harmonic_seed(), g, ax)
    psi0 = parse_expr("x*exp(-x^2/4)*cos(t)")
    x, t = mesh(g, ax)
    # d/dx (x e^{-x^2/4}) + (x/2) x e^{-x^2/4} = e^{-x^2/4}
    expected = np.exp(-(x**2) / 4) * np.cos(t)
    assert np.max(np.abs(apply_L(op, psi0)(x, t) - expected)) < 1e-14
    sampled = apply_L(op, sample(psi0, g, ax))
    assert np.max(np.abs(sampled.values - expected)) < 1e-6


def test_intertwining_residual_converges():
    seed = free_seed()
    errs = []
    for n, m in ((129, 64), (257, 128), (513, 256)):
        g, ax = SpatialGrid(0.5, 4, n), TimeAxis(0, 1, m)
        op, V1 = build_darboux(seed, g, ax)
        psi1 = apply_L(op, free_gaussian_expr())
        errs.append(residual(sample(psi1, g, ax), lambda x, t: V1(x, t).real))
    assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)
    assert errs[1] / errs[2] == pytest.approx(4, abs=0.5)


def test_inverse_of_zero_is_zero():
    op, _ = build_darboux(free_seed(), GRID, AXIS)
    zero = sample(lambda x, t: 0j * x, GRID, AXIS)
    assert np.max(np.abs(inverse_darboux(op, zero).values)) == 0


def test_forward_after_inverse_is_identity():
    seed = free_seed()
    errs = []
    for n, m in ((129, 64), (257, 128), (513, 256)):
        g, ax = SpatialGrid(0.5, 4, n), TimeAxis(0, 1, m)
        op, _ = build_darboux(seed, g, ax)
        psi1 = sample(apply_L(op, free_gaussian_expr()), g, ax)
        back = apply_L(op, inverse_darboux(op, psi1))
        errs.append(np.max(np.abs(back.values - psi1.values)))
    assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5


def test_inverse_after_forward_up_to_kernel():
    seed = free_seed()
    op, _ = build_darboux(seed, GRID, AXIS)
    g0 = free_gaussian_expr()
    psi0 = sample(g0, GRID, AXIS)
    back = inverse_darboux(op, sample(apply_L(op, g0), GRID, AXIS))
    x, t = mesh(GRID, AXIS)
    kappa = (back.values - psi0.values) / seed.psi(x, t)
    assert np.max(np.abs(kappa - kappa[0, 0])) / abs(kappa[0, 0]) < 1e-6


def test_anchor_changes_only_the_kernel_part():
    # not an invariant, just a measurement: two anchors differ by c e^{-chi}
    seed = free_seed()
    op, _ = build_darboux(seed, GRID, AXIS)
    psi1 = sample(apply_L(op, free_gaussian_expr()), GRID, AXIS)
    a = inverse_darboux(op, psi1, x0=GRID.x_min)
    b = inverse_darboux(op, psi1, x0=GRID.points[200])
    x, t = mesh(GRID, AXIS)
    k = (a.values - b.values) / seed.psi(x, t)
    assert np.max(np.abs(k - k[0, 0])) < 1e-5 * max(1.0, abs(k[0, 0]))


def test_inverse_anchor_must_be_a_grid_point():
    op, _ = build_darboux(free_seed(), GRID, AXIS)
    psi1 = sample(lambda x, t: 0j * x, GRID, AXIS)
    with pytest.raises(XformError):
        inverse_darboux(op, psi1, x0=0.50001)


def test_sampled_seed_matches_analytic():
    seed = free_seed()
    g, ax = SpatialGrid(0.5, 4, 257), TimeAxis(0, 1, 128)
    sampled = SampledSeed.from_psi(sample(seed.psi, g, ax), sample(lambda x, t: 0 * x, g, ax))
    op, V1 = build_darboux(sampled, g, ax)
    x, t = mesh(g, ax)
    ref = free_particle_v1(1)(x, t)
    assert np.max(np.abs(V1.values.real - ref)[:, 4:-4]) < 1e-5
    assert np.allclose(op.L1(ax.times), np.sqrt(1 + ax.times**2), rtol=1e-6)


def test_sampled_seed_residual_decreases():
    seed = free_seed()
    res = []
    for n, m in ((129, 64), (257, 128)):
        g, ax = SpatialGrid(0.5, 4, n), TimeAxis(0, 1, m)
        s = SampledSeed.from_psi(sample(seed.psi, g, ax), sample(lambda x, t: 0 * x, g, ax))
        res.append(max(seed_residual(s, g, ax)))
    assert res[0] / res[1] > 3.5
    assert max(seed_residual(seed, GRID, AXIS)) < 1e-12


def test_sampled_seed_lives_on_its_mesh():
    seed = free_seed()
    g, ax = SpatialGrid(0.5, 4, 65), TimeAxis(0, 1, 16)
    s = SampledSeed.from_psi(sample(seed.psi, g, ax), sample(lambda x, t: 0 * x, g, ax))
    with pytest.raises(XformError):
        s.samples(np.zeros((1, 10)), np.zeros((3, 1)))


def test_square_integrability_diagnostic():
    g = SpatialGrid(-8, 8, 1601)
    zero = square_integrability_diagnostic(lambda xb, tb: 0 * xb, g)
    assert zero.value == 0
    gauss = square_integrability_diagnostic(lambda xb, tb: np.exp(-xb**2), g)
    assert gauss.value == pytest.approx(np.sqrt(np.pi) + 1, abs=1e-8)
    assert gauss.status == "decaying"
    harm = square_integrability_diagnostic(lambda xb, tb: xb**2 / 4, g)
    assert harm.status == "non-decaying"
