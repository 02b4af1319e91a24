import numpy as np
import pytest

from tdse_xform import XformError
from tdse_xform.catalog import free_gaussian_expr
from tdse_xform.core import ComplexField, SpaceTimeField, SpatialGrid, TimeAxis, sample
from tdse_xform.propagator import PropagationRun, compare, norm_drift, norms, propagate, residual


def _free_run(n, m):
    g, ax = SpatialGrid(-20, 20, n), TimeAxis(0, 1, m)
    psi = free_gaussian_expr()
    exact = sample(psi, g, ax)
    run = PropagationRun(g, ax, lambda x, t: 0 * x, ComplexField(g, exact.values[0]))
    return propagate(run), exact


def test_free_gaussian_second_order():
    errs = []
    for n, m in ((401, 64), (801, 128), (1601, 256)):
        traj, exact = _free_run(n, m)
        errs.append(compare(traj, exact)[0])
    assert errs[-1] < 1e-3
    assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)
    assert errs[1] / errs[2] == pytest.approx(4, abs=0.5)


def test_harmonic_ground_state_keeps_its_modulus():
    g, ax = SpatialGrid(-10, 10, 1001), TimeAxis(0, 1, 400)
    x = g.points
    psi0 = ComplexField(g, np.exp(-(x**2) / 4))
    traj = propagate(PropagationRun(g, ax, lambda x, t: x**2 / 4, psi0))
    assert np.max(np.abs(np.abs(traj.values[-1]) - np.abs(psi0.values))) < 1e-4
    # the phase rotates at the eigenvalue 1/2
    k = g.n // 2
    assert np.angle(traj.values[-1, k]) == pytest.approx(-0.5, abs=1e-4)


def test_norm_is_conserved():
    traj, _ = _free_run(801, 128)
    assert norm_drift(traj) < 1e-12
    nrm = norms(traj)
    assert np.ptp(nrm) / nrm[0] < 1e-11


def test_time_dependent_potential_keeps_norm():
    g, ax = SpatialGrid(-10, 10, 401), TimeAxis(0, 1, 200)
    psi0 = ComplexField(g, np.exp(-(g.points**2)))
    traj = propagate(PropagationRun(g, ax, lambda x, t: (1 + np.sin(3 * t)) * x**2, psi0))
    assert norm_drift(traj) < 1e-12


def test_residual_of_plane_wave_is_second_order():
    res = []
    for m in (32, 64, 128):
        g, ax = SpatialGrid(-1, 1, 257), TimeAxis(0, 1, m)
        f = sample(lambda x, t: np.exp(1j * (2 * x - 4 * t)), g, ax)
        res.append(residual(f, lambda x, t: 0 * x))
    assert res[0] / res[1] == pytest.approx(4, rel=0.05)
    assert res[1] / res[2] == pytest.approx(4, rel=0.05)


def test_residual_with_shifted_potential():
    g, ax = SpatialGrid(-1, 1, 257), TimeAxis(0, 1, 4096)
    f = sample(lambda x, t: np.exp(1j * (2 * x - 4 * t)), g, ax)
    # V + 1 is off by one, so the residual is about max|psi|
    assert residual(f, lambda x, t: 1 + 0 * x) == pytest.approx(1.0, abs=1e-4)


def test_compare_self_is_zero():
    traj, exact = _free_run(401, 64)
    assert compare(exact, exact) == (0.0, 0.0)


def test_stored_potential_matches_callable():
    g, ax = SpatialGrid(-10, 10, 201), TimeAxis(0, 1, 64)
    psi0 = ComplexField(g, np.exp(-(g.points**2)))
    V = lambda x, t: 0.5 * x**2 * (1 + t)  # noqa: E731
    a = propagate(PropagationRun(g, ax, V, psi0))
    b = propagate(PropagationRun(g, ax, sample(V, g, ax), psi0))
    # midpoint average of a linear-in-t potential is exact
    assert np.max(np.abs(a.values - b.values)) < 1e-12


def test_errors():
    g, ax = SpatialGrid(-2, 2, 101), TimeAxis(0, 1, 16)
    with pytest.raises(XformError) as e:
        PropagationRun(g, ax, lambda x, t: 0 * x, ComplexField(g, np.ones(101)))
    assert e.value.code == "wavepacket-hit-boundary"
    # narrow start, but it spreads to the edges on the way
    psi0 = ComplexField(g, np.exp(-8 * g.points**2))
    with pytest.raises(XformError) as e:
        propagate(PropagationRun(g, TimeAxis(0, 2, 64), lambda x, t: 0 * x, psi0))
    assert e.value.code == "wavepacket-hit-boundary"
    other = SpatialGrid(-2, 2, 201)
    with pytest.raises(XformError) as e:
        PropagationRun(g, ax, lambda x, t: 0 * x, ComplexField(other, np.exp(-8 * other.points**2)))
    assert e.value.code == "mismatched-discretization"
    a = SpaceTimeField(g, ax, np.zeros((17, 101)))
    b = SpaceTimeField(g, TimeAxis(0, 1, 32), np.zeros((33, 101)))
    with pytest.raises(XformError) as e:
        compare(a, b)
    assert e.value.code == "mismatched-discretization"
