from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdse_xform import XformError
from tdse_xform.core import diff_array
from tdse_xform.specfun import (
    PolynomialReal,
    hermite,
    qes_closure_defect,
    qes_sextic_block,
    qes_solutions,
    qr_eigenvalues,
    sextic_potential,
    weber_q,
    weber_q_expr,
    weber_q_prime,
)


def stationary_residual(sol, x):
    """-phi'' + V phi - E phi via the exact Expr derivative."""
    phi = sol.phi_expr()
    V = sextic_potential(sol.n, sol.alpha)
    return -phi.diff_n("x", 2)(x, 0.0) + (V(x, 0.0) - sol.energy) * phi(x, 0.0)


def test_polynomial_real():
    p = PolynomialReal((1.0, 2.0, 0.0))
    assert p.degree == 1 and p.coefficients == (1.0, 2.0)
    assert p(3.0) == 7.0
    assert p.derivative().coefficients == (2.0,)
    assert PolynomialReal((0.0,)).degree == -1


def test_hermite_low_orders():
    x = np.linspace(-2, 2, 9)
    assert np.all(hermite(0, x) == 1)
    assert np.allclose(hermite(1, x), 2 * x)
    assert np.allclose(hermite(2, x), 4 * x**2 - 2)


def test_hermite_derivative_identity():
    rng = np.random.default_rng(1)
    x = rng.uniform(-2, 2, 10)
    h = 1e-5
    for n in range(1, 8):
        fd = (hermite(n, x + h) - hermite(n, x - h)) / (2 * h)
        assert np.allclose(fd, 2 * n * hermite(n - 1, x), rtol=1e-7, atol=1e-6)


def test_degree_cap():
    with pytest.raises(XformError) as e:
        hermite(65, 0.1)
    assert e.value.code == "degree-cap"
    with pytest.raises(XformError):
        weber_q(70, 1.0)


def test_weber_matches_complex_oracle():
    y = np.linspace(-5, 5, 201)
    for n in range(11):
        oracle = (1j**n * np.exp(y**2 / 4) * hermite(n, 1j * y / np.sqrt(2))).real
        q = weber_q(n, y)
        assert np.max(np.abs(q - oracle) / np.maximum(np.abs(oracle), 1e-300)) < 1e-12


def test_weber_prime():
    y = np.linspace(-3, 3, 13)
    assert np.allclose(weber_q_prime(0, y), y / 2 * np.exp(y**2 / 4))
    h = 1e-5
    for n in range(6):
        fd = (weber_q(n, y + h) - weber_q(n, y - h)) / (2 * h)
        assert np.allclose(fd, weber_q_prime(n, y), rtol=1e-8, atol=1e-8)


def test_weber_expr_agrees():
    y = np.linspace(-2, 2, 9)
    for n in range(5):
        assert np.allclose(weber_q_expr(n)(y, 0.0), weber_q(n, y))


def test_weber_equation_residual_second_order():
    # Q'' - (y^2/4 + n + 1/2) Q with a 3-point second difference
    for n in (0, 2, 5):
        errs = []
        for h in (0.02, 0.01):
            y = np.arange(0.5, 3.0, h)
            q = weber_q(n, y)
            d2 = (q[2:] - 2 * q[1:-1] + q[:-2]) / h**2
            r = d2 - (y[1:-1] ** 2 / 4 + n + 0.5) * q[1:-1]
            errs.append(np.max(np.abs(r / q[1:-1])))
        assert errs[0] / errs[1] == pytest.approx(4, abs=0.3)


def test_weber_has_no_zeros_on_positive_axis():
    y = np.linspace(1e-3, 10, 4001)
    for n in range(11):
        q = weber_q(n, y)
        assert np.all(q != 0) and abs(np.sum(np.sign(q))) == len(y)


def test_sextic_potential_values():
    assert sextic_potential(2, 1.3)(0.0, 0.0) == 0
    assert sextic_potential(0, 0.0)(1.0, 0.0) == -2.0


def test_block_n0():
    M = qes_sextic_block(0, 2.5)
    assert M.shape == (1, 1) and M[0, 0] == 2.5
    (s,) = qes_solutions(0, 2.5)
    assert s.energy == pytest.approx(2.5, abs=1e-12) and s.p.coefficients == (1.0,)


def test_block_n1_eigenpairs():
    x = np.linspace(0, 3, 50)
    sols = qes_solutions(1, 0.7)
    assert len(sols) == 2
    for s in sols:
        assert np.max(np.abs(stationary_residual(s, x))) < 1e-8


def test_n2_alpha1_three_states():
    x = np.linspace(0, 3, 50)
    sols = qes_solutions(2, 1.0)
    assert len(sols) == 3
    energies = [s.energy for s in sols]
    assert energies == sorted(energies)
    assert energies[0] == pytest.approx(-3.0, abs=1e-10)
    for s in sols:
        assert np.max(np.abs(stationary_residual(s, x))) < 1e-8
        assert s.p.coefficients[-1] == pytest.approx(1.0)


@settings(max_examples=10, deadline=None)
@given(st.fractions(-5, 5, max_denominator=50))
def test_closure_is_exact(alpha):
    for n in range(9):
        assert qes_closure_defect(n, alpha) == Fraction(0)


@pytest.mark.parametrize("n", [0, 3, 6])
def test_count_and_decay(n):
    sols = qes_solutions(n, 3.0)
    assert len(sols) == n + 1
    x = np.linspace(0, 6, 601)
    for s in sols:
        phi = s.phi(x)
        assert abs(phi[-1]) < 1e-6 * np.max(np.abs(phi))


def test_stationary_residual_converges_under_refinement():
    s = qes_solutions(2, 1.0)[1]
    errs = []
    for n in (201, 401):
        x = np.linspace(-3, 3, n)
        phi = s.phi(x)
        r = -diff_array(phi, x[1] - x[0], 2) + (sextic_potential(2, 1.0)(x, 0.0) - s.energy) * phi
        errs.append(np.max(np.abs(r)))
    assert errs[0] / errs[1] > 12


def test_qr_eigenvalues_match_numpy():
    rng = np.random.default_rng(7)
    for k in (1, 2, 5, 12, 33):
        A = rng.normal(size=(k, k))
        ours = qr_eigenvalues(A)
        ref = np.linalg.eigvals(A)
        # match each reference eigenvalue to its nearest partner
        for lam in ref:
            assert np.min(np.abs(ours - lam)) < 1e-8 * max(1, abs(lam))


def test_qr_handles_large_blocks():
    M = qes_sextic_block(32, 8.0)
    ours = np.sort(qr_eigenvalues(M).real)
    ref = np.sort(np.linalg.eigvals(M).real)
    assert np.allclose(ours, ref, rtol=1e-8)
    with pytest.raises(ValueError):
        qes_sextic_block(33, 1.0)


def test_nonreal_spectrum_is_flagged(monkeypatch):
    # physical blocks have real spectra, so feed the solver a rotation
    from tdse_xform import specfun

    monkeypatch.setattr(specfun, "qes_sextic_block", lambda n, a: np.array([[0.0, -1.0], [1.0, 0.0]]))
    with pytest.raises(XformError) as e:
        specfun.qes_solutions(1, 1.0)
    assert e.value.code == "nonreal-spectrum"
