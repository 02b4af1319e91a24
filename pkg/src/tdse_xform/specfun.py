"""Hermite polynomials, real Weber solutions Q_{n+1/2}, and the sextic QES block."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import expr as E
from .errors import XformError

MAX_DEGREE = 64
MAX_QES_N = 32


@dataclass(frozen=True)
class PolynomialReal:
    """Real polynomial with ascending ``coefficients``."""

    coefficients: tuple

    def __post_init__(self):
        c = [float(v) for v in self.coefficients]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c) or (0.0,))

    @property
    def degree(self):
        c = self.coefficients
        return -1 if c == (0.0,) else len(c) - 1

    def __call__(self, s):
        s = np.asarray(s)
        acc = np.zeros_like(s, dtype=np.result_type(s, float)) + self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * s + c
        return acc

    def derivative(self):
        c = self.coefficients
        return PolynomialReal(tuple(k * c[k] for k in range(1, len(c))) or (0.0,))

    def expr(self, var=E.X):
        return E.polynomial(self.coefficients, var)


# ---------------------------------------------------------------------------
# Hermite and Weber
# ---------------------------------------------------------------------------


def _check_degree(n):
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n > MAX_DEGREE:
        raise XformError("degree-cap", f"n = {n} exceeds {MAX_DEGREE}")


def hermite(n, x):
    """Physicists' Hermite polynomial H_n at real or complex ``x``."""
    _check_degree(n)
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return h_prev
    h = 2 * x * h_prev
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def _weber_r(n, y):
    # R_n(y) = i^n H_n(i y / sqrt 2) satisfies the real recurrence
    # R_{k+1} = -sqrt(2) y R_k + 2 k R_{k-1},  R_0 = 1,  R_1 = -sqrt(2) y
    y = np.asarray(y, dtype=float)
    r_prev = np.ones_like(y)
    if n == 0:
        return r_prev, np.zeros_like(y)
    r = -np.sqrt(2.0) * y
    for k in range(1, n):
        r_prev, r = r, -np.sqrt(2.0) * y * r + 2 * k * r_prev
    return r, r_prev


def weber_q(n, y):
    """Q_{n+1/2}(y) = i^n e^{y^2/4} H_n(i y / sqrt 2), evaluated in real arithmetic."""
    _check_degree(n)
    r, _ = _weber_r(n, y)
    return np.exp(np.asarray(y, dtype=float) ** 2 / 4) * r


def weber_q_prime(n, y):
    """dQ_{n+1/2}/dy, using R_n' = -sqrt(2) n R_{n-1}."""
    _check_degree(n)
    y = np.asarray(y, dtype=float)
    r, r_prev = _weber_r(n, y)
    return np.exp(y**2 / 4) * (0.5 * y * r - np.sqrt(2.0) * n * r_prev)


def weber_r_coefficients(n):
    """Ascending coefficients of the polynomial factor R_n of Q_{n+1/2}."""
    _check_degree(n)
    prev = np.array([1.0])
    if n == 0:
        return PolynomialReal(tuple(prev))
    cur = np.array([0.0, -np.sqrt(2.0)])
    for k in range(1, n):
        nxt = np.zeros(k + 2)
        nxt[1:] += -np.sqrt(2.0) * cur
        nxt[: len(prev)] += 2 * k * prev
        prev, cur = cur, nxt
    return PolynomialReal(tuple(cur))


def weber_q_expr(n, var=E.X):
    """Q_{n+1/2} as an Expr in ``var``."""
    return E.mul(E.exp(E.mul(0.25, E.power(var, 2))), weber_r_coefficients(n).expr(var))


def weber_log_abs_expr(n, var=E.X):
    """log|Q_{n+1/2}| as an Expr, valid where R_n has no zero (y > 0 for odd n)."""
    sign = (-1.0) ** n
    r = weber_r_coefficients(n)
    flipped = E.polynomial([sign * c for c in r.coefficients], var)
    return E.add(E.mul(0.25, E.power(var, 2)), E.log(flipped))


# ---------------------------------------------------------------------------
# quasi-exactly solvable sextic
# ---------------------------------------------------------------------------


def sextic_potential(n, alpha):
    """x^6 + 2 alpha x^4 + (alpha^2 - 4n - 3) x^2 as an Expr in x."""
    return E.polynomial([0.0, 0.0, alpha**2 - 4 * n - 3, 0.0, 2 * alpha, 0.0, 1.0])


def _padd(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return out


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _pder(p):
    return [k * p[k] for k in range(1, len(p))] or [Fraction(0)]


def _qes_images(n, alpha):
    """For each monomial s^k = x^{2k}: (-d^2/dx^2 + V) applied to e^g x^{2k},
    divided by e^g, as exact rational coefficient lists in x."""
    a = Fraction(alpha)
    gp = [Fraction(0), -a, Fraction(0), Fraction(-1)]  # g' = -x^3 - alpha x
    V = [Fraction(0), Fraction(0), a * a - 4 * n - 3, Fraction(0), 2 * a, Fraction(0), Fraction(1)]

    def D(q):  # (e^g q)' = e^g (g' q + q')
        return _padd(_pmul(gp, q), _pder(q))

    images = []
    for k in range(n + 1):
        q = [Fraction(0)] * (2 * k) + [Fraction(1)]
        r = _padd([-c for c in D(D(q))], _pmul(V, q))
        images.append(r)
    return images


def qes_closure_defect(n, alpha):
    """Largest |coefficient| of odd powers or of s^{n+1}, s^{n+2}, ... (exact)."""
    worst = Fraction(0)
    for r in _qes_images(n, alpha):
        for i, c in enumerate(r):
            if i % 2 == 1 or i > 2 * n:
                worst = max(worst, abs(c))
    return worst


def qes_sextic_block(n, alpha):
    """Matrix M with M @ p = E p for the coefficients of p(s), s = x^2."""
    if n < 0 or n > MAX_QES_N:
        raise ValueError(f"n must lie in [0, {MAX_QES_N}]")
    images = _qes_images(n, alpha)
    M = np.zeros((n + 1, n + 1))
    for k, r in enumerate(images):
        for i, c in enumerate(r):
            if c == 0:
                continue
            if i % 2 == 1 or i > 2 * n:
                raise XformError("not-quasi-solvable", f"monomial x^{i} survives for s^{k}")
            M[i // 2, k] = float(c)
    return M


def hessenberg(A):
    """Unitary similarity reduction to upper Hessenberg form (Householder)."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    tr = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    mu1, mu2 = tr + disc, tr - disc
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def qr_eigenvalues(A, max_iter=500):
    """Eigenvalues of a small dense matrix by shifted QR on its Hessenberg form.

    Complex single-shift iteration with Wilkinson shifts and deflation;
    complex conjugate pairs come out naturally.
    """
    H = hessenberg(A)
    n = H.shape[0]
    eps = np.finfo(float).eps
    eigs = []
    hi = n - 1
    its = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(H[0, 0])
            break
        lo = hi
        while lo > 0:
            scale = abs(H[lo, lo]) + abs(H[lo - 1, lo - 1]) or 1.0
            if abs(H[lo, lo - 1]) <= eps * scale:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(H[hi, hi])
            hi -= 1
            its = 0
            continue
        its += 1
        if its > max_iter:
            raise XformError("no-convergence", "QR iteration did not converge")
        if its % 11 == 0:
            mu = H[hi, hi] + abs(H[hi, hi - 1])  # exceptional shift
        else:
            mu = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        B = H[lo:hi + 1, lo:hi + 1] - mu * np.eye(hi - lo + 1)
        rots = []
        for k in range(hi - lo):
            a, b = B[k, k], B[k + 1, k]
            r = np.hypot(abs(a), abs(b))
            if r == 0.0:
                c, s = 1.0, 0.0
            else:
                c, s = a / r, b / r
            G = np.array([[np.conj(c), np.conj(s)], [-s, c]])
            B[k:k + 2, k:] = G @ B[k:k + 2, k:]
            rots.append(G)
        for k, G in enumerate(rots):
            B[: k + 2, k:k + 2] = B[: k + 2, k:k + 2] @ G.conj().T
        H[lo:hi + 1, lo:hi + 1] = B + mu * np.eye(hi - lo + 1)
    return np.array(eigs[::-1])


@dataclass(frozen=True)
class QesSolution:
    energy: float
    p: PolynomialReal
    n: int
    alpha: float

    def phi_expr(self, var=E.X):
        """exp(-x^4/4 - alpha x^2/2) p(x^2) as an Expr."""
        gauss = E.exp(E.polynomial([0.0, 0.0, -0.5 * self.alpha, 0.0, -0.25], var))
        return E.mul(gauss, self.p.expr(E.power(var, 2)))

    def phi(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x**4) / 4 - self.alpha * x**2 / 2) * self.p(x**2)


def qes_solutions(n, alpha, imag_tol=1e-9):
    """The n+1 algebraic even eigenpairs of the sextic, ascending in energy."""
    M = qes_sextic_block(n, alpha)
    eigs = qr_eigenvalues(M)
    scale = np.maximum(1.0, np.abs(eigs))
    if np.any(np.abs(eigs.imag) > imag_tol * scale):
        raise XformError("nonreal-spectrum", f"eigenvalues {eigs}")
    energies = np.sort(eigs.real)
    out = []
    for e in energies:
        _, _, vh = np.linalg.svd(M - e * np.eye(n + 1))
        v = vh[-1].real
        v = v / v[-1]
        out.append(QesSolution(float(e), PolynomialReal(tuple(v)), n, float(alpha)))
    return out
