"""Map the free particle onto the harmonic oscillator through its Weber seed.

The seed psi_lambda has a phase that is exactly quadratic in x, so it fixes
a point transformation. Undoing that transformation turns the seed into a
static ground state and V0 = 0 into xbar^2/4 + lambda.
"""

import numpy as np

from tdse_xform.catalog import entry_free_particle
from tdse_xform.reality import extract_F, fit_quadratic_phase, static_potentials, theorem_transform

n = 1
entry = entry_free_particle(n)
grid, axis = entry.window.grid, entry.window.axis
lam = entry.extras["lambda"]

phase = fit_quadratic_phase(entry.seed, grid, axis)
print(f"quadratic-phase defect: {phase.defect:.1e}")

tr = theorem_transform(phase, 0.0, axis)
for t in (0.0, 0.5, 1.0):
    print(f"t = {t:.1f}: C = {tr.C(t):.12f} (sqrt(1+t^2) = {np.sqrt(1 + t * t):.12f}), "
          f"A = {tr.A(t):.12f} (4 lambda arctan t = {4 * lam * np.arctan(t):.12f})")

gen = extract_F(entry.seed, tr, grid, axis)
v0, v1 = static_potentials(gen)
xb = np.linspace(0.5, 4.0, 8)
print("xbar    Vbar0         xbar^2/4 + lambda   Vbar1")
for x, a, b in zip(xb, v0(xb), v1(xb)):
    print(f"{x:5.2f}  {a:12.9f}  {x * x / 4 + lam:12.9f}  {b:12.6f}")
