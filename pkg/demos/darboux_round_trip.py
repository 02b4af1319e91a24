"""Darboux partner of the free particle and the inverse map back.

L = L1 (d/dx + chi_x) sends solutions of V0 = 0 to solutions of V1. The
inverse recovers the original solution up to a multiple of the seed, which
is the kernel of L.
"""

import numpy as np

from tdse_xform.catalog import entry_free_particle, free_gaussian_expr
from tdse_xform.core import mesh, sample
from tdse_xform.darboux import apply_L, build_darboux, inverse_darboux

entry = entry_free_particle(1)
grid, axis = entry.window.grid, entry.window.axis
x, t = mesh(grid, axis)

op, V1 = build_darboux(entry.seed, grid, axis)
v1 = V1(x, t)
print(f"max |Im V1| = {np.max(np.abs(np.imag(v1))):.1e}")
print(f"max |V1 - closed form| = {np.max(np.abs(np.real(v1) - entry.extras['V1'](x, t))):.1e}")

psi0 = free_gaussian_expr()
psi1 = sample(apply_L(op, psi0), grid, axis)
back = inverse_darboux(op, psi1)
print(f"forward(inverse) error = {np.max(np.abs(apply_L(op, back).values - psi1.values)):.1e}")

kappa = (back.values - psi0(x, t)) / entry.seed.psi(x, t)
print(f"kernel coefficient kappa = {kappa[0, 0]:.6f}, relative spread {np.ptp(np.abs(kappa)) / abs(kappa[0, 0]):.1e}")
