"""Metaharmonic conjugates and the boundary Hilbert transform.

For f ≡ 1 the radial conjugation gives the harmonic conjugate; for
f = e^x it turns a conductivity solution u into v such that W = u + jv
solves the main Vekua equation.  The Hilbert transform maps boundary data
of u/f to boundary values of the conjugate.
"""

import numpy as np

from bivekua import Domain, build_grid
from bivekua.main_vekua import (anti_conjugate, catalog, conductivity_residuals,
                                conjugation_mask, dirichlet_solve, hilbert_transform,
                                metaharmonic_conjugate, pair)
from bivekua.calculus import GridFunction

grid = build_grid(Domain.disk(), 64)
x, y = grid.nodes.real, grid.nodes.imag
mask = grid.safe() & conjugation_mask(grid)

one = catalog("one", grid)
v = metaharmonic_conjugate(one, GridFunction.scalar(grid, x ** 2 - y ** 2 + 0j))
print(f"f = 1:   conj(x² − y²) vs 2xy, max error {np.max(np.abs(v.sc - 2 * x * y)[mask]):.2e}")

f = catalog("exp_x", grid)
u = dirichlet_solve(f, lambda z: np.cos(2 * np.angle(z)))
v = metaharmonic_conjugate(f, u)
W = pair(u, v)
r1, r2 = conductivity_residuals(f, W, mask)
print(f"f = e^x: conductivity residuals of u and v  {r1:.2e}, {r2:.2e}")
u_back = anti_conjugate(f, v)
k = np.mean((u.sc - u_back.sc)[mask] / f.values[mask])
err = np.max(np.abs(u_back.sc + k * f.values - u.sc)[mask]) / np.max(np.abs(u.sc))
print(f"         anti-conjugate recovers u up to a multiple of f, rel. error {err:.2e}")

th = grid.domain.boundary_parameter(grid.boundary_points)
H = hilbert_transform(one, np.cos(3 * th))
print(f"\nH₁(cos 3θ) vs sin 3θ: max error {np.max(np.abs(H - np.sin(3 * th))):.2e}")
HH = hilbert_transform(one, H.real)
print(f"H₁(H₁ φ) + φ:         max error {np.max(np.abs(HH + np.cos(3 * th))):.2e}")
Hf = hilbert_transform(f, np.ones(th.shape))
print(f"H_f(1) for f = e^x:   max |value| {np.max(np.abs(Hf)):.1e}  (u = f has zero conjugate)")
