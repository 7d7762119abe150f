"""Tour of the obstruction for a few built-in fields.

Run with ``python3 demos/01_obstruction_tour.py``.
"""

import math

import numpy as np

from hopfreeb import GridSpec, HopfModel, field_from_spec, obstruction, solve_cohomological_equation

m = HopfModel(n=2, lam=0.5)
grid = GridSpec(16, 16, 8)

# %% The constant field. Its integral over one turn of each closed orbit is
# ln(1/lam), and the scalar c adds the two.
obs = obstruction(field_from_spec("const1", m), m, grid)
print(f"const1      c = {obs.c.real:.9f}   (2 ln 2 = {2 * math.log(2):.9f})")
print(f"            I+ = {obs.I_plus.real:.9f}  I- = {obs.I_minus.real:.9f}")

# %% t/r is invisible transversally (c = 0, h = 0), yet not a divergence:
# the descent scalar d picks it up.
obs = obstruction(field_from_spec("t_over_r", m), m, grid)
print(f"t_over_r    c = {abs(obs.c):.1e}  osc(h) = {obs.oscillation:.1e}  d = {obs.d.real:.9f}")

# %% A field with a genuine transversal part.
obs = obstruction(field_from_spec("w1 + cos_theta", m), m, grid)
u, th, h = obs.h_grid
print(f"w1+cos      c = {abs(obs.c):.1e}  h ranges over [{h.real.min():.3f}, {h.real.max():.3f}]")

# %% A divergence: everything vanishes and the equation can be solved.
g = field_from_spec("coboundary:cos_theta", m)
rep = solve_cohomological_equation(g, m, grid)
W = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
print(f"X(cos)      solvable={rep.solvable}  residual={rep.residual:.2e}")
print("            f at two points:", rep.solution.at(W, np.array([0.0, 0.25])))
