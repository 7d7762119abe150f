"""Invariant distributions against a small battery of fields.

Density and Dirac lifts only see the transversal part of the class; the two
orbit averages also see the descent scalar.
"""

import numpy as np

from hopfreeb import GridSpec, HopfModel, field_from_spec, obstruction
from hopfreeb.acceptance import invariant_family

m = HopfModel()
grid = GridSpec()
family = invariant_family(m, grid)
fields = ["const1", "t_over_r", "w1", "sin2_theta", "coboundary:random:4"]

print("field".ljust(22) + "".join(T.name.rjust(10) for T in family))
for spec in fields:
    obs = obstruction(field_from_spec(spec, m), m, grid)
    vals = [T.pair_class(obs) for T in family]
    print(spec.ljust(22) + "".join(f"{np.real(v):10.4f}" for v in vals))
