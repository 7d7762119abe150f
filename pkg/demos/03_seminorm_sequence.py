"""The sequence phi(|z|^2 + 1/p) against its limit phi(|z|^2).

Prints p * rho_{k,r}(f_p - f) for phi = sqrt. The product levels off only
once 1/p is small against lam^(2k), the inner radius squared of the annulus.
The Hessian of the limit blows up like 1/|z| near the origin.
"""

import numpy as np

from hopfreeb import AppendixProfile, HopfModel, appendix_pair, convergence_table, nonsmoothness_witness

m = HopfModel(lam=0.5)
prof = AppendixProfile("sqrt", p_max=1024, k_list=(1, 2, 3), r_list=(0, 2))
rows = convergence_table(prof, m)

shown = (1, 8, 64, 256, 1024)
print("k r " + "".join(f"p={p}".rjust(10) for p in shown))
for k in prof.k_list:
    for r in prof.r_list:
        col = {p: pr for kk, rr, p, _, pr in rows if kk == k and rr == r}
        print(f"{k} {r} " + "".join(f"{col[p]:10.3f}" for p in shown))

f, _ = appendix_pair(prof, 1, m)
print("\nradius   sup |D^2 f|")
for j, radius, sup in nonsmoothness_witness(f, m):
    print(f"{radius:.5f}  {sup:10.2f}")

g, _ = appendix_pair(AppendixProfile("t"), 1, m)
print("\npolynomial control:", np.unique([row[2] for row in nonsmoothness_witness(g, m)]))
