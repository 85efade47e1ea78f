# %% [markdown]
# Monopole charges of spin-j in a radial field
#
# H(R) = R . S has a (2j+1)-fold degeneracy at R = 0.  Integrating each
# band's curvature over a sphere around the origin gives an integer Chern
# number: 2j, 2j - 2, ..., -2j from the lowest band up.  They always sum to
# zero.  Moving the sphere off the origin removes the charge entirely.

# %%
import numpy as np

from holonomy import chern_charges, sphere_family
from holonomy.models import radial_field

for spin in ("1/2", "1", "3/2", "2"):
    for n in (20, 60):
        rep = chern_charges(sphere_family(radial_field(spin), n, n))
        print(f"j = {spin:>3}, {n}x{n} mesh: charges {rep.charges.tolist()}  sum {rep.sum}  defect {rep.defect:.0e}")

shifted = sphere_family(lambda r: radial_field(1)(r + np.array([0.0, 0.0, 2.0])), 40, 40)
print("sphere not enclosing the degeneracy:", chern_charges(shifted).charges.tolist())
