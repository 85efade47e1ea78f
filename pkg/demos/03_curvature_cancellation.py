# %% [markdown]
# Pointwise cancellation of curvature across a complete frame
#
# On a grid of parameters every cell gets a flux per state: minus the phase
# of the product of overlaps around the cell.  For a complete orthonormal
# frame, the fluxes of all states sum to zero cell by cell in the continuum
# limit.  On the qubit frame (coherent state plus antipode) the cancellation
# is exact even on a coarse grid; for a generic d = 4 family the residual
# shrinks with the fourth power of the cell size.

# %%
import numpy as np

from holonomy import theorem1_residual, two_form_field
from holonomy.scenarios import bloch_family, random_family

fam = bloch_family(30, 64)
flux = two_form_field(fam)
print("qubit frame: per-state totals", flux.total(), "max cell residual", theorem1_residual(flux)[0])
band = np.pi * (np.cos(0.1) - np.cos(np.pi - 0.1))
print(f"analytic band integral of (1/2) sin(theta): {band:.6f}")

print()
prev = None
for n in (6, 11, 21, 41, 81):
    worst, _ = theorem1_residual(two_form_field(random_family(4, 5, n, n)))
    ratio = "" if prev is None else f"  ratio {prev / worst:5.1f}"
    print(f"d = 4, h = {1 / (n - 1):.4f}: max |sum_j flux_j| = {worst:.3e}{ratio}")
    prev = worst

# %% [markdown]
# Individual fluxes are far from zero; only their sum vanishes.

# %%
flux = two_form_field(random_family(4, 5, 11, 11))
print("largest single-state flux per state:", np.abs(flux.flux).max(axis=(1, 2)))
