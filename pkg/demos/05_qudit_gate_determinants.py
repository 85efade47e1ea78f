# %% [markdown]
# Which qudit gates can be purely geometric?
#
# A gate applied as phases exp(i gamma_j) on the cyclic states of one
# evolution, with each gamma_j geometric, has determinant exp(i sum gamma_j)
# = 1.  Gates with any other determinant are out of reach.  The generalised
# Hadamard (discrete Fourier) gate is a natural test case.

# %%
import numpy as np

from holonomy import gate_verdict, hadamard_gate, phase_gate, sum_rule_check
from holonomy.models import RotatingField

print(f"{'d':>3} {'det':>18} {'arg det':>9}  geometric?")
for d in range(2, 13):
    v = gate_verdict(hadamard_gate(d))
    print(f"{d:3d} {v.det.real:+8.4f}{v.det.imag:+8.4f}j {v.det_phase:+9.4f}  {'yes' if v.geometric_feasible else 'no'}")

# %% [markdown]
# A gate actually built from a cyclic evolution passes, and a single
# nonzero phase on one state fails.

# %%
field = RotatingField(1.0, 2.0)
rep = sum_rule_check(field, field.period, 4096)
built = gate_verdict(phase_gate(rep.cyclic.frame, rep.phases))
print("driven-qubit phase gate: det =", np.round(built.det, 10), "feasible:", built.geometric_feasible)
print("diag(e^{0.3i}, 1, 1): feasible:", gate_verdict(np.diag([np.exp(0.3j), 1, 1])).geometric_feasible)
