# %% [markdown]
# Spin-1/2 precession and the solid angle
#
# A qubit prepared at polar angle theta and left to precess about z under
# H = (omega/2) sigma_z returns to its ray after one period.  The phase it
# picks up splits into a dynamical part, -integral <H> dt, and a geometric
# part equal to minus half the solid angle swept on the Bloch sphere.  Its
# orthogonal partner traces the mirror-image loop and picks up the opposite
# geometric phase, so the two cancel.

# %%
import numpy as np

from holonomy import bargmann_phase, complete_frame, phase_decomposition, trajectory
from holonomy.models import precession

omega = 1.0
period = 2 * np.pi / omega

print(f"{'theta':>8} {'Omega':>9} {'gamma_1':>11} {'gamma_2':>11} {'-Omega/2':>11} {'sum':>9}")
for theta in np.linspace(0.2, np.pi - 0.2, 7):
    frame = complete_frame([np.cos(theta / 2), np.sin(theta / 2)])
    g = [phase_decomposition(trajectory(precession(omega), frame[j], period, 4096)).geometric for j in range(2)]
    solid = 2 * np.pi * (1 - np.cos(theta))
    expected = np.angle(np.exp(-0.5j * solid))
    total = np.angle(np.exp(1j * sum(g)))
    print(f"{theta:8.3f} {solid:9.4f} {g[0]:11.6f} {g[1]:11.6f} {expected:11.6f} {total:9.1e}")

# %% [markdown]
# The same number from the sampled path alone.  Dropping the time
# information and keeping only the sequence of rays, the phase of the
# closed product of overlaps converges to the geometric phase as the
# sampling is refined.

# %%
theta = np.pi / 3
psi0 = [np.cos(theta / 2), np.sin(theta / 2)]
smooth = phase_decomposition(trajectory(precession(omega), psi0, period, 4096)).geometric
for n in (16, 64, 256, 1024, 4096):
    loop = trajectory(precession(omega), psi0, period, n).loop()
    print(f"{n:5d} samples: polygon phase {bargmann_phase(loop):+.8f}  (smooth {smooth:+.8f})")
