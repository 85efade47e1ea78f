"""Hamiltonians and frame families used by the built-in scenarios."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .linalg import propagator

GENERATOR = "numpy.random.Generator(PCG64)"

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_hermitian(d: int, seed_or_rng) -> np.ndarray:
    """(G + G^dag)/2 with G having i.i.d. standard complex normal entries.

    A standard complex normal has E|z|^2 = 1, i.e. real and imaginary parts
    each N(0, 1/2).
    """
    g = seed_or_rng if isinstance(seed_or_rng, np.random.Generator) else rng(seed_or_rng)
    m = (g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))) / np.sqrt(2.0)
    return 0.5 * (m + m.conj().T)


def spin_matrices(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Sx, Sy, Sz) for spin ``j`` in the basis m = j, j-1, ..., -j."""
    j = Fraction(j).limit_denominator(2)
    if j <= 0 or (2 * j).denominator != 1:
        raise ValueError(f"spin must be a positive multiple of 1/2, got {j}")
    jf = float(j)
    m = jf - np.arange(int(2 * j) + 1)
    # <m+1|S+|m> = sqrt(j(j+1) - m(m+1)), placed above the diagonal
    sp = np.diag(np.sqrt(jf * (jf + 1) - m[1:] * (m[1:] + 1)), k=1).astype(np.complex128)
    sx = 0.5 * (sp + sp.conj().T)
    sy = -0.5j * (sp - sp.conj().T)
    sz = np.diag(m).astype(np.complex128)
    return sx, sy, sz


def precession(omega: float = 1.0) -> np.ndarray:
    """H = (omega/2) sigma_z; every state returns to its ray after 2 pi / omega."""
    return 0.5 * omega * SIGMA_Z


class RotatingField:
    """Qubit in a field of strength omega0 rotating about z at angular rate omega.

    ``H(t) = (omega0/2)(sigma_x cos(omega t) + sigma_y sin(omega t))``.
    """

    def __init__(self, omega0: float = 1.0, omega: float = 2.0):
        self.omega0 = omega0
        self.omega = omega

    def __call__(self, t):
        wt = self.omega * t
        return 0.5 * self.omega0 * (SIGMA_X * np.cos(wt) + SIGMA_Y * np.sin(wt))

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega

    def exact_propagator(self, t: float) -> np.ndarray:
        """Closed form via the rotating frame: exp(-i w t sz/2) exp(-i H_rot t)."""
        h_rot = 0.5 * self.omega0 * SIGMA_X - 0.5 * self.omega * SIGMA_Z
        return propagator(0.5 * self.omega * SIGMA_Z, t) @ propagator(h_rot, t)


def radial_field(j):
    """Map a unit vector n to n . S for spin ``j``."""
    sx, sy, sz = spin_matrices(j)

    def field(n):
        return n[0] * sx + n[1] * sy + n[2] * sz

    return field


def random_generators(d: int, seed: int, count: int = 2) -> list[np.ndarray]:
    g = rng(seed)
    return [random_hermitian(d, g) for _ in range(count)]


def smooth_unitary_frames(d: int, seed: int, a, b) -> np.ndarray:
    """Frames exp(-i (a G1 + b G2)) on the mesh a x b, shape (len(a), len(b), d, d)."""
    g1, g2 = random_generators(d, seed)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    hs = a[:, None, None, None] * g1 + b[None, :, None, None] * g2
    return propagator(hs, 1.0)
