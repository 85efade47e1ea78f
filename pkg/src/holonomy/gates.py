"""Geometric phase gates and the determinant obstruction.

A gate that acts as ``|phi_j> -> exp(i gamma_j)|phi_j>`` on the cyclic
states of a single evolution, with purely geometric ``gamma_j``, has
``det = exp(i sum gamma_j) = 1``.  Gates whose determinant is not 1 (the
qutrit and ququart Fourier gates, for instance) cannot be built that way.

The verdict only speaks to that construction.  Whether an overall phase
redefinition rescues a gate is left open; only the determinant is reported.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrix
from .linalg import determinant, unitarity_defect
from .states import Frame

FEASIBILITY_TOL = 1e-6
NONUNITARY_TOL = 1e-8


@dataclass(frozen=True)
class GateVerdict:
    det: complex
    det_phase: float
    geometric_feasible: bool
    tolerance: float


def phase_gate(frame: Frame, gammas) -> np.ndarray:
    """``sum_j exp(i gamma_j) |phi_j><phi_j|``."""
    gammas = np.asarray(gammas, dtype=float)
    if gammas.shape != (frame.dim,):
        raise ValueError(f"need {frame.dim} phases, got shape {gammas.shape}")
    v = frame.amps
    return (v * np.exp(1j * gammas)[None, :]) @ v.conj().T


def gate_verdict(u, tolerance: float = FEASIBILITY_TOL) -> GateVerdict:
    u = np.asarray(u, dtype=np.complex128)
    defect = unitarity_defect(u)
    if defect > NONUNITARY_TOL:
        raise InvalidMatrix(f"gate is not unitary (max |U^dag U - 1| = {defect:.3e})")
    det = determinant(u)
    phase = float(np.angle(det))
    return GateVerdict(det, phase, abs(phase) < tolerance, tolerance)


def hadamard_gate(d: int) -> np.ndarray:
    """Generalised Hadamard (normalised DFT): ``omega^(mu nu) / sqrt(d)``, omega = exp(2 pi i / d)."""
    if d < 2:
        raise ValueError("Hadamard gate needs d >= 2")
    mu = np.arange(d)
    # reduce the exponent mod d so large d stays exact
    k = np.outer(mu, mu) % d
    return np.exp(2j * np.pi * k / d) / np.sqrt(d)
