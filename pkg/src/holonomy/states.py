"""State vectors, orthonormal frames and discrete loops.

States are plain complex numpy vectors; :func:`state` validates and
normalises them.  A :class:`Frame` stores a complete orthonormal set of
states as the columns of a unitary matrix, so ``frame.amps[mu, j]`` is the
amplitude of basis vector ``mu`` in state ``j``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidState, OrthogonalStates

NORM_TOL = 1e-12
FRAME_TOL = 1e-10
OVERLAP_FLOOR = 1e-9
GS_SKIP = 1e-6


def state(amps, normalize: bool = False) -> np.ndarray:
    """Return ``amps`` as a normalised complex vector.

    With ``normalize=False`` a vector whose norm deviates from one by more
    than 1e-12 is rejected; otherwise it is rescaled.
    """
    v = np.array(amps, dtype=np.complex128).reshape(-1)
    if v.size == 0:
        raise InvalidState("state needs at least one amplitude")
    norm = np.linalg.norm(v)
    if normalize:
        if norm == 0:
            raise InvalidState("cannot normalise the zero vector")
        return v / norm
    if abs(norm * norm - 1.0) > NORM_TOL:
        raise InvalidState(f"state is not normalised (norm^2 = {norm * norm:.15f})")
    return v


def basis_state(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[k] = 1.0
    return v


def overlap(a, b) -> complex:
    """Inner product <a|b>, antilinear in ``a``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"states of dimension {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def bloch_vector(v) -> np.ndarray:
    """Bloch vector (<sx>, <sy>, <sz>) of a qubit state."""
    v = np.asarray(v)
    if v.shape != (2,):
        raise DimensionMismatch("Bloch vector is defined for qubits only")
    rho01 = v[0] * np.conj(v[1])
    return np.array([2 * rho01.real, -2 * rho01.imag, abs(v[0]) ** 2 - abs(v[1]) ** 2])


@dataclass(frozen=True)
class Frame:
    """A complete orthonormal set of ``d`` states, stored as matrix columns."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"frame needs a d x d amplitude array, got {a.shape}")
        gram = a.conj().T @ a
        defect = float(np.max(np.abs(gram - np.eye(a.shape[0]))))
        if defect > FRAME_TOL:
            raise InvalidState(f"frame columns are not orthonormal (defect {defect:.3e})")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def __len__(self):
        return self.dim

    def __getitem__(self, j) -> np.ndarray:
        return self.amps[:, j]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.amps[:, j] for j in range(self.dim)]

    def orthonormality_defect(self) -> float:
        return float(np.max(np.abs(self.amps.conj().T @ self.amps - np.eye(self.dim))))

    def rephase(self, phases) -> "Frame":
        """Frame with column ``j`` multiplied by ``exp(i phases[j])``."""
        return Frame(self.amps * np.exp(1j * np.asarray(phases, dtype=float))[None, :])

    @classmethod
    def canonical(cls, d: int) -> "Frame":
        return cls(np.eye(d, dtype=np.complex128))


def complete_frame(seed) -> Frame:
    """Extend one normalised state to a complete orthonormal frame.

    For a qubit ``(x0, x1)`` the partner is ``(-conj(x1), conj(x0))``, the
    antipodal point on the Bloch sphere.  In higher dimension the canonical
    basis vectors are orthogonalised in order against what is already in the
    frame (two Gram-Schmidt passes); candidates whose remainder has norm
    below 1e-6 are skipped.
    """
    seed = state(seed)
    d = seed.size
    if d == 1:
        return Frame(seed.reshape(1, 1))
    if d == 2:
        x0, x1 = seed
        return Frame(np.array([[x0, -np.conj(x1)], [x1, np.conj(x0)]]))
    cols = [seed]
    for k in range(d):
        if len(cols) == d:
            break
        w = basis_state(d, k)
        for _ in range(2):
            for c in cols:
                w = w - np.vdot(c, w) * c
        norm = np.linalg.norm(w)
        if norm < GS_SKIP:
            continue
        cols.append(w / norm)
    return Frame(np.column_stack(cols))


def bloch_state(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def bloch_frame(theta: float, phi: float) -> Frame:
    """Qubit frame: the coherent state at (theta, phi) and its antipode."""
    return complete_frame(bloch_state(theta, phi))


@dataclass(frozen=True)
class DiscreteLoop:
    """Closed polygon of states; the last point connects back to the first."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.complex128)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise InvalidState("a loop needs at least two points")
        norms = np.linalg.norm(pts, axis=1)
        if np.max(np.abs(norms**2 - 1.0)) > NORM_TOL:
            raise InvalidState("loop points must be normalised")
        links = link_overlaps(pts)
        mags = np.abs(links)
        k = int(np.argmin(mags))
        if mags[k] <= OVERLAP_FLOOR:
            raise OrthogonalStates(k, float(mags[k]))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def reversed(self) -> "DiscreteLoop":
        return DiscreteLoop(self.points[::-1])


def link_overlaps(points) -> np.ndarray:
    """<p_k|p_{k+1}> for k = 0..K-1 with wraparound."""
    pts = np.asarray(points)
    nxt = np.roll(pts, -1, axis=0)
    return np.einsum("ki,ki->k", pts.conj(), nxt)
