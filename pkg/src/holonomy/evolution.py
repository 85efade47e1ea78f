"""Cyclic evolutions: propagation, cyclic states of U(T), sampled trajectories.

A Hamiltonian sampler is any callable ``t -> (d, d) Hermitian array``.  A
bare array is accepted wherever a sampler is expected and treated as time
independent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DimensionMismatch, InvalidState, NumericFailure
from .linalg import dagger, eig_hermitian, fix_gauge, hermitian, propagator, unitary, wrap_phase
from .states import DiscreteLoop, Frame, state

Sampler = Union[Callable[[float], np.ndarray], np.ndarray]

DEFAULT_STEPS = 4096
PHASE_DEGENERACY = 1e-8
CLUSTER_TOL = 1e-8


class Constant:
    """Time-independent sampler wrapping a fixed Hamiltonian."""

    def __init__(self, h):
        self.h = hermitian(h)

    def __call__(self, t):
        return self.h

    def __repr__(self):
        return f"Constant(dim={self.h.shape[0]})"


def as_sampler(h: Sampler) -> Callable[[float], np.ndarray]:
    if callable(h):
        return h
    return Constant(h)


def _samples(h: Sampler, times) -> np.ndarray:
    if isinstance(h, Constant) or not callable(h):
        mat = h.h if isinstance(h, Constant) else hermitian(h)
        return np.broadcast_to(mat, (len(times),) + mat.shape)
    mats = np.stack([np.asarray(h(float(t)), dtype=np.complex128) for t in times])
    return hermitian(mats)


def step_propagators(h: Sampler, T: float, steps: int) -> np.ndarray:
    """Midpoint-rule propagators ``exp(-i h(t_k + dt/2) dt)``, shape (steps, d, d)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not T > 0:
        raise ValueError("duration must be positive")
    dt = T / steps
    mids = (np.arange(steps) + 0.5) * dt
    if isinstance(h, Constant) or not callable(h):
        mat = h.h if isinstance(h, Constant) else hermitian(h)
        u = propagator(mat, dt)
        return np.broadcast_to(u, (steps,) + u.shape)
    return propagator(_samples(h, mids), dt)


def evolve(h: Sampler, T: float, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """U(T, 0) as the time-ordered product of midpoint step propagators.

    For a constant Hamiltonian the result is computed in one step, so it is
    identical to ``propagator(h, T)`` whatever ``steps`` is.
    """
    if isinstance(h, Constant) or not callable(h):
        if not T > 0 or steps < 1:
            raise ValueError("need T > 0 and steps >= 1")
        mat = h.h if isinstance(h, Constant) else hermitian(h)
        return propagator(mat, T)
    steps_u = step_propagators(h, T, steps)
    u = np.eye(steps_u.shape[-1], dtype=np.complex128)
    for uk in steps_u:
        u = uk @ u
    return u


@dataclass(frozen=True)
class CyclicSet:
    """Eigenstates of U(T) and their total phases alpha_j in (-pi, pi]."""

    frame: Frame
    alphas: np.ndarray
    degenerate: bool

    @property
    def dim(self):
        return self.frame.dim


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    groups, start = [], 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] - values[k - 1] > tol:
            groups.append(np.arange(start, k))
            start = k
    return groups


def cyclic_states(u) -> CyclicSet:
    """Eigendecomposition of a unitary through its Hermitian and anti-Hermitian parts.

    ``(U + U^dag)/2`` is diagonalised first; inside each of its (numerically)
    degenerate eigenspaces ``(U - U^dag)/2i`` is diagonalised, which separates
    ``alpha`` from ``-alpha``.  Phases are Rayleigh quotients of ``U``.
    Columns are ordered by the index of their dominant component, then by
    phase, so diagonal unitaries come back in canonical order.
    """
    u = unitary(u)
    d = u.shape[0]
    hp = 0.5 * (u + dagger(u))
    hm = (u - dagger(u)) / 2j
    es = eig_hermitian(hp)
    cols = []
    for group in _clusters(es.values, CLUSTER_TOL):
        w = es.vectors[:, group]
        if len(group) == 1:
            cols.append(w)
            continue
        sub = eig_hermitian(dagger(w) @ hm @ w)
        cols.append(w @ sub.vectors)
    vecs = np.concatenate(cols, axis=1)
    # re-orthonormalise against roundoff leaking between clusters
    q, r = np.linalg.qr(vecs)
    vecs = q * (np.diag(r) / np.abs(np.diag(r)))[None, :]
    vecs = fix_gauge(vecs)
    alphas = wrap_phase(np.angle(np.einsum("ij,ik,kj->j", vecs.conj(), u, vecs)))
    alphas = np.atleast_1d(alphas)
    mags = np.abs(vecs)
    lead = np.argmax(mags >= np.max(mags, axis=0) * (1.0 - 1e-10), axis=0)
    order = np.lexsort((alphas, lead))
    vecs, alphas = vecs[:, order], alphas[order]

    residual = np.max(np.abs(u @ vecs - vecs * np.exp(1j * alphas)[None, :]))
    if residual > 1e-9:
        raise NumericFailure("cyclic state extraction inaccurate", residual=float(residual))
    srt = np.sort(alphas)
    gaps = np.diff(np.concatenate([srt, [srt[0] + 2 * np.pi]])) if d > 1 else np.array([np.inf])
    degenerate = bool(d > 1 and np.min(gaps) < PHASE_DEGENERACY)
    return CyclicSet(Frame(vecs), alphas, degenerate)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (N + 1, d)
    energies: np.ndarray

    def __post_init__(self):
        if self.times[0] != 0 or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must start at 0 and increase strictly")
        if not (len(self.times) == len(self.states) == len(self.energies)):
            raise DimensionMismatch("times, states and energies must have equal length")

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def rephased(self, phases) -> "Trajectory":
        """Same path with sample ``k`` multiplied by ``exp(i phases[k])``."""
        ph = np.exp(1j * np.asarray(phases, dtype=float))
        return Trajectory(self.times, self.states * ph[:, None], self.energies)

    def loop(self) -> DiscreteLoop:
        """The sampled path as a closed polygon (the endpoint is dropped)."""
        return DiscreteLoop(self.states[:-1])


def trajectories(h: Sampler, psi0s, T: float, steps: int = DEFAULT_STEPS) -> list[Trajectory]:
    """Propagate several initial states together; ``psi0s`` holds them as columns."""
    psi0s = np.asarray(psi0s, dtype=np.complex128)
    if psi0s.ndim == 1:
        psi0s = psi0s[:, None]
    for k in range(psi0s.shape[1]):
        state(psi0s[:, k])
    steps_u = step_propagators(h, T, steps)
    if steps_u.shape[-1] != psi0s.shape[0]:
        raise DimensionMismatch("Hamiltonian and initial state dimensions differ")
    times = np.linspace(0.0, T, steps + 1)
    states = np.empty((steps + 1,) + psi0s.shape, dtype=np.complex128)
    states[0] = psi0s
    for k, uk in enumerate(steps_u):
        states[k + 1] = uk @ states[k]
    hs = _samples(h, times)
    energies = np.einsum("kij,kil,klj->kj", states.conj(), hs, states).real
    return [Trajectory(times, states[:, :, j], energies[:, j]) for j in range(psi0s.shape[1])]


def trajectory(h: Sampler, psi0, T: float, steps: int = DEFAULT_STEPS) -> Trajectory:
    """Sample psi(t_k) = U(t_k, 0) psi0 and <H(t_k)> on a uniform grid.

    States are advanced one step propagator at a time, so ``states[-1]``
    agrees with ``evolve(h, T, steps) @ psi0`` to roundoff.
    """
    return trajectories(h, state(psi0), T, steps)[0]


def measurement_loop(projector_states) -> DiscreteLoop:
    """Loop traced by a cyclic sequence of rank-one projective measurements.

    Each segment is the geodesic between consecutive measured states, so the
    geometric phase of the record is the Bargmann phase of the polygon.
    """
    pts = [state(p, normalize=True) for p in projector_states]
    if len(pts) < 2:
        raise InvalidState("a measurement loop needs at least two projectors")
    return DiscreteLoop(np.stack(pts))
