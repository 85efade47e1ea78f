"""Total, dynamical and geometric phases of cyclic evolutions."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonCyclicTrajectory, OrthogonalStates
from .evolution import DEFAULT_STEPS, CyclicSet, Sampler, cyclic_states, evolve, trajectories
from .linalg import phase_distance, wrap_phase
from .states import DiscreteLoop, link_overlaps

CLOSURE_TOL = 1e-6


@dataclass(frozen=True)
class PhaseDecomposition:
    total: float
    dynamical: float
    geometric: float


@dataclass(frozen=True)
class SumRuleReport:
    """Geometric phases of a complete cyclic set and their sum modulo 2 pi."""

    phases: np.ndarray
    residual: float
    tolerance: float
    decompositions: list[PhaseDecomposition] = field(default_factory=list)
    cyclic: CyclicSet | None = None

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance


def closure_defect(traj) -> float:
    return 1.0 - abs(np.vdot(traj.states[0], traj.states[-1]))


def phase_decomposition(traj) -> PhaseDecomposition:
    """Split the total phase of a cyclic trajectory into dynamical and geometric parts.

    The dynamical phase is ``-integral <H> dt`` by the trapezoid rule on the
    recorded energies; the geometric phase is the remainder, wrapped.
    """
    defect = closure_defect(traj)
    if defect > CLOSURE_TOL:
        raise NonCyclicTrajectory(defect)
    total = float(np.angle(np.vdot(traj.states[0], traj.states[-1])))
    t, e = traj.times, traj.energies
    dynamical = -float(np.sum(0.5 * (e[1:] + e[:-1]) * np.diff(t)))
    return PhaseDecomposition(wrap_phase(total), dynamical, wrap_phase(total - dynamical))


def bargmann_phase(loop: DiscreteLoop) -> float:
    """Geometric phase of the geodesic polygon: ``-arg prod <p_k|p_k+1>``."""
    links = link_overlaps(loop.points)
    mags = np.abs(links)
    k = int(np.argmin(mags))
    if mags[k] == 0:
        raise OrthogonalStates(k, 0.0)
    # multiply unit-normalised links to keep the product away from underflow
    return wrap_phase(-np.angle(np.prod(links / mags)))


def sum_residual(phases) -> float:
    """Distance of the sum of ``phases`` from the nearest multiple of 2 pi."""
    return phase_distance(np.sum(np.asarray(phases, dtype=float)), 0.0)


def _workers() -> int | None:
    """Thread cap from HOLONOMY_THREADS; 0 or unset means automatic (serial, batched)."""
    raw = os.environ.get("HOLONOMY_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        return None
    return None if n <= 0 else n


def cyclic_phases(h: Sampler, T: float, steps: int = DEFAULT_STEPS, cyclic: CyclicSet | None = None):
    """Phase decompositions for every eigenstate of U(T).

    With ``HOLONOMY_THREADS`` > 1 the states are split into that many
    chunks propagated on worker threads; results keep frame order.
    """
    if cyclic is None:
        cyclic = cyclic_states(evolve(h, T, steps))
    chunks = np.array_split(np.arange(cyclic.dim), min(_workers() or 1, cyclic.dim))

    def run(cols):
        return trajectories(h, cyclic.frame.amps[:, cols], T, steps)

    if len(chunks) == 1:
        trajs = run(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            trajs = [t for part in pool.map(run, chunks) for t in part]
    return cyclic, [phase_decomposition(t) for t in trajs]


def sum_rule_check(h: Sampler, T: float, steps: int = DEFAULT_STEPS, tolerance: float = 1e-6) -> SumRuleReport:
    """Evolve, extract the cyclic states of U(T) and test that their geometric phases cancel.

    A degenerate U(T) still gets checked: the sum of phases does not depend
    on which basis of a degenerate eigenspace is picked.
    """
    cyclic, decs = cyclic_phases(h, T, steps)
    phases = np.array([dec.geometric for dec in decs])
    return SumRuleReport(phases, sum_residual(phases), tolerance, decs, cyclic)
