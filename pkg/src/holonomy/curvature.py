"""Discrete curvature 2-forms on two-parameter families of frames.

The curvature of state ``j`` on a grid cell is the phase of the product of
link overlaps around it,

    flux = -arg(<00|10><10|11><11|01><01|00>),

taken for column ``j`` of the frames at the four corners.  Corners are
visited with the first coordinate increasing first, which on a (theta, phi)
sphere mesh is counterclockwise seen from outside.  Each cell flux is
exactly gauge invariant and, summed over a closed surface, gives 2 pi times
an integer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GapCollapse, InvalidState, RefineMesh, SingularPlaquette
from .linalg import eig_hermitian, hermitian, wrap_phase
from .states import FRAME_TOL, Frame

LINK_FLOOR = 1e-9
GAP_FLOOR = 1e-8
INTEGER_TOL = 1e-3


@dataclass(frozen=True)
class FrameFamily:
    """Frames sampled on a rectangular (a, b) grid.

    ``frames[i, k]`` is the ``d x d`` frame (states as columns) at
    ``(a[i], b[k])``.  A periodic axis repeats its first node as its last.
    ``caps`` optionally holds the two frames at which the first and last
    rows of ``a`` collapse to a point, as at the poles of a sphere.
    """

    a: np.ndarray
    b: np.ndarray
    frames: np.ndarray
    periodic: tuple[bool, bool] = (False, False)
    caps: tuple[np.ndarray, np.ndarray] | None = None
    gap_min: float | None = None

    def __post_init__(self):
        fr = np.asarray(self.frames, dtype=np.complex128)
        if fr.ndim != 4 or fr.shape[:2] != (len(self.a), len(self.b)) or fr.shape[2] != fr.shape[3]:
            raise InvalidState(f"frames of shape {fr.shape} do not match a {len(self.a)} x {len(self.b)} grid")
        if min(fr.shape[:2]) < 2:
            raise InvalidState("a frame family needs at least 2 x 2 nodes")
        gram = np.conj(np.swapaxes(fr, -1, -2)) @ fr
        defect = float(np.max(np.abs(gram - np.eye(fr.shape[-1]))))
        if defect > FRAME_TOL:
            raise InvalidState(f"family frames are not orthonormal (defect {defect:.3e})")
        object.__setattr__(self, "frames", fr)
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.caps is not None:
            caps = tuple(np.asarray(c, dtype=np.complex128) for c in self.caps)
            for c in caps:
                Frame(c)
            object.__setattr__(self, "caps", caps)

    @property
    def dim(self) -> int:
        return self.frames.shape[-1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.frames.shape[:2]

    def frame(self, i, k) -> Frame:
        return Frame(self.frames[i, k])

    def rephased(self, phases) -> "FrameFamily":
        """Multiply column ``j`` at node ``(i, k)`` by ``exp(i phases[i, k, j])``."""
        ph = np.exp(1j * np.asarray(phases, dtype=float))
        return FrameFamily(self.a, self.b, self.frames * ph[:, :, None, :], self.periodic, self.caps, self.gap_min)

    @property
    def closed(self) -> bool:
        if all(self.periodic):
            return True
        return self.caps is not None and self.periodic[1]


@dataclass(frozen=True)
class FluxGrid:
    """Plaquette fluxes ``flux[j, i, k]`` for state ``j`` on cell ``(i, k)``.

    ``cap_flux[j, 0, k]`` and ``cap_flux[j, 1, k]`` are the triangular cells
    joining the first/last row to the cap nodes, when the family has caps.
    """

    flux: np.ndarray
    a: np.ndarray
    b: np.ndarray
    cap_flux: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.flux.shape[0]

    @property
    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        return 0.5 * (self.a[1:] + self.a[:-1]), 0.5 * (self.b[1:] + self.b[:-1])

    def total(self) -> np.ndarray:
        """Sum of all cell fluxes per state (caps included)."""
        tot = self.flux.sum(axis=(1, 2))
        if self.cap_flux is not None:
            tot = tot + self.cap_flux.sum(axis=(1, 2))
        return tot


def plaquette_flux(f00, f10, f11, f01, j: int) -> float:
    """Flux of state ``j`` through the cell 00 -> 10 -> 11 -> 01."""
    vs = [np.asarray(f.amps if isinstance(f, Frame) else f)[:, j] for f in (f00, f10, f11, f01)]
    links = [np.vdot(vs[n], vs[(n + 1) % 4]) for n in range(4)]
    mags = [abs(x) for x in links]
    if min(mags) <= LINK_FLOOR:
        raise SingularPlaquette((0, 0), j, min(mags))
    return wrap_phase(-np.angle(np.prod([x / m for x, m in zip(links, mags)])))


def _links(u, v) -> np.ndarray:
    """Column-wise overlaps <u_j|v_j> over stacks of frames."""
    return np.einsum("...ij,...ij->...j", np.conj(u), v)


def _unit(links: np.ndarray, where) -> np.ndarray:
    mags = np.abs(links)
    if mags.size and np.min(mags) <= LINK_FLOOR:
        idx = np.unravel_index(int(np.argmin(mags)), mags.shape)
        raise SingularPlaquette(where(idx), int(idx[-1]), float(mags[idx]))
    return links / mags


def two_form_field(family: FrameFamily) -> FluxGrid:
    """Discrete curvature of every state on every cell of the family."""
    fr = family.frames
    la = _unit(_links(fr[:-1, :], fr[1:, :]), lambda idx: ("a-link", idx[0], idx[1]))
    lb = _unit(_links(fr[:, :-1], fr[:, 1:]), lambda idx: ("b-link", idx[0], idx[1]))
    w = la[:, :-1] * lb[1:, :] * np.conj(la[:, 1:]) * np.conj(lb[:-1, :])
    flux = np.moveaxis(wrap_phase(-np.angle(w)), -1, 0)

    cap_flux = None
    if family.caps is not None:
        top, bottom = family.caps
        first, last = fr[0], fr[-1]
        lt = _unit(_links(top[None], first), lambda idx: ("cap-link", 0, idx[0]))
        lbt = _unit(_links(last, bottom[None]), lambda idx: ("cap-link", 1, idx[0]))
        # top cap: pole -> (0, k) -> (0, k+1) -> pole
        wt = lt[:-1] * lb[0] * np.conj(lt[1:])
        # bottom cap: (last, k) -> pole -> (last, k+1) -> (last, k)
        wb = lbt[:-1] * np.conj(lbt[1:]) * np.conj(lb[-1])
        cap_flux = np.stack([np.moveaxis(wrap_phase(-np.angle(x)), -1, 0) for x in (wt, wb)], axis=1)
    return FluxGrid(flux, family.a, family.b, cap_flux)


def theorem1_residual(flux: FluxGrid) -> tuple[float, np.ndarray]:
    """Worst cell of ``|sum_j flux_j|`` and the full residual map.

    A complete frame's curvatures cancel pointwise, so this goes to zero
    under refinement.
    """
    res = np.abs(wrap_phase(flux.flux.sum(axis=0)))
    worst = float(np.max(res)) if res.size else 0.0
    if flux.cap_flux is not None:
        worst = max(worst, float(np.max(np.abs(wrap_phase(flux.cap_flux.sum(axis=0))))))
    return worst, res


def eigenframe_family(
    h_of_R: Callable[[float, float], np.ndarray],
    a,
    b,
    periodic: tuple[bool, bool] = (False, False),
    caps: tuple[np.ndarray, np.ndarray] | None = None,
) -> FrameFamily:
    """Eigenbases of ``h_of_R(a_i, b_k)`` on the grid, ascending in energy.

    ``caps`` are optional Hamiltonians at the two points where the first and
    last ``a`` rows close off. Raises :class:`GapCollapse` if two levels come
    within 1e-8 of each other anywhere on the surface.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    hs = hermitian(np.stack([np.stack([h_of_R(x, y) for y in b]) for x in a]))
    es = eig_hermitian(hs)
    gaps = es.gaps
    gap_min = float(np.min(gaps))
    if gap_min < GAP_FLOOR:
        i, k = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        raise GapCollapse((float(a[i]), float(b[k])), gap_min)
    cap_frames = None
    if caps is not None:
        ces = eig_hermitian(np.stack(caps))
        cgap = float(np.min(ces.gaps))
        if cgap < GAP_FLOOR:
            raise GapCollapse(("cap", int(np.argmin(ces.gaps))), cgap)
        gap_min = min(gap_min, cgap)
        cap_frames = (ces.vectors[0], ces.vectors[1])
    return FrameFamily(a, b, es.vectors, periodic, cap_frames, gap_min)


def sphere_mesh(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """Polar angles at (i + 1/2) pi / n_theta and azimuths 0..2pi (endpoint repeated)."""
    theta = (np.arange(n_theta) + 0.5) * np.pi / n_theta
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi + 1)
    return theta, phi


def unit_vector(theta, phi) -> np.ndarray:
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def sphere_family(field: Callable[[np.ndarray], np.ndarray], n_theta: int = 60, n_phi: int = 60, radius: float = 1.0) -> FrameFamily:
    """Eigenframes of ``field(R)`` on a sphere of the given radius, closed by polar caps."""
    theta, phi = sphere_mesh(n_theta, n_phi)
    north = field(radius * np.array([0.0, 0.0, 1.0]))
    south = field(radius * np.array([0.0, 0.0, -1.0]))
    return eigenframe_family(
        lambda t, p: field(radius * unit_vector(t, p)), theta, phi, periodic=(False, True), caps=(north, south)
    )


@dataclass(frozen=True)
class MonopoleReport:
    """Chern numbers per band; the monopole charge is 2 pi times each."""

    charges: np.ndarray
    raw: np.ndarray
    gap_min: float | None

    @property
    def sum(self) -> int:
        return int(np.sum(self.charges))

    @property
    def defect(self) -> float:
        return float(np.max(np.abs(self.raw - self.charges)))

    @property
    def monopole_charges(self) -> np.ndarray:
        return 2.0 * np.pi * self.charges


def chern_charges(family: FrameFamily) -> MonopoleReport:
    if not family.closed:
        raise ValueError("Chern numbers need a closed surface (two periodic axes, or one periodic axis plus caps)")
    raw = two_form_field(family).total() / (2.0 * np.pi)
    charges = np.rint(raw)
    bad = np.abs(raw - charges) > INTEGER_TOL
    if np.any(bad):
        n = int(np.argmax(bad))
        raise RefineMesh(n, float(raw[n]))
    return MonopoleReport(charges.astype(int), raw, family.gap_min)
