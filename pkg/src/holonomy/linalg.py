"""Dense complex linear algebra for small Hermitian and unitary matrices.

Everything here accepts either a single ``(d, d)`` matrix or a stack
``(..., d, d)``; the Jacobi solver sweeps the whole stack at once so that
eigenframes on a parameter mesh cost one vectorised pass.

Units: hbar = 1, so ``propagator(h, t) = exp(-i h t)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidMatrix, NumericFailure

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
DEGENERACY_GAP = 1e-9
MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-13


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] < 1:
        raise DimensionMismatch(f"expected square matrix (..., d, d), got shape {a.shape}")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian(a) -> np.ndarray:
    """Validate and symmetrise a Hermitian matrix (or stack of them).

    Deviations up to ``1e-12`` (scaled by the largest entry when that exceeds
    one) are removed by averaging with the adjoint; anything larger is
    rejected.
    """
    a = _square(a)
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    dev = float(np.max(np.abs(a - dagger(a))))
    if dev > HERMITIAN_TOL * scale:
        raise InvalidMatrix(f"matrix is not Hermitian (max |H - H^dag| = {dev:.3e})")
    return 0.5 * (a + dagger(a))


def unitarity_defect(u) -> float:
    u = _square(u)
    eye = np.eye(u.shape[-1])
    return float(np.max(np.abs(dagger(u) @ u - eye)))


def unitary(u, atol: float = UNITARY_TOL) -> np.ndarray:
    u = _square(u)
    defect = unitarity_defect(u)
    if defect > atol:
        raise InvalidMatrix(f"matrix is not unitary (max |U^dag U - 1| = {defect:.3e})")
    return u


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with gauge-fixed eigenvectors as columns.

    For a stacked input, ``values`` has shape ``(..., d)``, ``vectors``
    ``(..., d, d)`` and ``degenerate`` is a boolean array over the stack.
    """

    values: np.ndarray
    vectors: np.ndarray
    degenerate: np.ndarray | bool

    @property
    def gaps(self) -> np.ndarray:
        """Smallest spacing between consecutive eigenvalues (inf for d = 1)."""
        if self.values.shape[-1] < 2:
            return np.full(self.values.shape[:-1], np.inf)
        return np.min(np.diff(self.values, axis=-1), axis=-1)


def fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive.

    Components within a relative 1e-10 of the maximum count as tied and the
    lowest index wins, which keeps the choice stable under roundoff.
    """
    mags = np.abs(vectors)
    peak = np.max(mags, axis=-2, keepdims=True)
    lead = np.argmax(mags >= peak * (1.0 - 1e-10), axis=-2)
    comp = np.take_along_axis(vectors, lead[..., None, :], axis=-2)
    phase = comp / np.where(np.abs(comp) > 0, np.abs(comp), 1.0)
    phase = np.where(np.abs(comp) > 0, phase, 1.0)
    return vectors * np.conj(phase)


def _jacobi(a: np.ndarray, max_sweeps: int, tol: float):
    """Cyclic complex Jacobi on a stack ``(B, d, d)``; returns (diag, V, off)."""
    nb, d, _ = a.shape
    a = a.copy()
    v = np.broadcast_to(np.eye(d, dtype=np.complex128), (nb, d, d)).copy()
    thresh = tol * np.sqrt(np.sum(np.abs(a) ** 2, axis=(-1, -2)))
    iu = np.triu_indices(d, 1)

    def offnorm(m):
        return np.sqrt(2.0 * np.sum(np.abs(m[:, iu[0], iu[1]]) ** 2, axis=-1))

    off = offnorm(a)
    for _ in range(max_sweeps):
        if np.all(off <= thresh):
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[:, p, q]
                mag = np.abs(apq)
                live = mag > 0
                safe = np.where(live, mag, 1.0)
                e = np.where(live, apq / safe, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
                sgn = np.where(theta >= 0, 1.0, -1.0)
                t = np.where(live, sgn / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(e)) @ [[c, s], [-s, c]] on the (p, q) plane
                jpp, jpq = c, s
                jqp, jqq = -s * np.conj(e), c * np.conj(e)

                ap, aq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = ap * jpp[:, None] + aq * jqp[:, None]
                a[:, :, q] = ap * jpq[:, None] + aq * jqq[:, None]
                ap, aq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = np.conj(jpp)[:, None] * ap + np.conj(jqp)[:, None] * aq
                a[:, q, :] = np.conj(jpq)[:, None] * ap + np.conj(jqq)[:, None] * aq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real

                vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
                v[:, :, p] = vp * jpp[:, None] + vq * jqp[:, None]
                v[:, :, q] = vp * jpq[:, None] + vq * jqq[:, None]
        off = offnorm(a)
    else:
        if not np.all(off <= thresh):
            worst = float(np.max(off - thresh))
            raise NumericFailure(
                f"Jacobi did not converge in {max_sweeps} sweeps", residual=worst
            )
    return np.real(np.diagonal(a, axis1=-2, axis2=-1)).copy(), v, off


def eig_hermitian(h, max_sweeps: int = MAX_SWEEPS, tol: float = OFFDIAG_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix or stack by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like, shape (..., d, d)
        Hermitian input; validated with :func:`hermitian`.
    max_sweeps : int
        Sweep cap before :class:`NumericFailure` is raised.
    tol : float
        Convergence when the off-diagonal Frobenius norm drops below
        ``tol * ||h||_F``.

    Returns
    -------
    EigenSystem
        Ascending eigenvalues; eigenvector columns gauge-fixed by
        :func:`fix_gauge`.
    """
    h = hermitian(h)
    lead = h.shape[:-2]
    d = h.shape[-1]
    flat = h.reshape((-1, d, d))
    if flat.shape[0] == 0:
        vals = np.zeros(lead + (d,))
        vecs = np.zeros(lead + (d, d), dtype=np.complex128)
        return EigenSystem(vals, vecs, np.zeros(lead, dtype=bool))
    vals, vecs, _ = _jacobi(flat, max_sweeps, tol)
    order = np.argsort(vals, axis=-1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=-1)
    vecs = fix_gauge(vecs)
    if d > 1:
        degenerate = np.min(np.diff(vals, axis=-1), axis=-1) < DEGENERACY_GAP
    else:
        degenerate = np.zeros(flat.shape[0], dtype=bool)
    vals = vals.reshape(lead + (d,))
    vecs = vecs.reshape(lead + (d, d))
    degenerate = degenerate.reshape(lead)
    if not lead:
        degenerate = bool(degenerate)
    return EigenSystem(vals, vecs, degenerate)


def propagator(h, t) -> np.ndarray:
    """``exp(-i h t)`` through the eigendecomposition of ``h``.

    ``t`` may be a scalar or broadcast against the leading stack axes of ``h``.
    """
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("propagation time must be finite")
    es = eig_hermitian(h)
    phases = np.exp(-1j * es.values * t[..., None])
    return (es.vectors * phases[..., None, :]) @ dagger(es.vectors)


def determinant(u) -> complex:
    """Determinant by LU elimination with partial pivoting."""
    a = _square(u)
    if a.ndim != 2:
        raise DimensionMismatch("determinant takes a single matrix")
    a = a.copy()
    n = a.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) < np.finfo(float).tiny:
            return 0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        det *= a[k, k]
        if k + 1 < n:
            m = a[k + 1:, k] / a[k, k]
            a[k + 1:, k:] -= np.outer(m, a[k, k:])
    return complex(det)


def wrap_phase(x):
    """Map angles into (-pi, pi]."""
    y = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)
    return float(y) if np.ndim(y) == 0 else y


def phase_distance(a, b):
    """Distance between two angles on the circle, in [0, pi]."""
    d = np.abs(wrap_phase(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    return float(d) if np.ndim(d) == 0 else d
