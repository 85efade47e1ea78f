"""Exception types raised across the package."""


class HolonomyError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(HolonomyError, ValueError):
    pass


class InvalidMatrix(HolonomyError, ValueError):
    """Input matrix violates the Hermitian/unitary contract."""


class InvalidState(HolonomyError, ValueError):
    pass


class NumericFailure(HolonomyError, ArithmeticError):
    """An iterative routine did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NonCyclicTrajectory(HolonomyError, ValueError):
    def __init__(self, defect):
        super().__init__(
            f"trajectory does not close in projective space (closure defect {defect:.3e})"
        )
        self.defect = defect


class OrthogonalStates(HolonomyError, ValueError):
    """Consecutive states of a loop are orthogonal; the Bargmann phase is undefined."""

    def __init__(self, index, magnitude):
        super().__init__(
            f"states {index} and {index + 1} are orthogonal (|overlap| = {magnitude:.3e})"
        )
        self.index = index
        self.magnitude = magnitude


class SingularPlaquette(HolonomyError, ValueError):
    def __init__(self, where, state, magnitude):
        super().__init__(
            f"vanishing link overlap {magnitude:.3e} for state {state} on plaquette {where}; refine the grid"
        )
        self.where = where
        self.state = state
        self.magnitude = magnitude


class GapCollapse(HolonomyError, ValueError):
    """The spectrum becomes degenerate somewhere on the parameter surface."""

    def __init__(self, node, gap):
        super().__init__(f"spectral gap {gap:.3e} at node {node}; a degeneracy lies on the surface")
        self.node = node
        self.gap = gap


class RefineMesh(HolonomyError, ValueError):
    def __init__(self, band, value):
        super().__init__(
            f"band {band}: total flux / 2pi = {value:.6f} is not integral; refine the mesh"
        )
        self.band = band
        self.value = value


class ConfigError(HolonomyError, ValueError):
    pass
