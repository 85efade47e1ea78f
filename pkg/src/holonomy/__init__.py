"""Geometric phases, discrete curvature and their sum rules for finite-dimensional quantum systems."""
from .curvature import (
    FluxGrid,
    FrameFamily,
    MonopoleReport,
    chern_charges,
    eigenframe_family,
    plaquette_flux,
    sphere_family,
    theorem1_residual,
    two_form_field,
)
from .evolution import Constant, CyclicSet, Trajectory, cyclic_states, evolve, measurement_loop, trajectory
from .gates import GateVerdict, gate_verdict, hadamard_gate, phase_gate
from .linalg import EigenSystem, determinant, eig_hermitian, propagator, wrap_phase
from .phases import PhaseDecomposition, SumRuleReport, bargmann_phase, phase_decomposition, sum_rule_check
from .states import DiscreteLoop, Frame, bloch_frame, complete_frame, overlap, state

__version__ = "0.1.0"
