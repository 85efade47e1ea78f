import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holonomy.errors import DimensionMismatch, InvalidState, OrthogonalStates
from holonomy.states import (
    DiscreteLoop,
    Frame,
    bloch_frame,
    bloch_vector,
    complete_frame,
    overlap,
    state,
)

S = 1 / np.sqrt(2)


def test_overlap_examples():
    assert overlap([1, 0], [1, 0]) == 1
    assert overlap([1, 0], [0, 1]) == 0
    # (1/2)(1*1 + 1*i)
    assert abs(overlap([S, S], [S, 1j * S]) - (1 + 1j) / 2) < 1e-15


def test_overlap_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        overlap([1, 0], [1, 0, 0])


def test_state_validation():
    with pytest.raises(InvalidState):
        state([1, 1])
    assert np.allclose(state([1, 1], normalize=True), [S, S])


def test_complete_frame_canonical():
    assert np.array_equal(complete_frame([1, 0]).amps, np.eye(2))


def test_complete_frame_qubit_partner():
    t = np.pi / 2
    fr = complete_frame([np.cos(t / 2), np.sin(t / 2)])
    assert np.allclose(fr[1], [-S, S], atol=1e-15)


def test_complete_frame_qubit_exact_rule():
    x0, x1 = 0.6, 0.8j
    fr = complete_frame([x0, x1])
    assert fr[1][0] == -np.conj(x1) and fr[1][1] == np.conj(x0)


def test_complete_frame_random_d4_seed3():
    rng = np.random.default_rng(3)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    fr = complete_frame(v / np.linalg.norm(v))
    assert fr.orthonormality_defect() < 1e-12
    assert np.array_equal(fr[0], v / np.linalg.norm(v))


def test_complete_frame_skips_parallel_candidates():
    fr = complete_frame([0, 0, 1])
    assert fr.orthonormality_defect() < 1e-15
    assert np.allclose(np.abs(fr.amps), [[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_bloch_frame_examples():
    assert np.allclose(bloch_frame(0, 0).amps, np.eye(2))
    south = bloch_frame(np.pi, 0)
    assert np.allclose(south[0], [0, 1], atol=1e-15)
    assert np.allclose(south[1], [-1, 0], atol=1e-15)
    eq = bloch_frame(np.pi / 2, np.pi / 2)
    assert np.allclose(eq[0], [S, 1j * S])
    assert np.allclose(eq[1], [1j * S, S])


def test_frame_rejects_non_orthonormal():
    with pytest.raises(InvalidState):
        Frame([[1, 1], [0, 1]])


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32))
def test_property_complete_frame_orthonormal(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    fr = complete_frame(v / np.linalg.norm(v))
    assert fr.orthonormality_defect() < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.floats(0, np.pi), st.floats(0, 2 * np.pi))
def test_property_qubit_partner_antipodal(theta, phi):
    fr = bloch_frame(theta, phi)
    assert np.max(np.abs(bloch_vector(fr[0]) + bloch_vector(fr[1]))) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_property_overlap_conjugate_symmetric(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    assert overlap(a, b) == np.conj(overlap(b, a))


def test_discrete_loop_rejects_orthogonal_link():
    with pytest.raises(OrthogonalStates) as info:
        DiscreteLoop([[1, 0], [0, 1]])
    assert info.value.index == 0
