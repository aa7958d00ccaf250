"""Born distributions, dephasing, pointer coupling, and projector families."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapselab.measurement import (
    ProjectorSet,
    born_distribution,
    dephasing_channel,
    ideal_measurement_unitary,
    outcomes_to_json,
    position_projectors,
    product_projectors,
    ring_momentum_projectors,
    spin_projectors,
)
from collapselab.qlin import (
    DensityMatrix,
    PureState,
    TensorSpace,
    evolve,
    partial_trace,
    purity,
    tensor_product,
)

from conftest import random_density, random_pure_amplitudes

UP_DOWN = spin_projectors(0.0)

# Hand expansion of P0 (x) I + P1 (x) shift1 on a 2x2 pointer: the CNOT matrix.
CNOT_MATRIX = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)


def pure_qubit(a1: complex, a2: complex) -> DensityMatrix:
    return PureState(TensorSpace((2,)), np.array([a1, a2])).density()


def random_projector_set(rng, dim: int) -> ProjectorSet:
    """Measurement in a Haar-ish random orthonormal basis."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    projectors = tuple(np.outer(q[:, k], q[:, k].conj()) for k in range(dim))
    return ProjectorSet(TensorSpace((dim,)), tuple(range(dim)), projectors)


class TestProjectorSet:
    def test_rejects_incomplete_family(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        with pytest.raises(ValueError, match="identity"):
            ProjectorSet(TensorSpace((2,)), (0,), (p,))

    def test_rejects_non_idempotent(self):
        m = np.diag([0.5, 0.5]).astype(complex)
        with pytest.raises(ValueError, match="idempotent"):
            ProjectorSet(TensorSpace((2,)), (0, 1), (m, np.eye(2) - m))

    def test_rejects_non_orthogonal(self):
        plus = np.full((2, 2), 0.5, dtype=complex)
        up = np.diag([1.0, 0.0]).astype(complex)
        with pytest.raises(ValueError):
            ProjectorSet(TensorSpace((2,)), (0, 1), (plus, up))


class TestBornDistribution:
    def test_eigenstate_is_certain(self, rng):
        amps = random_pure_amplitudes(rng, 3)
        phi = np.outer(amps, amps.conj())
        pset = ProjectorSet(TensorSpace((3,)), ("hit", "miss"), (phi, np.eye(3) - phi))
        outcomes = born_distribution(DensityMatrix(TensorSpace((3,)), phi), pset)
        assert outcomes[0].probability == pytest.approx(1.0, abs=1e-12)
        assert outcomes[1].probability == pytest.approx(0.0, abs=1e-12)
        assert outcomes[1].conditional_state is None

    def test_spin_probabilities_are_amplitude_squares(self):
        outcomes = born_distribution(pure_qubit(0.6, 0.8), UP_DOWN)
        assert outcomes[0].label == +1
        assert outcomes[0].probability == pytest.approx(0.36, abs=1e-15)
        assert outcomes[1].probability == pytest.approx(0.64, abs=1e-15)

    def test_uniform_superposition_has_zero_momentum(self):
        state = PureState(TensorSpace((5,)), np.full(5, 1 / math.sqrt(5))).density()
        outcomes = born_distribution(state, ring_momentum_projectors(5))
        assert outcomes[0].label == 0.0
        assert outcomes[0].probability == pytest.approx(1.0, abs=1e-12)
        assert outcomes[3].label == pytest.approx(3 * 2 * math.pi / 5)
        assert outcomes[3].probability == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self, rng):
        rho = DensityMatrix(TensorSpace((3,)), random_density(rng, 3))
        with pytest.raises(ValueError, match="mismatch"):
            born_distribution(rho, UP_DOWN)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]))
    def test_probabilities_form_distribution(self, seed, dim):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(TensorSpace((dim,)), random_density(rng, dim))
        outcomes = born_distribution(rho, random_projector_set(rng, dim))
        probs = [o.probability for o in outcomes]
        assert all(p >= -1e-12 for p in probs)
        assert sum(probs) == pytest.approx(1.0, abs=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_collapse_is_repeatable(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(TensorSpace((3,)), random_density(rng, 3))
        pset = random_projector_set(rng, 3)
        for outcome in born_distribution(rho, pset):
            if outcome.conditional_state is None:
                continue
            again = born_distribution(outcome.conditional_state, pset)
            repeat = next(o for o in again if o.label == outcome.label)
            assert repeat.probability == pytest.approx(1.0, abs=1e-10)


class TestDephasingChannel:
    def test_kills_off_diagonals_exactly(self):
        rho = pure_qubit(0.6, 0.8)
        dephased = dephasing_channel(rho, UP_DOWN)
        # populations survive bit for bit, coherences vanish outright
        assert dephased.matrix[0, 0] == rho.matrix[0, 0] == 0.36
        assert dephased.matrix[1, 1] == rho.matrix[1, 1]
        assert dephased.matrix[1, 1] == pytest.approx(0.64, abs=1e-15)
        assert abs(dephased.matrix[0, 1]) < 1e-15
        assert abs(dephased.matrix[1, 0]) < 1e-15

    def test_diagonal_state_is_fixed_point(self):
        rho = DensityMatrix(TensorSpace((2,)), np.diag([0.3, 0.7]))
        np.testing.assert_allclose(dephasing_channel(rho, UP_DOWN).matrix, rho.matrix, atol=1e-15)

    def test_idempotent(self, rng):
        rho = DensityMatrix(TensorSpace((3,)), random_density(rng, 3))
        pset = random_projector_set(rng, 3)
        once = dephasing_channel(rho, pset)
        twice = dephasing_channel(once, pset)
        np.testing.assert_allclose(twice.matrix, once.matrix, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_never_purifies(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(TensorSpace((2,)), random_density(rng, 2))
        pset = random_projector_set(rng, 2)
        assert purity(dephasing_channel(rho, pset)) <= purity(rho) + 1e-10


class TestIdealMeasurementUnitary:
    def test_single_outcome_is_identity(self):
        pset = ProjectorSet(TensorSpace((2,)), ("all",), (np.eye(2, dtype=complex),))
        u = ideal_measurement_unitary(pset, pointer_dim=1)
        np.testing.assert_array_equal(u.matrix, np.eye(2))

    def test_qubit_copy_is_cnot(self):
        u = ideal_measurement_unitary(UP_DOWN, pointer_dim=2)
        np.testing.assert_allclose(u.matrix, CNOT_MATRIX, atol=1e-15)
        plus_zero = np.array([1, 0, 1, 0], dtype=complex) / math.sqrt(2)
        correlated = u.matrix @ plus_zero
        np.testing.assert_allclose(
            correlated, np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-15
        )

    def test_pointer_records_outcome_index(self):
        pset = random_projector_set(np.random.default_rng(5), 3)
        u = ideal_measurement_unitary(pset, pointer_dim=4)
        assert u.space.dims == (3, 4)

    def test_pointer_too_small(self):
        with pytest.raises(ValueError, match="pointer"):
            ideal_measurement_unitary(UP_DOWN, pointer_dim=1)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_trace_out_pointer_equals_dephasing(self, dim, rng):
        # both sides of the dual route: couple a pointer then forget it,
        # versus applying the projector sandwich directly
        for _ in range(10):
            rho = DensityMatrix(TensorSpace((dim,)), random_density(rng, dim))
            pset = random_projector_set(rng, dim)
            u = ideal_measurement_unitary(pset, pointer_dim=dim)
            pointer0 = np.zeros((dim, dim), dtype=complex)
            pointer0[0, 0] = 1.0
            joint = DensityMatrix(TensorSpace((dim, dim)), tensor_product(rho.matrix, pointer0))
            system_after = partial_trace(evolve(joint, u), keep=(0,))
            np.testing.assert_allclose(
                system_after.matrix, dephasing_channel(rho, pset).matrix, atol=1e-10
            )


class TestSpinProjectors:
    def test_angle_zero_is_up_down(self):
        np.testing.assert_allclose(UP_DOWN.projectors[0], np.diag([1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(UP_DOWN.projectors[1], np.diag([0.0, 1.0]), atol=1e-15)

    def test_antipodal_angle_swaps(self):
        flipped = spin_projectors(math.pi)
        np.testing.assert_allclose(flipped.projectors[0], UP_DOWN.projectors[1], atol=1e-12)
        np.testing.assert_allclose(flipped.projectors[1], UP_DOWN.projectors[0], atol=1e-12)

    @pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, -2.5, 7.1])
    def test_complete_for_any_angle(self, theta):
        pset = spin_projectors(theta)
        np.testing.assert_allclose(sum(pset.projectors), np.eye(2), atol=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            spin_projectors(float("nan"))


class TestRingMomentum:
    def test_single_site(self):
        pset = ring_momentum_projectors(1)
        np.testing.assert_array_equal(pset.projectors[0], np.eye(1))

    def test_localized_state_is_momentum_uniform(self):
        state = PureState(TensorSpace((5,)), np.eye(5)[2]).density()
        outcomes = born_distribution(state, ring_momentum_projectors(5))
        for outcome in outcomes:
            assert outcome.probability == pytest.approx(0.2, abs=1e-12)

    def test_labels_are_momentum_values(self):
        labels = ring_momentum_projectors(5).labels
        np.testing.assert_allclose(labels, [k * 2 * math.pi / 5 for k in range(5)])


class TestPositionProjectors:
    def test_site_labels_one_indexed(self):
        assert position_projectors(5).labels == (1, 2, 3, 4, 5)

    def test_localized_state(self):
        state = PureState(TensorSpace((5,)), np.eye(5)[2]).density()
        outcomes = born_distribution(state, position_projectors(5))
        assert outcomes[2].label == 3
        assert outcomes[2].probability == pytest.approx(1.0, abs=1e-15)


class TestSerialization:
    def test_outcome_json_shape(self):
        outcomes = born_distribution(pure_qubit(0.6, 0.8), UP_DOWN)
        payload = outcomes_to_json(outcomes)
        assert payload == [
            {"label": 1, "p": pytest.approx(0.36)},
            {"label": -1, "p": pytest.approx(0.64)},
        ]

    def test_product_projector_labels(self):
        joint = product_projectors(UP_DOWN, spin_projectors(0.0))
        assert joint.labels == ((1, 1), (1, -1), (-1, 1), (-1, -1))
