"""量子态、系综、POVM 与保真度测试"""

import numpy as np
import pytest

from src.core.exceptions import DimensionMismatch, InvalidPovm, InvalidState, NotNormalized, ValidationError
from src.states import (
    DensityOperator,
    Ensemble,
    Povm,
    apply_measurement,
    fidelity,
    mix,
    overlap,
    purification_fidelity_check,
    purity,
    super_fidelity,
)
from src.states.sampling import random_density, random_ensemble, random_unitary
from src.states.serialization import ensemble_from_spec, matrix_from_dict, state_from_spec, state_to_dict


class TestDensityOperator:
    def test_rejects_wrong_trace(self):
        with pytest.raises(InvalidState):
            DensityOperator.from_matrix(np.eye(2))

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidState):
            DensityOperator.from_matrix(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(InvalidState):
            DensityOperator.from_matrix(np.diag([1.5, -0.5]))

    def test_pure_requires_unit_vector(self):
        with pytest.raises(NotNormalized):
            DensityOperator.pure([1.0, 1.0])

    def test_matrix_is_read_only(self, ket0):
        with pytest.raises(ValueError):
            ket0.matrix[0, 0] = 2.0

    def test_pure_sqrt_is_itself(self, ket_plus):
        np.testing.assert_allclose(ket_plus.sqrt(), ket_plus.matrix)

    def test_evolve_keeps_vector(self, ket0):
        had = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        evolved = ket0.evolve(had)
        assert evolved.is_pure_vector
        np.testing.assert_allclose(evolved.matrix, np.full((2, 2), 0.5), atol=1e-12)


class TestEnsemble:
    def test_zero_weights_are_dropped(self, ket0, ket1):
        ens = Ensemble.from_pairs([(1.0, ket0), (0.0, ket1)])
        assert ens.size == 1

    def test_weights_must_sum_to_one(self, ket0, ket1):
        with pytest.raises(ValidationError):
            Ensemble.from_pairs([(0.6, ket0), (0.6, ket1)])

    def test_dimensions_must_agree(self, ket0):
        with pytest.raises(DimensionMismatch):
            Ensemble.from_pairs([(0.5, ket0), (0.5, DensityOperator.maximally_mixed(3))])

    def test_mix_of_basis_states(self, ket0, ket1):
        np.testing.assert_allclose(mix(Ensemble.uniform([ket0, ket1])).matrix, np.eye(2) / 2)


class TestPovm:
    def test_incomplete_povm_rejected(self):
        with pytest.raises(InvalidPovm):
            Povm.from_operators([np.diag([1.0, 0.0])])

    def test_measurement_decoheres_plus_state(self, ket_plus):
        povm = Povm.projective(np.eye(2))
        out = apply_measurement(ket_plus, povm)
        np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_from_effects(self):
        povm = Povm.from_effects([np.diag([0.7, 0.2]), np.diag([0.3, 0.8])])
        np.testing.assert_allclose(sum(povm.effects()), np.eye(2), atol=1e-12)

    def test_random_projective_completeness(self, rng):
        povm = Povm.projective(random_unitary(4, rng))
        assert povm.completeness_error < 1e-10


class TestFidelity:
    def test_pure_pair(self, ket0, ket_plus):
        assert fidelity(ket0, ket_plus) == pytest.approx(0.5, abs=1e-12)
        assert overlap(ket0, ket_plus) == pytest.approx(0.5, abs=1e-12)

    def test_vector_path_matches_matrix_path(self, rng):
        for _ in range(5):
            a = random_density(3, rng, rank=1)
            b = random_density(3, rng)
            vec = np.linalg.eigh(a.matrix)[1][:, -1]
            pure = DensityOperator.pure(vec)
            assert fidelity(pure, b) == pytest.approx(fidelity(a, b), abs=1e-9)

    def test_symmetry_and_range(self, rng):
        a, b = random_density(4, rng), random_density(4, rng)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-10)
        assert 0.0 <= fidelity(a, b) <= 1.0
        assert fidelity(a, a) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_states(self, ket0, ket1):
        assert fidelity(ket0, ket1) == 0.0

    def test_maximally_mixed_purity(self):
        assert purity(DensityOperator.maximally_mixed(4)) == pytest.approx(0.25)

    def test_super_fidelity_dominates(self, rng):
        for _ in range(20):
            a, b = random_density(3, rng), random_density(3, rng)
            assert super_fidelity(a, b) >= fidelity(a, b) - 1e-9

    def test_purification_check(self, rng):
        a, b = random_density(3, rng), random_density(3, rng)
        report = purification_fidelity_check(a, b, 200, rng)
        assert report.max_overlap <= report.fidelity + 1e-9
        assert report.attained == pytest.approx(report.fidelity, abs=1e-8)
        assert 0.0 < report.ratio <= 1.0 + 1e-9


class TestSerialization:
    def test_ket_notation(self):
        rho = state_from_spec({"ket": "+"})
        np.testing.assert_allclose(rho.matrix, np.full((2, 2), 0.5), atol=1e-15)

    def test_diag_notation(self):
        rho = state_from_spec({"diag": [0.25, 0.75]})
        assert rho.dim == 2
        assert purity(rho) == pytest.approx(0.625)

    def test_vector_notation(self):
        rho = state_from_spec({"vector": [0.0, 1.0, 0.0, 0.0]})
        np.testing.assert_allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-15)

    def test_entries_notation(self, rng):
        rho = random_density(3, rng)
        restored = state_from_spec(state_to_dict(rho))
        np.testing.assert_array_equal(restored.matrix, rho.matrix)

    def test_wrong_entry_count(self):
        with pytest.raises(ValidationError):
            matrix_from_dict({"dim": 2, "entries": [1.0, 0.0]})

    def test_unknown_ket(self):
        with pytest.raises(ValidationError):
            state_from_spec({"ket": "2"})

    def test_ensemble_spec(self):
        ens = ensemble_from_spec({"members": [
            {"weight": 0.5, "state": {"ket": "0"}},
            {"weight": 0.5, "state": {"ket": "+"}},
        ]})
        assert ens.size == 2
        assert ens.weights == [0.5, 0.5]


def test_seeded_sampling_is_reproducible():
    a = random_ensemble(3, 4, np.random.default_rng(7))
    b = random_ensemble(3, 4, np.random.default_rng(7))
    for x, y in zip(a.states, b.states):
        np.testing.assert_array_equal(x.matrix, y.matrix)
