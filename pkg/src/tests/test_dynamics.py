"""URM 演化、谱诊断、时间扫描与判定测试"""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from src.core.exceptions import UnsupportedCombination, ValidationError, WindowOutOfRange
from src.discrimination import knill_barnum_upper
from src.dynamics import (
    ComponentDecomposition,
    SpectralProfile,
    SweepResult,
    TimeGrid,
    UnitaryFamily,
    autocorrelation,
    autocorrelation_sweep,
    bound_sweep,
    component_kb_bound,
    cross_correlation,
    discretized_ac_model,
    evolve_ensemble,
    qubit_example,
    qubit_period,
    solvability_verdict,
    wiener_average,
)
from src.dynamics.evolution import SIGMA_X, SIGMA_Z
from src.dynamics.sweeps import FULLY, INCONCLUSIVE, NOT_FULLY, default_window
from src.states import DensityOperator
from src.states.sampling import random_density
from src.states.serialization import ket_vector


@pytest.fixture(scope="module")
def ac_model():
    return discretized_ac_model(256, [0.0, 1.0])


class TestQubitExample:
    @pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 2.5, math.pi / 2, 7.0])
    def test_closed_form(self, t):
        example = qubit_example(t, 0.0, 1.0)
        expected = 0.5 * (1.0 - abs(math.sin(t)))
        assert example.error == pytest.approx(expected, abs=1e-9)
        assert example.closed_form_error == pytest.approx(expected, abs=1e-9)

    def test_period(self):
        assert qubit_period(0.0, 1.0) == pytest.approx(math.pi)
        assert qubit_period(1.0, 3.0) == pytest.approx(math.pi / 2)

    def test_equal_rates_rejected(self):
        with pytest.raises(ValidationError):
            qubit_example(1.0, 2.0, 2.0)

    def test_hellstrom_sweep_recurs(self, ket0):
        family = UnitaryFamily.create(SIGMA_X, [0.0, 1.0])
        sweep = bound_sweep(family, [ket0, ket0], [0.5, 0.5], TimeGrid(0.0, 20.0, 2001), "hellstrom",
                            metadata={"analytic_period": math.pi})
        closed = 0.5 * (1.0 - np.abs(np.sin(sweep.times)))
        np.testing.assert_allclose(sweep.values, closed, atol=1e-9)
        verdict = solvability_verdict(sweep, 0.1)
        assert verdict.kind == NOT_FULLY
        assert verdict.statistics["subwindows"] == 6


class TestUnitaryFamily:
    def test_rates_must_be_distinct(self):
        with pytest.raises(ValidationError):
            UnitaryFamily.create(SIGMA_Z, [1.0, 1.0])

    def test_unitary_matches_expm(self):
        family = UnitaryFamily.create(SIGMA_X, [0.5, 2.0])
        np.testing.assert_allclose(family.unitary(1, 0.7), expm(-1j * 1.4 * SIGMA_X), atol=1e-12)

    def test_evolution_preserves_spectrum(self, rng):
        family = UnitaryFamily.create(SIGMA_Z, [0.0, 1.0])
        rho = random_density(2, rng)
        ens = evolve_ensemble(family, [rho, rho], [0.5, 0.5], 3.0)
        np.testing.assert_allclose(ens.states[1].eigenvalues(), rho.eigenvalues(), atol=1e-12)
        np.testing.assert_allclose(ens.states[0].matrix, rho.matrix, atol=1e-12)

    def test_component_bound_dominates_kb(self, rng):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        family = UnitaryFamily.create(0.5 * (g + g.conj().T), [0.0, 0.7, 1.9])
        base = [random_density(4, rng) for _ in range(3)]
        weights = [0.2, 0.3, 0.5]
        components = ComponentDecomposition.of(base)
        for t in np.linspace(0.0, 10.0, 11):
            kb = knill_barnum_upper(evolve_ensemble(family, base, weights, t))
            assert component_kb_bound(family, components, weights, t) >= kb - 1e-9


class TestSpectral:
    def test_autocorrelation_of_sigma_z(self):
        t = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(autocorrelation(SIGMA_Z, ket_vector("+"), t), np.cos(t), atol=1e-12)

    def test_cross_correlation_diagonal(self):
        psi = ket_vector("+")
        assert cross_correlation(SIGMA_Z, psi, psi, 1.3) == pytest.approx(
            autocorrelation(SIGMA_Z, psi, 1.3), abs=1e-12
        )

    def test_wiener_average_qubit(self):
        assert wiener_average(SIGMA_Z, ket_vector("+"), 1000.0, 20001) == pytest.approx(0.5, abs=1e-3)

    def test_wiener_average_ac_model(self, ac_model):
        value = wiener_average(ac_model.generator, ac_model.psi, 2000.0, 20001)
        assert value == pytest.approx(1.0 / 256, abs=0.01)

    def test_point_mass_sum(self, ac_model):
        profile = SpectralProfile.from_generator(ac_model.generator, ac_model.psi)
        assert profile.point_mass_sum() == pytest.approx(1.0 / 256)

    def test_wiener_rejects_bad_time(self):
        with pytest.raises(ValidationError):
            wiener_average(SIGMA_Z, ket_vector("+"), 0.0, 10)

    def test_cross_correlation_decays_on_ac_model(self, ac_model):
        smooth = discretized_ac_model(256, [0.0, 1.0], "raised-cosine")
        assert abs(cross_correlation(ac_model.generator, smooth.psi, ac_model.psi, 0.0)) > 0.5
        t = np.linspace(50.0, 300.0, 251)
        values = np.abs(cross_correlation(ac_model.generator, smooth.psi, ac_model.psi, t))
        assert np.max(values) <= 0.02



class TestAcModel:
    def test_recurrence_time(self, ac_model):
        assert ac_model.recurrence_time == pytest.approx(2 * math.pi * 255)
        assert np.linalg.norm(ac_model.psi) == pytest.approx(1.0)

    def test_raised_cosine_weights(self):
        model = discretized_ac_model(16, [0.0, 2.0], "raised-cosine")
        assert np.all(model.weights > 0.0)
        assert model.weights.sum() == pytest.approx(1.0)

    def test_invalid_interval(self):
        with pytest.raises(ValidationError):
            discretized_ac_model(8, [1.0, 1.0])

    def test_uniform_autocorrelation_small_before_half_recurrence(self, ac_model):
        t = np.linspace(50.0, 0.5 * ac_model.recurrence_time, 2001)
        values = np.abs(autocorrelation(ac_model.generator, ac_model.psi, t))
        assert np.max(values) <= 0.05

    def test_raised_cosine_decays_faster(self, ac_model):
        smooth = discretized_ac_model(256, [0.0, 1.0], "raised-cosine")
        t = np.linspace(50.0, 300.0, 251)
        uniform = np.abs(autocorrelation(ac_model.generator, ac_model.psi, t))
        raised = np.abs(autocorrelation(smooth.generator, smooth.psi, t))
        assert np.max(raised) < 0.1 * np.max(uniform)


    def test_kb_sweep_decays(self, ac_model):
        psi = DensityOperator.pure(ac_model.psi)
        family = UnitaryFamily.create(ac_model.generator, [0.0, 1.0, 2.0])
        sweep = bound_sweep(family, [psi] * 3, [1 / 3] * 3, TimeGrid(0.0, 600.0, 601), "kb",
                            metadata=ac_model.metadata, max_workers=4)
        assert sweep.values[0] == pytest.approx(2.0)
        assert sweep.metadata["direct_formula_deviation"] < 1e-9
        verdict = solvability_verdict(sweep, 0.1)
        assert verdict.kind == FULLY
        assert verdict.window == (50.0, 500.0)

    def test_eigenvector_reference_does_not_decay(self, ac_model):
        profile = SpectralProfile.from_generator(ac_model.generator, ac_model.eigenvector_psi())
        sweep = autocorrelation_sweep(profile, TimeGrid(0.0, 600.0, 601), ac_model.metadata)
        np.testing.assert_allclose(sweep.values, 1.0, atol=1e-12)
        assert solvability_verdict(sweep, 0.1).kind == NOT_FULLY


class TestSweepErrors:
    def test_hellstrom_needs_two_branches(self, ket0):
        family = UnitaryFamily.create(SIGMA_X, [0.0, 1.0, 2.0])
        with pytest.raises(UnsupportedCombination):
            bound_sweep(family, [ket0] * 3, [1 / 3] * 3, TimeGrid(0.0, 1.0, 3), "hellstrom")

    def test_unknown_quantity(self, ket0):
        family = UnitaryFamily.create(SIGMA_X, [0.0, 1.0])
        with pytest.raises(ValidationError):
            bound_sweep(family, [ket0] * 2, [0.5, 0.5], TimeGrid(0.0, 1.0, 3), "trace")

    def test_window_outside_grid(self, ket0):
        family = UnitaryFamily.create(SIGMA_X, [0.0, 1.0])
        sweep = bound_sweep(family, [ket0] * 2, [0.5, 0.5], TimeGrid(0.0, 10.0, 11), "kb")
        with pytest.raises(WindowOutOfRange):
            solvability_verdict(sweep, 0.1, window=(5.0, 20.0))

    def test_empty_grid(self):
        with pytest.raises(ValidationError):
            TimeGrid(0.0, 1.0, 0)

    @pytest.mark.parametrize("window", [(1.0, 2.0), (4.0, 6.0)])
    def test_window_between_grid_points(self, window):
        sweep = SweepResult(times=np.array([0.0, 5.0, 10.0]), values=np.full(3, 0.5), quantity="kb")
        with pytest.raises(WindowOutOfRange):
            solvability_verdict(sweep, 0.1, window=window)

    def test_weak_lower_bound_is_inconclusive(self, ket0):
        family = UnitaryFamily.create(SIGMA_X, [0.0, 1.0])
        sweep = bound_sweep(family, [ket0] * 2, [0.5, 0.5], TimeGrid(0.0, 20.0, 401), "montanaro")
        assert solvability_verdict(sweep, 0.9).kind == INCONCLUSIVE


class TestDefaultWindow:
    def sweep(self, d, stop):
        model = discretized_ac_model(d, [0.0, 1.0])
        profile = SpectralProfile.from_generator(model.generator, model.psi)
        return autocorrelation_sweep(profile, TimeGrid(0.0, stop, 1001), model.metadata)

    def test_large_model_uses_fixed_window(self):
        assert default_window(self.sweep(256, 600.0)) == (50.0, 500.0)

    def test_small_model_starts_at_grid_origin(self):
        # T_rec/2 = 15π < 50
        sweep = self.sweep(16, 40.0)
        assert default_window(sweep) == pytest.approx((0.0, 40.0))
        assert solvability_verdict(sweep, 0.1).window == pytest.approx((0.0, 40.0))

    def test_window_ends_at_half_recurrence(self):
        sweep = self.sweep(2, 10.0)
        assert default_window(sweep) == pytest.approx((0.0, math.pi))
        assert solvability_verdict(sweep, 0.1).window == pytest.approx((0.0, math.pi))

    def test_short_grid_falls_back_to_whole_grid(self):
        assert default_window(self.sweep(256, 40.0)) == (0.0, 40.0)

    def test_no_recurrence_time(self):
        sweep = SweepResult(times=np.linspace(0.0, 3.0, 4), values=np.zeros(4), quantity="kb")
        assert default_window(sweep) == (0.0, 3.0)


def test_qubit_counterexample_on_fine_grid(ket0):
    family = UnitaryFamily.create(SIGMA_X, [0.0, 1.0])
    sweep = bound_sweep(family, [ket0, ket0], [0.5, 0.5], TimeGrid(0.0, 10 * math.pi, 2001), "hellstrom")
    closed = np.array([qubit_example(t, 0.0, 1.0).closed_form_error for t in sweep.times])
    assert np.max(np.abs(sweep.values - closed)) <= 1e-10
    # 网格步长 π/200
    assert np.max(np.abs(sweep.values[:-200] - sweep.values[200:])) <= 1e-9
    for k in range(10):
        assert np.max(sweep.values[200 * k:200 * (k + 1) + 1]) >= 0.45
