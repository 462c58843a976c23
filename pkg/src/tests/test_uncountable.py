"""密度与求积、N-混合与保真度不等式测试"""

import numpy as np
import pytest

from src.core.exceptions import BadPartition, SchemeMismatch, ValidationError
from src.dynamics import discretized_ac_model
from src.states import DensityOperator
from src.uncountable import (
    DensitySpec,
    MixtureModel,
    QuadratureScheme,
    assign_cells,
    fidelity_inequality_suite,
    inequality_gaps,
    n_mixture,
    natural_partition,
    resolving_nodes,
    split_partition,
    uncountable_mixture,
    uqsd_pipeline,
)
from src.uncountable.nmixture import build_n_mixture


@pytest.fixture(scope="module")
def small_model():
    return discretized_ac_model(16, [0.0, 1.0])


class TestDensity:
    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            DensitySpec(kind="gaussian")

    def test_components_must_not_touch(self):
        with pytest.raises(ValidationError):
            DensitySpec(kind="two-uniform", a=0.0, b=1.0, separation=1.0)

    def test_multi_uniform_components(self):
        spec = DensitySpec(kind="multi-uniform", a=0.0, b=1.0, separation=3.0, count=3)
        assert spec.components() == [(0.0, 1.0), (3.0, 4.0), (6.0, 7.0)]
        assert spec.gap() == pytest.approx(2.0)

    @pytest.mark.parametrize("spec", [
        DensitySpec(kind="uniform", a=-1.0, b=2.0),
        DensitySpec(kind="raised-cosine", a=0.0, b=1.0),
        DensitySpec(kind="two-uniform", a=0.0, b=1.0, separation=5.0),
    ])
    def test_masses_sum_to_one(self, spec):
        scheme = QuadratureScheme.gauss_legendre(spec, 64)
        assert scheme.check(spec) == pytest.approx(1.0, abs=1e-12)

    def test_breakpoints_add_intervals(self):
        spec = DensitySpec(kind="uniform")
        scheme = QuadratureScheme.gauss_legendre(spec, 8, breakpoints=[0.25, 0.5, 2.0])
        assert scheme.intervals == ((0.0, 0.25), (0.25, 0.5), (0.5, 1.0))
        assert scheme.size == 24

    def test_scheme_for_other_support(self):
        narrow = QuadratureScheme.gauss_legendre(DensitySpec(kind="uniform", a=0.0, b=1.0), 16)
        with pytest.raises(SchemeMismatch):
            narrow.check(DensitySpec(kind="uniform", a=0.0, b=2.0))
        wide = QuadratureScheme.gauss_legendre(DensitySpec(kind="uniform", a=0.0, b=2.0), 16)
        with pytest.raises(SchemeMismatch):
            wide.check(DensitySpec(kind="uniform", a=0.0, b=1.0))


class TestPartitions:
    def test_split_partition(self):
        cells = split_partition(DensitySpec(kind="uniform", a=0.0, b=3.0), 3)
        assert cells == [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]

    def test_split_needs_single_component(self):
        with pytest.raises(BadPartition):
            split_partition(DensitySpec(kind="two-uniform", separation=2.0), 2)

    def test_right_end_is_closed(self):
        owner = assign_cells(np.array([0.0, 0.5, 1.0]), [(0.5, 1.0), (0.0, 0.5)])
        assert owner.tolist() == [1, 0, 0]

    def test_overlapping_cells(self):
        with pytest.raises(BadPartition):
            assign_cells(np.array([0.1]), [(0.0, 0.6), (0.5, 1.0)])

    def test_uncovered_nodes(self):
        with pytest.raises(BadPartition):
            assign_cells(np.array([0.1, 0.9]), [(0.0, 0.5)])

    def test_empty_cell(self):
        with pytest.raises(BadPartition):
            assign_cells(np.array([0.1]), [(0.5, 0.5)])


class TestNMixture:
    def test_t_zero_is_reference_state(self, small_model):
        spec = DensitySpec(kind="uniform")
        scheme = QuadratureScheme.gauss_legendre(spec, 32)
        rho = uncountable_mixture(spec, scheme, small_model.generator, small_model.psi, 0.0)
        np.testing.assert_allclose(rho.matrix, np.outer(small_model.psi, small_model.psi.conj()), atol=1e-12)

    @pytest.mark.parametrize("t", [0.0, 0.7, 3.0, 12.0])
    def test_reconstruction(self, small_model, t):
        spec = DensitySpec(kind="two-uniform", a=0.0, b=1.0, separation=3.0)
        scheme = QuadratureScheme.gauss_legendre(spec, 32)
        nmix = n_mixture(spec, scheme, natural_partition(spec), small_model.generator, small_model.psi, t)
        assert nmix.size == 2
        assert nmix.node_counts == (32, 32)
        assert nmix.weights.sum() == pytest.approx(1.0, abs=1e-14)
        assert nmix.reconstruction_error() < 1e-10

    def test_split_cells_with_breakpoints(self, small_model):
        spec = DensitySpec(kind="uniform")
        cells = split_partition(spec, 3)
        scheme = QuadratureScheme.gauss_legendre(spec, 16, breakpoints=[hi for _, hi in cells])
        nmix = n_mixture(spec, scheme, cells, small_model.generator, small_model.psi, 2.0)
        np.testing.assert_allclose(nmix.weights, [1 / 3] * 3, atol=1e-12)

    def test_zero_mass_cell(self, small_model):
        spec = DensitySpec(kind="two-uniform", a=0.0, b=1.0, separation=3.0)
        model = MixtureModel.create(spec, QuadratureScheme.gauss_legendre(spec, 8),
                                    small_model.generator, small_model.psi)
        with pytest.raises(BadPartition):
            build_n_mixture(model, [(0.0, 1.0), (1.5, 2.5), (3.0, 4.0)], 1.0)

    def test_pipeline_at_t_zero(self, small_model):
        spec = DensitySpec(kind="uniform")
        scheme = QuadratureScheme.gauss_legendre(spec, 16, breakpoints=[0.5])
        nmix = n_mixture(spec, scheme, split_partition(spec, 2), small_model.generator, small_model.psi, 0.0)
        report = uqsd_pipeline(nmix)
        assert report.hellstrom_exact == pytest.approx(0.5, abs=1e-9)
        assert report.kb_upper == pytest.approx(1.0, abs=1e-9)

    def test_pipeline_bounds_order_over_time(self, small_model):
        spec = DensitySpec(kind="uniform")
        cells = split_partition(spec, 3)
        scheme = QuadratureScheme.gauss_legendre(spec, 16, breakpoints=[hi for _, hi in cells])
        model = MixtureModel.create(spec, scheme, small_model.generator, small_model.psi)
        for t in (1.0, 5.0, 20.0):
            report = uqsd_pipeline(build_n_mixture(model, cells, t))
            assert report.montanaro_lower <= report.pgm_error + 1e-9 <= report.kb_upper + 2e-9

    def test_pipeline_needs_two_branches(self, small_model):
        spec = DensitySpec(kind="uniform")
        scheme = QuadratureScheme.gauss_legendre(spec, 8)
        nmix = n_mixture(spec, scheme, natural_partition(spec), small_model.generator, small_model.psi, 1.0)
        with pytest.raises(ValidationError):
            uqsd_pipeline(nmix)


class TestInequalities:
    def test_gaps_for_basis_states(self, ket0, ket1):
        mixed = DensityOperator.maximally_mixed(2)
        gaps = inequality_gaps([0.5, 0.5], [ket0, ket1], [0.5, 0.5], [ket0, ket1], mixed)
        assert gaps["concavity"] == pytest.approx(1.0 - np.sqrt(0.5), abs=1e-9)
        assert gaps["sqrt_weight_bound"] == pytest.approx(0.0, abs=1e-9)
        assert gaps["strong_concavity"] == pytest.approx(0.0, abs=1e-9)
        assert gaps["super_fidelity"] == pytest.approx(0.0, abs=1e-9)

    def test_suite_passes(self):
        report = fidelity_inequality_suite(100, seed=0, max_workers=4)
        assert report.passed
        assert len(report.rows) == 100
        assert {row["family"] for row in report.rows} == {"quadrature", "dirichlet"}

    def test_suite_independent_of_thread_count(self):
        one = fidelity_inequality_suite(12, seed=5, max_workers=1)
        many = fidelity_inequality_suite(12, seed=5, max_workers=4)
        assert one.min_gaps == many.min_gaps
        assert one.worst_trial == many.worst_trial

    def test_suite_needs_trials(self):
        with pytest.raises(ValidationError):
            fidelity_inequality_suite(0)


def test_two_cell_reconstruction_on_large_model():
    model = discretized_ac_model(256, [0.0, 1.0])
    spec = DensitySpec(kind="uniform")
    cells = split_partition(spec, 2)
    scheme = QuadratureScheme.gauss_legendre(spec, 128, breakpoints=[0.5])
    mixture = MixtureModel.create(spec, scheme, model.generator, model.psi)
    for t in np.linspace(0.0, 400.0, 20):
        assert build_n_mixture(mixture, cells, t).reconstruction_error() <= 1e-10


class TestQuadratureConvergence:
    def test_resolving_nodes_grows_with_time(self):
        spec = DensitySpec(kind="uniform")
        assert resolving_nodes(spec, 1.0, 100.0) <= 128
        assert resolving_nodes(spec, 1.0, 500.0) > 128
        assert resolving_nodes(spec, 1.0, 500.0, breakpoints=[0.5]) < resolving_nodes(spec, 1.0, 500.0)

    @pytest.mark.parametrize("t", [50.0, 200.0, 350.0, 500.0])
    def test_doubling_nodes_changes_state_negligibly(self, t):
        model = discretized_ac_model(256, [0.0, 1.0])
        spec = DensitySpec(kind="uniform")
        n = resolving_nodes(spec, 1.0, 500.0)
        coarse = uncountable_mixture(spec, QuadratureScheme.gauss_legendre(spec, n), model.generator, model.psi, t)
        fine = uncountable_mixture(spec, QuadratureScheme.gauss_legendre(spec, 2 * n), model.generator, model.psi, t)
        diff = coarse.matrix - fine.matrix
        assert np.sum(np.abs(np.linalg.eigvalsh(diff))) <= 1e-6
