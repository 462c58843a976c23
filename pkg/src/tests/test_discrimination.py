"""错误概率、Hellström 与判别界测试"""

import math

import numpy as np
import pytest

from src.core.exceptions import InvalidPovm, ValidationError
from src.discrimination import (
    compute_bounds,
    error_probability,
    hellstrom,
    knill_barnum_upper,
    montanaro_lower,
    pgm,
    qiu_lower,
)
from src.states import DensityOperator, Ensemble, Povm
from src.states.sampling import random_ensemble, random_projective_povm, random_state


def test_hellstrom_pure_pair(ket0, ket_plus):
    result = hellstrom(0.5, ket0, 0.5, ket_plus)
    assert result.error == pytest.approx(0.5 * (1.0 - math.sqrt(0.5)), abs=1e-12)
    ens = Ensemble.uniform([ket0, ket_plus])
    assert error_probability(ens, result.povm).error == pytest.approx(result.error, abs=1e-12)


def test_hellstrom_orthogonal_and_identical(ket0, ket1):
    assert hellstrom(0.3, ket0, 0.7, ket1).error == pytest.approx(0.0, abs=1e-15)
    assert hellstrom(0.3, ket0, 0.7, ket0).error == pytest.approx(0.3, abs=1e-12)


def test_hellstrom_zero_prior(ket0, ket_plus):
    assert hellstrom(1.0, ket0, 0.0, ket_plus).error == pytest.approx(0.0, abs=1e-15)


def test_hellstrom_rejects_bad_priors(ket0, ket1):
    with pytest.raises(ValidationError):
        hellstrom(0.7, ket0, 0.7, ket1)


def test_error_probability_confusion(ket0, ket1):
    ens = Ensemble.uniform([ket0, ket1])
    swapped = Povm.projective(np.array([[0.0, 1.0], [1.0, 0.0]]))
    breakdown = error_probability(ens, swapped)
    assert breakdown.error == pytest.approx(1.0)
    assert breakdown.cross_term == pytest.approx(1.0)
    assert breakdown.confusion[0] == pytest.approx([0.0, 1.0])


def test_error_probability_needs_enough_outcomes(ket0, ket1):
    ens = Ensemble.uniform([ket0, ket1, DensityOperator.maximally_mixed(2)])
    with pytest.raises(InvalidPovm):
        error_probability(ens, Povm.projective(np.eye(2)))


def test_hellstrom_beats_random_measurements(rng):
    for _ in range(20):
        ens = random_ensemble(2, 3, rng)
        (p1, r1), (p2, r2) = ens.members
        best = hellstrom(p1, r1, p2, r2).error
        povm = random_projective_povm(3, rng)
        assert best <= error_probability(ens, povm).error + 1e-9


def test_bounds_ordering_on_random_ensembles(rng):
    for _ in range(200):
        n = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 7))
        report = compute_bounds(random_ensemble(n, dim, rng))
        assert max(report.qiu_lower, report.montanaro_lower) <= report.pgm_error + 1e-9
        assert report.pgm_error <= report.kb_upper + 1e-9
        if n == 2:
            assert report.qiu_lower == pytest.approx(report.hellstrom_exact, abs=1e-10)
            assert report.hellstrom_exact <= report.pgm_error + 1e-9


def test_identical_states_bounds(ket0):
    ens = Ensemble.uniform([ket0, ket0])
    assert qiu_lower(ens) == pytest.approx(0.5)
    assert montanaro_lower(ens) == pytest.approx(0.25)
    # 有序对求和：两个方向各 ½
    assert knill_barnum_upper(ens) == pytest.approx(1.0)


def test_bounds_need_two_members(ket0):
    with pytest.raises(ValidationError):
        qiu_lower(Ensemble.uniform([ket0]))


def test_pgm_rank_deficient_average():
    zero = DensityOperator.basis(3, 0)
    ens = Ensemble.uniform([zero, zero])
    povm = pgm(ens)
    assert povm.size == 3
    assert error_probability(ens, povm).error == pytest.approx(0.5)


def test_pgm_is_optimal_for_symmetric_pure_pair(ket0, ket_plus):
    ens = Ensemble.uniform([ket0, ket_plus])
    povm = pgm(ens)
    assert error_probability(ens, povm).error == pytest.approx(
        hellstrom(0.5, ket0, 0.5, ket_plus).error, abs=1e-10
    )


def test_pgm_completeness_for_mixed_members(rng):
    states = [random_state(4, rng) for _ in range(3)]
    povm = pgm(Ensemble.uniform(states))
    assert povm.completeness_error < 1e-8
