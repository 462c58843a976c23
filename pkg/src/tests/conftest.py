"""测试公共夹具"""

import numpy as np
import pytest

from src.states import DensityOperator
from src.states.serialization import ket_vector


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def ket0():
    return DensityOperator.pure(ket_vector("0"))


@pytest.fixture
def ket1():
    return DensityOperator.pure(ket_vector("1"))


@pytest.fixture
def ket_plus():
    return DensityOperator.pure(ket_vector("+"))
