import numpy as np
import pytest

from qconv.numerics import random_unit_signal


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng):
    def make(num_qubits, real=False):
        return random_unit_signal(2**num_qubits, rng, real=real)

    return make
