import numpy as np
import pytest

from exitrates.ldp import ExitSpec
from exitrates.process import ArModel, ArnModel
from montecarlo.mc import McConfig

TABLE1_A = [[0.8, 1.0], [0.0, 0.5]]
TABLE1_C = [1.0, 1.0]
TABLE1_SIGMA = [[925 / 81, 10 / 9], [10 / 9, 12 / 9]]
TABLE1_LIMIT = 81 / 2426
AR2_B = (0.5, 0.2)
AR2_SIGMA2 = 0.8 / (1.2 * (0.8 ** 2 - 0.5 ** 2))
TEST_SEED = 20100601


@pytest.fixture
def table1_model():
    return ArModel(a=TABLE1_A, epsilon=0.1, x0=[0.0, 0.0])


@pytest.fixture
def table1_exit():
    return ExitSpec(c=TABLE1_C)


@pytest.fixture
def iid_model():
    return ArModel(a=[[0.0]], epsilon=0.4, x0=[0.0])


@pytest.fixture
def scalar_exit():
    return ExitSpec(c=[1.0])


@pytest.fixture
def ar2_model():
    return ArnModel(b=AR2_B, epsilon=0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(TEST_SEED)


@pytest.fixture
def small_mc():
    return McConfig(n_paths=200, seed=TEST_SEED, parallelism=1)


@pytest.fixture
def table1_config_data():
    return {
        'model': {
            'kind': 'matrix',
            'a': TABLE1_A,
            'epsilon': 0.1,
            'x0': [0.0, 0.0],
        },
        'exit': {'c': TABLE1_C},
        'mc': {'n_paths': 200, 'seed': TEST_SEED, 'threads': 1},
        'analysis': {'horizons': [1, 2, 5, 10, 100]},
    }


@pytest.fixture
def ar2_config_data():
    return {
        'model': {
            'kind': 'arn',
            'b': list(AR2_B),
            'epsilon': 0.3,
            'starts': [0.0, 0.0],
        },
        'exit': {'level': 1.0, 'sided': 'two_sided'},
        'mc': {'n_paths': 100, 'seed': TEST_SEED},
        'analysis': {'epsilons': [0.3, 0.25]},
        'output': {'format': 'json'},
    }
