"""Счётчиковый генератор: ключ Philox = (seed, номер траектории)"""
import numba as nb
import numpy as np

from exitrates.exceptions import DimensionError

RNG_VERSION = (f'philox4x64-10+ziggurat/numpy-{np.__version__}'
               f'/numba-{nb.__version__}')

_UINT64 = 2 ** 64


def path_key(seed, index):
    if not 0 <= seed < _UINT64:
        raise DimensionError(f'seed must be an unsigned 64-bit integer, '
                             f'got {seed}')
    if not 0 <= index < _UINT64:
        raise DimensionError(f'path index out of range: {index}')
    return seed * _UINT64 + index


def path_generator(seed, index):
    return np.random.Generator(np.random.Philox(key=path_key(seed, index)))
