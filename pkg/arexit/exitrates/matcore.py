"""Малые плотные матрицы: спектральный радиус и уравнение Ляпунова"""
import logging

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, NoStationaryDistribution

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
SERIES_MAX_TERMS = 100_000
# Increments above this size are taken as a diverging series.
SERIES_BLOWUP = 1e100


def as_matrix(x, name='matrix'):
    """Двумерный массив float64 с конечными элементами"""
    m = np.array(x, dtype=np.float64, ndmin=2)
    if m.ndim != 2 or m.size == 0:
        raise DimensionError(f'{name}: expected a non-empty 2-D array, '
                             f'got shape {m.shape}')
    if not np.all(np.isfinite(m)):
        raise DimensionError(f'{name}: entries must be finite')
    return m


def as_vector(x, name='vector'):
    """Одномерный массив float64 с конечными элементами"""
    v = np.array(x, dtype=np.float64, ndmin=1)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f'{name}: expected a non-empty 1-D array, '
                             f'got shape {v.shape}')
    if not np.all(np.isfinite(v)):
        raise DimensionError(f'{name}: entries must be finite')
    return v


def _check_square(a, name):
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f'{name} must be square, got {a.shape}')


def mat_mul(a, b):
    """Произведение матриц"""
    a = as_matrix(a, 'a')
    b = as_matrix(b, 'b')
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f'cannot multiply {a.shape} by {b.shape}')
    return a @ b


def matrix_power(a, k):
    """Степень квадратной матрицы, k >= 0"""
    a = as_matrix(a, 'a')
    _check_square(a, 'a')
    if k < 0:
        raise DimensionError(f'power must be nonnegative, got {k}')
    return np.linalg.matrix_power(a, k)


def spectral_radius(a):
    """Наибольший модуль собственного значения"""
    a = as_matrix(a, 'a')
    _check_square(a, 'a')
    return float(np.max(np.abs(scipy.linalg.eigvals(a))))


def is_stable(a):
    return spectral_radius(a) < 1.0


def _check_lyapunov_inputs(a, q):
    a = as_matrix(a, 'a')
    q = as_matrix(q, 'q')
    _check_square(a, 'a')
    if q.shape != a.shape:
        raise DimensionError(
            f'q has shape {q.shape}, expected {a.shape}')
    scale = 1.0 + np.max(np.abs(q))
    if np.max(np.abs(q - q.T)) > 1e-12 * scale:
        raise DimensionError('q must be symmetric')
    if np.min(scipy.linalg.eigvalsh(q)) < -1e-10 * scale:
        raise DimensionError('q must be positive semidefinite')
    rho = spectral_radius(a)
    if rho >= 1.0:
        raise NoStationaryDistribution(
            f'no stationary distribution: spectral radius {rho:.6g} >= 1')
    return a, q


def lyapunov_residual(a, q, sigma):
    """max|Σ − aΣaᵀ − q|"""
    return float(np.max(np.abs(sigma - a @ sigma @ a.T - q)))


def solve_discrete_lyapunov(a, q):
    """Решение Σ = aΣaᵀ + q"""
    a, q = _check_lyapunov_inputs(a, q)
    d = a.shape[0]
    system = np.eye(d * d) - np.kron(a, a)
    sigma = scipy.linalg.solve(system, q.reshape(-1)).reshape(d, d)
    sigma = (sigma + sigma.T) / 2
    residual = lyapunov_residual(a, q, sigma)
    logger.debug('lyapunov solve d=%d residual=%.3e', d, residual)
    if residual > RESIDUAL_TOL * (1.0 + np.max(np.abs(sigma))):
        logger.warning('lyapunov residual %.3e above tolerance', residual)
    return sigma


def lyapunov_series_oracle(a, q, tol, max_terms=SERIES_MAX_TERMS):
    """Частичные суммы Σ aⁱ q (aᵀ)ⁱ до приращения меньше tol"""
    a = as_matrix(a, 'a')
    q = as_matrix(q, 'q')
    _check_square(a, 'a')
    if q.shape != a.shape:
        raise DimensionError(
            f'q has shape {q.shape}, expected {a.shape}')
    if tol <= 0:
        raise DimensionError(f'tol must be positive, got {tol}')
    total = q.copy()
    term = q
    for k in range(1, max_terms + 1):
        term = a @ term @ a.T
        size = np.max(np.abs(term))
        if not np.isfinite(size) or size > SERIES_BLOWUP:
            raise NoStationaryDistribution(
                f'no stationary distribution: series diverges '
                f'(term {k} has size {size:.3g})')
        total = total + term
        if size < tol:
            logger.debug('lyapunov series converged after %d terms', k)
            return total
    raise NoStationaryDistribution(
        f'no stationary distribution: series did not converge '
        f'in {max_terms} terms')
