"""Функция уклонений и экспоненты выхода из полосы |cᵀx| < 1"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, UnreachableConstraint
from .matcore import (
    as_matrix, as_vector, matrix_power, solve_discrete_lyapunov)
from .process import Path, covariance_sequence

logger = logging.getLogger(__name__)

ASYMPTOTIC = 'asymptotic'
START_TOL = 1e-12
FEASIBILITY_TOL = 1e-9
UNREACHABLE_TOL = 1e-13


class Rate(enum.Enum):
    INFINITE = 'infinite'


class Sidedness(str, enum.Enum):
    TWO_SIDED = 'two_sided'
    ONE_SIDED = 'one_sided'


@dataclass(frozen=True, eq=False)
class ExitSpec:
    c: np.ndarray
    sided: Sidedness = Sidedness.TWO_SIDED
    level: float = 1.0

    def __post_init__(self):
        c = as_vector(self.c, 'c')
        if not np.any(c):
            raise DimensionError('exit direction c must not be zero')
        if not (math.isfinite(self.level) and self.level > 0):
            raise DimensionError(
                f'exit level must be positive, got {self.level}')
        c.setflags(write=False)
        object.__setattr__(self, 'c', c)
        object.__setattr__(self, 'sided', Sidedness(self.sided))
        object.__setattr__(self, 'level', float(self.level))

    @property
    def normalized_c(self):
        """{|cᵀx| < h} = {|(c/h)ᵀx| < 1}"""
        return self.c / self.level

    @property
    def one_sided(self):
        return self.sided is Sidedness.ONE_SIDED


@dataclass(frozen=True, eq=False)
class RateResult:
    horizon: int | str
    exponent: float
    quadratic_form: float
    optimal_path: Path | None = None

    @property
    def is_asymptotic(self):
        return self.horizon == ASYMPTOTIC


class HorizonSearch(NamedTuple):
    horizon: int
    exponent: float
    converged: bool


def _inputs(a, q, c):
    a = as_matrix(a, 'a')
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f'a must be square, got {a.shape}')
    d = a.shape[0]
    q = np.eye(d) if q is None else as_matrix(q, 'q')
    if q.shape != a.shape:
        raise DimensionError(f'q has shape {q.shape}, expected {a.shape}')
    c = as_vector(c, 'c')
    if c.shape[0] != d:
        raise DimensionError(f'c has dimension {c.shape[0]}, expected {d}')
    if not np.any(c):
        raise DimensionError('exit direction c must not be zero')
    return a, q, c


def _reachable(value, c, scale):
    return value > UNREACHABLE_TOL * float(c @ c) * max(1.0, scale)


def rate_function(path, a, x0, q=None):
    """½ Σ (y_t − Ay_{t−1})ᵀ q⁺ (y_t − Ay_{t−1}) при y_0 = x0"""
    a = as_matrix(a, 'a')
    x0 = as_vector(x0, 'x0')
    if not (path.dim == a.shape[0] == a.shape[1] == x0.shape[0]):
        raise DimensionError(
            f'path of dimension {path.dim} does not match a {a.shape} '
            f'and x0 of dimension {x0.shape[0]}')
    if not np.allclose(path[0], x0, rtol=0, atol=START_TOL):
        return Rate.INFINITE
    increments = path.points[1:] - path.points[:-1] @ a.T
    if q is None:
        return 0.5 * float(np.sum(increments ** 2))
    q = as_matrix(q, 'q')
    if q.shape != a.shape:
        raise DimensionError(f'q has shape {q.shape}, expected {a.shape}')
    q_pinv = scipy.linalg.pinvh(q)
    outside = increments - increments @ (q @ q_pinv).T
    if increments.size and np.max(np.abs(outside)) > FEASIBILITY_TOL * (
            1.0 + np.max(np.abs(increments))):
        return Rate.INFINITE
    return 0.5 * float(np.einsum('ti,ij,tj->', increments, q_pinv,
                                 increments))


def rate_function_arn(path, b, starts):
    """½ Σ_{t≥n} (x_t − Σ bᵢx_{t−i})² при x_0..x_{n−1} = starts"""
    xs = as_vector(path, 'path')
    b = as_vector(b, 'b')
    starts = as_vector(starts, 'starts')
    n = b.shape[0]
    if starts.shape[0] != n:
        raise DimensionError(
            f'AR({n}) needs {n} start values, got {starts.shape[0]}')
    if xs.shape[0] < n:
        raise DimensionError(
            f'an AR({n}) path needs at least {n} values, got {xs.shape[0]}')
    if not np.allclose(xs[:n], starts, rtol=0, atol=START_TOL):
        return Rate.INFINITE
    if xs.shape[0] == n:
        return 0.0
    # row t − n holds (x_t, x_{t−1}, ..., x_{t−n})
    windows = np.lib.stride_tricks.sliding_window_view(xs, n + 1)[:, ::-1]
    residuals = windows[:, 0] - windows[:, 1:] @ b
    return 0.5 * float(np.sum(residuals ** 2))


def _optimal_path(a, c, sigmas, quadratic_form):
    # y_t = K Σ_t (A^{N−t})ᵀ c, K = 1 / cᵀΣ_N c
    horizon = len(sigmas)
    k = 1.0 / quadratic_form
    points = np.zeros((horizon + 1, a.shape[0]))
    direction = c.copy()
    for t in range(horizon, 0, -1):
        points[t] = k * sigmas[t - 1] @ direction
        direction = a.T @ direction
    return Path(points)


def finite_horizon_exit_rate(a, q, c, n_horizon):
    """1/(2cᵀΣ_N c) и траектория, на которой достигается инфимум"""
    a, q, c = _inputs(a, q, c)
    if n_horizon < 1:
        raise DimensionError(f'horizon must be at least 1, got {n_horizon}')
    sigmas = covariance_sequence(a, n_horizon, q)
    quadratic_form = float(c @ sigmas[-1] @ c)
    if not _reachable(quadratic_form, c, np.max(np.abs(sigmas[-1]))):
        raise UnreachableConstraint(
            f'unreachable constraint at this horizon: cᵀΣ_N c = '
            f'{quadratic_form:.3g} for N = {n_horizon}')
    return RateResult(
        horizon=n_horizon,
        exponent=1.0 / (2.0 * quadratic_form),
        quadratic_form=quadratic_form,
        optimal_path=_optimal_path(a, c, sigmas, quadratic_form),
    )


def optimal_exit_path(a, q, c, n_horizon):
    return finite_horizon_exit_rate(a, q, c, n_horizon).optimal_path


def asymptotic_exit_exponent(a, q, c):
    """lim ε² log Eτ = 1/(2cᵀΣ∞c)"""
    a, q, c = _inputs(a, q, c)
    sigma = solve_discrete_lyapunov(a, q)
    quadratic_form = float(c @ sigma @ c)
    if not _reachable(quadratic_form, c, np.max(np.abs(sigma))):
        raise UnreachableConstraint(
            f'unreachable constraint: cᵀΣ∞c = {quadratic_form:.3g}')
    return RateResult(
        horizon=ASYMPTOTIC,
        exponent=1.0 / (2.0 * quadratic_form),
        quadratic_form=quadratic_form,
    )


def rate_infimum_oracle(a, q, c, n_horizon):
    """Численный инфимум функции уклонений при cᵀy_N = 1"""
    a, q, c = _inputs(a, q, c)
    if n_horizon < 1:
        raise DimensionError(f'horizon must be at least 1, got {n_horizon}')
    eigenvalues, eigenvectors = scipy.linalg.eigh(q)
    keep = eigenvalues > 1e-12 * max(float(np.max(eigenvalues)), 1.0)
    loading = eigenvectors[:, keep] * np.sqrt(eigenvalues[keep])
    constraint = np.concatenate([
        c @ matrix_power(a, n_horizon - t) @ loading
        for t in range(1, n_horizon + 1)
    ]).reshape(1, -1)
    gram = constraint @ constraint.T
    if not _reachable(float(gram[0, 0]), c, np.max(np.abs(q))):
        raise UnreachableConstraint(
            f'unreachable constraint: zero constraint functional '
            f'at horizon {n_horizon}')
    multiplier = scipy.linalg.solve(gram, np.ones(1), assume_a='pos')
    increments = constraint.T @ multiplier
    return 0.5 * float(increments @ increments)


def exit_probability_exponent(a, q, c, m_horizon):
    """−lim ε² log P(τ ≤ M): минимум конечных экспонент по N ≤ M"""
    a, q, c = _inputs(a, q, c)
    if m_horizon < 1:
        raise DimensionError(f'horizon must be at least 1, got {m_horizon}')
    exponents = [
        1.0 / (2.0 * float(c @ sigma @ c))
        for sigma in covariance_sequence(a, m_horizon, q)
        if _reachable(float(c @ sigma @ c), c, np.max(np.abs(sigma)))
    ]
    if not exponents:
        raise UnreachableConstraint(
            f'unreachable constraint within {m_horizon} steps')
    return min(exponents)


def asymptotic_horizon(a, q, c, tol, max_horizon):
    """Первый N, при котором 1/(2cᵀΣ_N c) ближе tol к пределу"""
    a, q, c = _inputs(a, q, c)
    target = asymptotic_exit_exponent(a, q, c).exponent
    sigma = q.copy()
    exponent = math.inf
    for horizon in range(1, max_horizon + 1):
        if horizon > 1:
            sigma = a @ sigma @ a.T + q
        quadratic_form = float(c @ sigma @ c)
        if not _reachable(quadratic_form, c, np.max(np.abs(sigma))):
            continue
        exponent = 1.0 / (2.0 * quadratic_form)
        if abs(exponent - target) < tol:
            logger.debug('asymptotic regime reached at N=%d', horizon)
            return HorizonSearch(horizon, exponent, True)
    logger.warning('horizon search stopped at N=%d, |gap| = %.3g',
                   max_horizon, abs(exponent - target))
    return HorizonSearch(max_horizon, exponent, False)


def chernoff_exit_probability_bound(n_steps, epsilon, sigma2,
                                    sided=Sidedness.TWO_SIDED):
    """P(τ ≤ N) ≤ 2N·exp(−1/(2ε²σ²)); N·exp(...) для одностороннего выхода"""
    if n_steps < 1:
        raise DimensionError(f'n_steps must be at least 1, got {n_steps}')
    if not epsilon > 0:
        raise DimensionError(f'epsilon must be positive, got {epsilon}')
    if not sigma2 > 0:
        raise DimensionError(f'sigma2 must be positive, got {sigma2}')
    factor = 1.0 if Sidedness(sided) is Sidedness.ONE_SIDED else 2.0
    return factor * n_steps * math.exp(-1.0 / (2.0 * epsilon ** 2 * sigma2))


def lower_bound_exponent(sigma2):
    """1/(2σ²); совпадает с асимптотикой при σ² = cᵀΣ∞c"""
    if not sigma2 > 0:
        raise DimensionError(f'sigma2 must be positive, got {sigma2}')
    return 1.0 / (2.0 * sigma2)


def mean_exit_time_upper_bound(m_steps, exit_probability):
    """Eτ ≤ 2M / P(τ ≤ M)"""
    if m_steps < 1:
        raise DimensionError(f'm_steps must be at least 1, got {m_steps}')
    if not 0 < exit_probability <= 1:
        raise DimensionError(
            f'exit probability must lie in (0, 1], got {exit_probability}')
    return 2.0 * m_steps / exit_probability
