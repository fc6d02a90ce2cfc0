"""Авторегрессионные модели: AR(1) в ℝᵈ и скалярная AR(n)"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import DimensionError
from .matcore import (
    as_matrix, as_vector, matrix_power, solve_discrete_lyapunov)


def _frozen(array):
    array.setflags(write=False)
    return array


def _check_epsilon(epsilon):
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise DimensionError(f'epsilon must be positive, got {epsilon}')
    return float(epsilon)


@dataclass(frozen=True, eq=False)
class ArModel:
    a: np.ndarray
    epsilon: float
    x0: np.ndarray
    loading: np.ndarray | None = None

    def __post_init__(self):
        a = as_matrix(self.a, 'a')
        if a.shape[0] != a.shape[1]:
            raise DimensionError(f'a must be square, got {a.shape}')
        x0 = as_vector(self.x0, 'x0')
        if x0.shape[0] != a.shape[0]:
            raise DimensionError(
                f'x0 has dimension {x0.shape[0]}, expected {a.shape[0]}')
        if self.loading is None:
            loading = np.eye(a.shape[0])
        else:
            loading = as_matrix(self.loading, 'loading')
        if loading.shape[0] != a.shape[0]:
            raise DimensionError(
                f'loading has {loading.shape[0]} rows, '
                f'expected {a.shape[0]}')
        object.__setattr__(self, 'a', _frozen(a))
        object.__setattr__(self, 'x0', _frozen(x0))
        object.__setattr__(self, 'loading', _frozen(loading))
        object.__setattr__(self, 'epsilon', _check_epsilon(self.epsilon))

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def noise_dim(self):
        return self.loading.shape[1]

    @property
    def noise_covariance(self):
        return self.loading @ self.loading.T


@dataclass(frozen=True, eq=False)
class ArnModel:
    b: tuple
    epsilon: float
    starts: tuple = None

    def __post_init__(self):
        b = tuple(float(v) for v in as_vector(self.b, 'b'))
        if self.starts is None:
            starts = (0.0,) * len(b)
        else:
            starts = tuple(float(v) for v in as_vector(self.starts, 'starts'))
        if len(starts) != len(b):
            raise DimensionError(
                f'AR({len(b)}) needs {len(b)} start values, '
                f'got {len(starts)}')
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'starts', starts)
        object.__setattr__(self, 'epsilon', _check_epsilon(self.epsilon))

    @property
    def order(self):
        return len(self.b)


@dataclass(frozen=True, eq=False)
class Path:
    """Траектория y_0, y_1, ..., y_T; points имеет форму (T + 1, d)"""

    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.size == 0:
            raise DimensionError(
                f'path points must form a (T + 1, d) array, '
                f'got shape {points.shape}')
        object.__setattr__(self, 'points', _frozen(points))

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def horizon(self):
        return self.points.shape[0] - 1

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, t):
        return self.points[t]


def step(model, x, noise):
    """A·x + ε·L·ξ, шум ξ размерности noise_dim"""
    x = as_vector(x, 'x')
    noise = as_vector(noise, 'noise')
    if x.shape[0] != model.dim or noise.shape[0] != model.noise_dim:
        raise DimensionError(
            f'x must have dimension {model.dim} and noise {model.noise_dim}, '
            f'got {x.shape[0]} and {noise.shape[0]}')
    return model.a @ x + model.epsilon * (model.loading @ noise)



def mean_at(model, t):
    """Среднее EX_t = Aᵗ·x₀"""
    return matrix_power(model.a, t) @ model.x0


def covariance_sequence(a, t_max, q=None):
    """[Σ_1, ..., Σ_{t_max}] по рекурсии Σ_t = aΣ_{t−1}aᵀ + q, Σ_1 = q"""
    a = as_matrix(a, 'a')
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f'a must be square, got {a.shape}')
    if t_max < 1:
        raise DimensionError(f't_max must be at least 1, got {t_max}')
    q = np.eye(a.shape[0]) if q is None else as_matrix(q, 'q')
    if q.shape != a.shape:
        raise DimensionError(f'q has shape {q.shape}, expected {a.shape}')
    sigmas = [q.copy()]
    for _ in range(t_max - 1):
        sigmas.append(a @ sigmas[-1] @ a.T + q)
    return sigmas


def companion_matrix(b):
    """Сопровождающая матрица: первая строка b, единицы под диагональю"""
    b = as_vector(b, 'b')
    n = b.shape[0]
    companion = np.zeros((n, n))
    companion[0] = b
    companion[np.arange(1, n), np.arange(n - 1)] = 1.0
    return companion


def first_coordinate(n):
    e1 = np.zeros(n)
    e1[0] = 1.0
    return e1


def embed_arn(model):
    """Векторная модель Y_t = BY_{t−1} + ε(ξ_t, 0, ..., 0)ᵀ и c = e₁"""
    n = model.order
    vector_model = ArModel(
        a=companion_matrix(model.b),
        epsilon=model.epsilon,
        x0=np.array(model.starts[::-1]),
        loading=first_coordinate(n).reshape(n, 1),
    )
    return vector_model, first_coordinate(n)


def stationary_variance_arn(b):
    """σ² стационарного распределения AR(n) (в единицах ε²)"""
    companion = companion_matrix(b)
    e1 = first_coordinate(companion.shape[0])
    sigma = solve_discrete_lyapunov(companion, np.outer(e1, e1))
    return float(e1 @ sigma @ e1)


def variance_sequence_arn(b, t_max):
    """σ_t² = Σ_{k<t} (B₁₁ᵏ)² для t = 1..t_max шагов после начальных"""
    if t_max < 1:
        raise DimensionError(f't_max must be at least 1, got {t_max}')
    companion = companion_matrix(b)
    power = np.eye(companion.shape[0])
    total = 0.0
    variances = []
    for _ in range(t_max):
        total += power[0, 0] ** 2
        variances.append(total)
        power = power @ companion
    return variances


def simulate_path(model, noises):
    """Траектория модели по заданному шуму формы (T, k)"""
    noises = np.array(noises, dtype=np.float64)
    if noises.ndim == 1:
        noises = noises.reshape(-1, model.noise_dim)
    if noises.ndim != 2 or noises.shape[1] != model.noise_dim:
        raise DimensionError(
            f'noises must have shape (T, {model.noise_dim}), '
            f'got {noises.shape}')
    return Path(kernels.ar_path(
        model.a, model.loading, model.x0, model.epsilon,
        np.ascontiguousarray(noises)))


def simulate_arn(model, noises):
    """Скалярная рекурсия AR(n): x_0..x_{n−1} и далее по шуму формы (T,)"""
    noises = as_vector(noises, 'noises') if len(noises) else np.empty(0)
    values = kernels.arn_path(
        np.array(model.b), np.array(model.starts), model.epsilon, noises)
    return values.tolist()


def embed_arn_path(xs, n):
    """Y_t = (x_{t+n−1}, ..., x_t) для скалярной траектории x_0..x_T"""
    xs = as_vector(xs, 'xs')
    if xs.shape[0] < n:
        raise DimensionError(
            f'an AR({n}) path needs at least {n} values, got {xs.shape[0]}')
    windows = np.lib.stride_tricks.sliding_window_view(xs, n)
    return Path(windows[:, ::-1])


def arn_path_from_embedded(path):
    """Обратно к скалярной траектории: начальное окно, затем y_t[0]"""
    return path.points[0, ::-1].tolist() + path.points[1:, 0].tolist()
