"""Монте-Карло оценки времени выхода τ = min{t ≥ 1 : |cᵀX_t| ≥ 1}"""
from __future__ import annotations

import dataclasses
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np
from django.conf import settings
from scipy.stats import norm

from exitrates.exceptions import DimensionError, NoExitsObserved
from exitrates.ldp import Sidedness
from exitrates.process import first_coordinate

from . import kernels
from .rng import RNG_VERSION, path_generator, path_key

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95
CENSORED = -1


class PathSeed(NamedTuple):
    seed: int
    index: int


@dataclasses.dataclass(frozen=True)
class McConfig:
    n_paths: int = 1000
    seed: int = 0
    max_steps: int = 10**9
    parallelism: int | str = 'auto'
    block_size: int = 4096

    def __post_init__(self):
        if self.n_paths < 1:
            raise DimensionError(f'n_paths must be positive, '
                                 f'got {self.n_paths}')
        if self.max_steps < 1:
            raise DimensionError(f'max_steps must be positive, '
                                 f'got {self.max_steps}')
        if self.block_size < 1:
            raise DimensionError(f'block_size must be positive, '
                                 f'got {self.block_size}')
        if self.parallelism != 'auto' and not (
                isinstance(self.parallelism, int) and self.parallelism >= 1):
            raise DimensionError(f"parallelism must be 'auto' or a positive "
                                 f'integer, got {self.parallelism!r}')
        path_key(self.seed, self.n_paths - 1)

    @classmethod
    def from_settings(cls, **overrides):
        """Значения по умолчанию из settings.AREXIT; None не переопределяет"""
        defaults = settings.AREXIT
        values = {
            'n_paths': defaults['N_PATHS'],
            'seed': defaults['SEED'],
            'max_steps': defaults['MAX_STEPS'],
            'parallelism': defaults['THREADS'],
            'block_size': defaults['BLOCK_SIZE'],
        }
        values.update(
            {key: value for key, value in overrides.items()
             if value is not None})
        return cls(**values)

    @property
    def threads(self):
        if self.parallelism == 'auto':
            return min(os.cpu_count() or 1, self.n_paths)
        return min(self.parallelism, self.n_paths)


@dataclasses.dataclass(frozen=True)
class McEstimate:
    epsilon: float
    mean_tau: float
    ci_low: float
    ci_high: float
    std_error: float
    scaled_log: float
    n_paths: int
    censored: int
    seed: int
    rng_version: str = RNG_VERSION

    @property
    def lower_bound(self):
        """Цензурированные траектории делают среднее оценкой снизу"""
        return self.censored > 0


@dataclasses.dataclass(frozen=True)
class ExitProbability:
    n_steps: int
    probability: float
    ci_low: float
    ci_high: float
    hits: int
    n_paths: int

    @property
    def std_error(self):
        p = self.probability
        return math.sqrt(p * (1.0 - p) / self.n_paths)


def _exit_direction(model, exit):
    c = exit.normalized_c
    if c.shape[0] != model.dim:
        raise DimensionError(
            f'exit direction has dimension {c.shape[0]}, '
            f'model has {model.dim}')
    return np.ascontiguousarray(c)


def _run_paths(sample, n_paths, threads):
    taus = np.empty(n_paths, dtype=np.int64)

    def run(index):
        taus[index] = sample(index)

    if threads == 1:
        for index in range(n_paths):
            run(index)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(n_paths)))
    return taus


def sample_exit_time(model, exit, path_seed, max_steps,
                     block_size=4096):
    """Время выхода одной траектории или None, если выхода не было"""
    seed, index = path_seed
    tau = kernels.ar_exit_time(
        path_generator(seed, index), model.a, model.loading, model.x0,
        _exit_direction(model, exit), model.epsilon, exit.one_sided,
        max_steps, block_size)
    return None if tau == CENSORED else int(tau)


def sample_exit_time_arn(model, level, sided, path_seed, max_steps,
                         block_size=4096):
    """То же для скалярной рекурсии AR(n), выход при |x_t| ≥ level"""
    seed, index = path_seed
    scale = float((first_coordinate(model.order) / level)[0])
    tau = kernels.arn_exit_time(
        path_generator(seed, index), np.array(model.b),
        np.array(model.starts), scale, model.epsilon,
        Sidedness(sided) is Sidedness.ONE_SIDED, max_steps, block_size)
    return None if tau == CENSORED else int(tau)


def simulate_exit_times(model, exit, cfg):
    """Времена выхода всех траекторий по номерам; -1 для цензурированных"""
    c = _exit_direction(model, exit)

    def sample(index):
        return kernels.ar_exit_time(
            path_generator(cfg.seed, index), model.a, model.loading,
            model.x0, c, model.epsilon, exit.one_sided, cfg.max_steps,
            cfg.block_size)

    return _run_paths(sample, cfg.n_paths, cfg.threads)


def simulate_exit_times_arn(model, level, sided, cfg):
    b = np.array(model.b)
    starts = np.array(model.starts)
    scale = float((first_coordinate(model.order) / level)[0])
    one_sided = Sidedness(sided) is Sidedness.ONE_SIDED

    def sample(index):
        return kernels.arn_exit_time(
            path_generator(cfg.seed, index), b, starts, scale,
            model.epsilon, one_sided, cfg.max_steps, cfg.block_size)

    return _run_paths(sample, cfg.n_paths, cfg.threads)


def scaled_log_mean(epsilon, mean_tau):
    """ε² log Eτ"""
    if mean_tau < 1:
        raise DimensionError(
            f'mean exit time must be at least 1, got {mean_tau}')
    return epsilon ** 2 * math.log(mean_tau)


def estimate_mean_exit_time(model, exit, cfg):
    """Среднее время выхода с 95% доверительным интервалом"""
    logger.info('simulating %d paths, epsilon=%g, seed=%d, threads=%d',
                cfg.n_paths, model.epsilon, cfg.seed, cfg.threads)
    started = time.perf_counter()
    taus = simulate_exit_times(model, exit, cfg)
    censored = int(np.count_nonzero(taus == CENSORED))
    if censored == cfg.n_paths:
        raise NoExitsObserved(
            f'no exits observed: all {cfg.n_paths} paths reached '
            f'max_steps={cfg.max_steps}')
    if censored:
        logger.warning('%d of %d paths censored at %d steps; mean exit '
                       'time is a lower bound', censored, cfg.n_paths,
                       cfg.max_steps)
    observed = np.where(taus == CENSORED, cfg.max_steps, taus).astype(
        np.float64)
    mean_tau = float(np.mean(observed))
    if cfg.n_paths > 1:
        std_error = float(np.std(observed, ddof=1)) / math.sqrt(cfg.n_paths)
    else:
        std_error = 0.0
    half_width = norm.ppf(0.5 + CONFIDENCE / 2) * std_error
    logger.info('epsilon=%g: mean tau %.6g after %.1f s', model.epsilon,
                mean_tau, time.perf_counter() - started)
    return McEstimate(
        epsilon=model.epsilon,
        mean_tau=mean_tau,
        ci_low=mean_tau - half_width,
        ci_high=mean_tau + half_width,
        std_error=std_error,
        scaled_log=scaled_log_mean(model.epsilon, mean_tau),
        n_paths=cfg.n_paths,
        censored=censored,
        seed=cfg.seed,
    )


def wilson_interval(hits, n, confidence=CONFIDENCE):
    z = norm.ppf(0.5 + confidence / 2)
    p = hits / n
    denominator = 1.0 + z ** 2 / n
    centre = (p + z ** 2 / (2 * n)) / denominator
    half_width = z * math.sqrt(
        p * (1.0 - p) / n + z ** 2 / (4 * n ** 2)) / denominator
    return max(0.0, centre - half_width), min(1.0, centre + half_width)


def estimate_exit_probability(model, exit, n_steps, cfg):
    """Доля траекторий с τ ≤ n_steps и интервал Уилсона"""
    if n_steps < 1:
        raise DimensionError(f'n_steps must be at least 1, got {n_steps}')
    taus = simulate_exit_times(
        model, exit, dataclasses.replace(cfg, max_steps=n_steps))
    hits = int(np.count_nonzero(taus != CENSORED))
    ci_low, ci_high = wilson_interval(hits, cfg.n_paths)
    return ExitProbability(
        n_steps=n_steps,
        probability=hits / cfg.n_paths,
        ci_low=ci_low,
        ci_high=ci_high,
        hits=hits,
        n_paths=cfg.n_paths,
    )


def iid_mean_exit_time(epsilon, level=1.0, sided=Sidedness.TWO_SIDED):
    """Eτ при A = 0, d = 1: τ геометрическое с p = 2Φ̄(level/ε)"""
    tail = norm.sf(level / epsilon)
    if Sidedness(sided) is Sidedness.TWO_SIDED:
        tail *= 2.0
    return 1.0 / tail


def normal_sampler_moments(seed, size, block_size=4096):
    """Выборочные среднее и дисперсия size нормальных величин ядра"""
    return kernels.normal_moments(path_generator(seed, 0), size, block_size)
