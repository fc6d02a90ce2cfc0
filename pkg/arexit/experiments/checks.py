"""Рандомизированные перекрёстные проверки для команды verify"""
from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np

from exitrates.exceptions import UnreachableConstraint
from exitrates.ldp import (
    ExitSpec, Rate, asymptotic_exit_exponent, chernoff_exit_probability_bound,
    finite_horizon_exit_rate, rate_function, rate_function_arn,
    rate_infimum_oracle)
from exitrates.matcore import (
    lyapunov_residual, lyapunov_series_oracle, matrix_power,
    solve_discrete_lyapunov, spectral_radius)
from exitrates.process import (
    ArModel, ArnModel, arn_path_from_embedded, embed_arn, first_coordinate,
    simulate_arn, simulate_path, stationary_variance_arn,
    variance_sequence_arn)
from montecarlo.mc import (
    McConfig, PathSeed, estimate_exit_probability, estimate_mean_exit_time,
    iid_mean_exit_time, normal_sampler_moments, sample_exit_time,
    sample_exit_time_arn)

from .config import TABLE1_CONFIG

logger = logging.getLogger(__name__)

PERTURBATIONS = 100


@dataclasses.dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: list = dataclasses.field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, ok, **params):
        self.instances += 1
        if not ok:
            self.failures.append(params)


def random_stable_matrix(rng, d, max_radius=0.95):
    """Случайная матрица со спектральным радиусом из (0.05, max_radius)"""
    a = rng.standard_normal((d, d))
    rho = spectral_radius(a)
    target = rng.uniform(0.05, max_radius)
    return a * (target / rho) if rho > 0 else a


def random_stable_coefficients(rng, n, max_modulus=0.9):
    """Коэффициенты AR(n) с корнями внутри круга радиуса max_modulus"""
    roots = list(rng.uniform(-max_modulus, max_modulus, size=n))
    if n >= 2 and rng.random() < 0.5:
        root = rng.uniform(0.1, max_modulus) * np.exp(
            1j * rng.uniform(0.1, np.pi - 0.1))
        roots[:2] = [root, np.conj(root)]
    return tuple(-np.real(np.poly(roots))[1:])


def _noise_choice(rng, d):
    if rng.random() < 0.5:
        return 'identity', np.eye(d)
    e1 = first_coordinate(d)
    return 'first-coordinate', np.outer(e1, e1)


def _instance(rng):
    d = int(rng.choice([1, 2, 3]))
    horizon = int(rng.integers(1, 11))
    a = random_stable_matrix(rng, d)
    noise, q = _noise_choice(rng, d)
    c = rng.standard_normal(d)
    return a, q, c, horizon, noise


def check_lyapunov(rng, trials):
    result = CheckResult('lyapunov: dense solve vs series')
    for _ in range(trials):
        d = int(rng.choice([1, 2, 3, 5]))
        a = random_stable_matrix(rng, d)
        q = np.eye(d)
        sigma = solve_discrete_lyapunov(a, q)
        series = lyapunov_series_oracle(a, q, tol=1e-13)
        scale = max(1.0, float(np.max(np.abs(sigma))))
        probes = rng.standard_normal((10, d))
        quadratic_forms = np.einsum('vi,ij,vj->v', probes, sigma, probes)
        ok = (
            np.max(np.abs(sigma - series)) <= 1e-8 * scale
            and lyapunov_residual(a, q, sigma) <= 1e-10 * (1 + scale)
            and np.max(np.abs(sigma - sigma.T)) <= 1e-12 * scale
            and np.min(quadratic_forms) >= -1e-10
            and abs(spectral_radius(a.T) - spectral_radius(a)) <= 1e-8
        )
        result.record(ok, d=d, a=a.tolist())
    return result


def check_rate_oracle(rng, trials, fault=0.0):
    result = CheckResult('rate: closed form vs least-norm infimum')
    for _ in range(trials):
        a, q, c, horizon, noise = _instance(rng)
        params = dict(a=a.tolist(), c=c.tolist(), horizon=horizon,
                      noise=noise)
        try:
            closed = finite_horizon_exit_rate(a, q, c, horizon).exponent
        except UnreachableConstraint:
            closed = None
        try:
            oracle = rate_infimum_oracle(a, q, c, horizon)
        except UnreachableConstraint:
            oracle = None
        if closed is None or oracle is None:
            result.record(closed is None and oracle is None, **params)
            continue
        closed += fault
        result.record(abs(closed - oracle) <= 1e-8 * (1 + closed),
                      **params, closed=closed, oracle=oracle)
    return result


def _endpoint(a, increments):
    horizon = increments.shape[0]
    return sum(matrix_power(a, horizon - t) @ increments[t - 1]
               for t in range(1, horizon + 1))


def check_optimal_path(rng, trials, fault=0.0):
    result = CheckResult('rate: optimal exit path')
    for _ in range(trials):
        a, q, c, horizon, noise = _instance(rng)
        params = dict(a=a.tolist(), c=c.tolist(), horizon=horizon,
                      noise=noise)
        try:
            rate = finite_horizon_exit_rate(a, q, c, horizon)
        except UnreachableConstraint:
            continue
        path = rate.optimal_path
        x0 = np.zeros(a.shape[0])
        optimum = rate_function(path, a, x0, q)
        exponent = rate.exponent + fault
        ok = (
            optimum is not Rate.INFINITE
            and abs(optimum - exponent) <= 1e-10 * (1 + exponent)
            and abs(abs(c @ path[horizon]) - 1.0) <= 1e-10
        )
        increments = path.points[1:] - path.points[:-1] @ a.T
        for _ in range(PERTURBATIONS):
            perturbed = increments + rng.standard_normal(
                increments.shape) @ q.T * 0.1
            reach = float(c @ _endpoint(a, perturbed))
            if abs(reach) < 1e-6:
                continue
            perturbed = perturbed / reach
            points = np.zeros_like(path.points)
            for t in range(1, horizon + 1):
                points[t] = a @ points[t - 1] + perturbed[t - 1]
            value = rate_function(type(path)(points), a, x0, q)
            ok = ok and value is not Rate.INFINITE and (
                value >= optimum - 1e-10 * (1 + optimum))
        result.record(ok, **params)
    return result


def check_horizons(rng, trials):
    result = CheckResult('rate: horizon monotonicity and homogeneity')
    for _ in range(trials):
        d = int(rng.choice([1, 2, 3]))
        a = random_stable_matrix(rng, d, max_radius=0.9)
        c = rng.standard_normal(d)
        rates = [finite_horizon_exit_rate(a, None, c, n).exponent
                 for n in (1, 2, 5, 10, 50, 200)]
        limit = asymptotic_exit_exponent(a, None, c).exponent
        s = rng.uniform(0.5, 3.0)
        scaled = asymptotic_exit_exponent(a, None, s * c).exponent
        ok = (
            all(later <= earlier + 1e-12
                for earlier, later in zip(rates, rates[1:]))
            and abs(rates[-1] - limit) <= 1e-6
            and abs(scaled * s ** 2 - limit) <= 1e-12 * (1 + limit)
        )
        result.record(ok, a=a.tolist(), c=c.tolist(), s=s)
    return result


def check_arn(rng, trials):
    result = CheckResult('AR(n): companion embedding')
    for _ in range(trials):
        n = int(rng.choice([1, 2, 3]))
        b = random_stable_coefficients(rng, n)
        sigma2 = stationary_variance_arn(b)
        series = variance_sequence_arn(b, 2000)[-1]
        model = ArnModel(b=b, epsilon=rng.uniform(0.3, 1.0),
                         starts=tuple(rng.uniform(-0.5, 0.5, size=n)))
        vector_model, c = embed_arn(model)
        noises = rng.standard_normal(50)
        scalar = simulate_arn(model, noises)
        embedded = arn_path_from_embedded(
            simulate_path(vector_model, noises.reshape(-1, 1)))
        horizon = int(rng.integers(1, 11))
        rate = finite_horizon_exit_rate(
            vector_model.a, vector_model.noise_covariance, c, horizon)
        path_seed = PathSeed(int(rng.integers(2**32)), 0)
        direct = sample_exit_time_arn(
            model, 1.0, 'two_sided', path_seed, max_steps=10**6)
        through_embedding = sample_exit_time(
            vector_model, ExitSpec(c=c), path_seed, max_steps=10**6)
        zero_starts = (0.0,) * n
        value = rate_function_arn(
            arn_path_from_embedded(rate.optimal_path), b, zero_starts)
        ok = (
            abs(sigma2 - series) <= 1e-8
            and scalar == embedded
            and direct == through_embedding
            and value is not Rate.INFINITE
            and abs(value - rate.exponent) <= 1e-10 * (1 + rate.exponent)
        )
        result.record(ok, b=list(b), horizon=horizon)
    return result


def check_chernoff(seed, n_paths=1000, threads=1):
    """Частота выхода не превосходит оценку Чернова (плюс 3 ст. ошибки)"""
    result = CheckResult('Chernoff bound dominance (Monte Carlo)')
    cases = [
        (((0.0,),), 0.4, (1.0,), (10, 100)),
        (TABLE1_CONFIG.model.a, 0.08, TABLE1_CONFIG.exit.c,
         (100, 1000, 10000)),
    ]
    for a, epsilon, c, horizons in cases:
        a = np.array(a)
        model = ArModel(a=a, epsilon=epsilon, x0=np.zeros(a.shape[0]))
        exit = ExitSpec(c=np.array(c))
        sigma2 = asymptotic_exit_exponent(a, None, exit.c).quadratic_form
        cfg = McConfig(n_paths=n_paths, seed=seed, parallelism=threads)
        for n_steps in horizons:
            empirical = estimate_exit_probability(model, exit, n_steps, cfg)
            bound = chernoff_exit_probability_bound(n_steps, epsilon, sigma2)
            ok = empirical.probability <= (
                min(1.0, bound) + 3 * empirical.std_error)
            result.record(ok, a=a.tolist(), epsilon=epsilon,
                          n_steps=n_steps, empirical=empirical.probability,
                          bound=bound)
    return result


def check_geometric(seed, n_paths=4000, threads=1):
    """A = 0: выборочное среднее τ против геометрического закона"""
    result = CheckResult('geometric exit time oracle (Monte Carlo)')
    model = ArModel(a=[[0.0]], epsilon=0.4, x0=[0.0])
    cfg = McConfig(n_paths=n_paths, seed=seed, parallelism=threads)
    estimate = estimate_mean_exit_time(model, ExitSpec(c=[1.0]), cfg)
    expected = iid_mean_exit_time(model.epsilon)
    result.record(
        abs(estimate.mean_tau - expected) <= 3 * estimate.std_error,
        epsilon=model.epsilon, mean_tau=estimate.mean_tau,
        expected=expected)
    return result


def check_sampler(seed, size=10**6):
    result = CheckResult('normal sampler moments')
    mean, variance = normal_sampler_moments(seed, size)
    ok = (abs(mean) <= 4 / math.sqrt(size)
          and abs(variance - 1.0) <= 4 * math.sqrt(2.0 / size))
    result.record(ok, size=size, mean=mean, variance=variance)
    return result


def run_checks(trials, seed, fault=0.0, threads=1):
    """Все наборы проверок; порядок и экземпляры зависят только от seed"""
    rng = np.random.default_rng(seed)
    results = [
        check_lyapunov(rng, trials),
        check_rate_oracle(rng, trials, fault),
        check_optimal_path(rng, trials, fault),
        check_horizons(rng, trials),
        check_arn(rng, trials),
        check_chernoff(seed, threads=threads),
        check_geometric(seed, threads=threads),
        check_sampler(seed),
    ]
    for result in results:
        logger.info('%s: %d instances, %d failures', result.name,
                    result.instances, len(result.failures))
    return results
