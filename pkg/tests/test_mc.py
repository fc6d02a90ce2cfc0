import dataclasses
import math

import numpy as np
import pytest
from scipy.stats import norm

from exitrates.exceptions import DimensionError, NoExitsObserved
from exitrates.ldp import (
    ExitSpec, asymptotic_exit_exponent, chernoff_exit_probability_bound,
    mean_exit_time_upper_bound)
from exitrates.process import ArModel, embed_arn
from experiments.config import TABLE1_PUBLISHED
from montecarlo.mc import (
    McConfig, PathSeed, estimate_exit_probability, estimate_mean_exit_time,
    iid_mean_exit_time, normal_sampler_moments, sample_exit_time,
    sample_exit_time_arn, scaled_log_mean, simulate_exit_times,
    simulate_exit_times_arn, wilson_interval)
from montecarlo.rng import RNG_VERSION, path_generator, path_key
from tests.fixtures.fixture_data import (
    TABLE1_A, TABLE1_C, TABLE1_LIMIT, TEST_SEED)

TABLE1_TOLERANCE = 0.005


def test_path_key_layout():
    assert path_key(3, 5) == 3 * 2 ** 64 + 5
    for bad in ((-1, 0), (2 ** 64, 0), (0, -1)):
        with pytest.raises(DimensionError):
            path_key(*bad)


def test_path_generators_are_independent_of_order():
    first = path_generator(TEST_SEED, 7).standard_normal(5)
    path_generator(TEST_SEED, 8).standard_normal(100)
    again = path_generator(TEST_SEED, 7).standard_normal(5)
    assert np.array_equal(first, again), (
        'Шум траектории должен зависеть только от (seed, номер).'
    )
    other = path_generator(TEST_SEED, 8).standard_normal(5)
    assert not np.array_equal(first, other)


def test_rng_version_names_generator():
    assert 'philox' in RNG_VERSION and np.__version__ in RNG_VERSION


@pytest.mark.parametrize('params', [
    {'n_paths': 0},
    {'max_steps': 0},
    {'parallelism': 0},
    {'parallelism': 'many'},
    {'seed': -1},
])
def test_mc_config_validation(params):
    with pytest.raises(DimensionError):
        McConfig(**params)


def test_mc_config_from_settings(settings):
    settings.AREXIT = {**settings.AREXIT, 'N_PATHS': 17, 'SEED': 5}
    cfg = McConfig.from_settings(seed=None, max_steps=100)
    assert (cfg.n_paths, cfg.seed, cfg.max_steps) == (17, 5, 100), (
        'Значения None не должны переопределять настройки AREXIT.'
    )
    assert McConfig(n_paths=3, parallelism=8).threads == 3


def test_sample_exit_time_deterministic(table1_model, table1_exit):
    model = dataclasses.replace(table1_model, epsilon=0.3)
    first = sample_exit_time(model, table1_exit, PathSeed(TEST_SEED, 4), 10**6)
    second = sample_exit_time(model, table1_exit, PathSeed(TEST_SEED, 4),
                              10**6)
    assert first == second and first >= 1


def test_sample_exit_time_censored(table1_model, table1_exit):
    model = dataclasses.replace(table1_model, epsilon=0.01)
    assert sample_exit_time(
        model, table1_exit, PathSeed(TEST_SEED, 0), max_steps=50) is None, (
        'Траектория без выхода за max_steps должна давать None.'
    )


def test_exit_from_outside_start_is_immediate(table1_exit):
    model = ArModel(a=TABLE1_A, epsilon=0.01, x0=[3.0, 0.0])
    assert sample_exit_time(
        model, table1_exit, PathSeed(TEST_SEED, 0), max_steps=10) == 1


def test_one_sided_exit_is_later(iid_model):
    two = simulate_exit_times(
        iid_model, ExitSpec(c=[1.0]),
        McConfig(n_paths=500, seed=TEST_SEED, parallelism=1))
    one = simulate_exit_times(
        iid_model, ExitSpec(c=[1.0], sided='one_sided'),
        McConfig(n_paths=500, seed=TEST_SEED, parallelism=1))
    assert np.all(one >= two), (
        'На одном и том же шуме односторонний выход не раньше двустороннего.'
    )


@pytest.mark.parametrize('threads', [2, 3, 8])
def test_thread_count_does_not_change_results(
        threads, table1_model, table1_exit, small_mc):
    model = dataclasses.replace(table1_model, epsilon=0.12)
    serial = simulate_exit_times(model, table1_exit, small_mc)
    parallel = simulate_exit_times(
        model, table1_exit, dataclasses.replace(small_mc,
                                                parallelism=threads))
    assert np.array_equal(serial, parallel), (
        'Времена выхода не должны зависеть от числа потоков.'
    )


def test_block_size_does_not_change_results(
        table1_model, table1_exit, small_mc):
    model = dataclasses.replace(table1_model, epsilon=0.12)
    base = simulate_exit_times(model, table1_exit, small_mc)
    small = simulate_exit_times(
        model, table1_exit, dataclasses.replace(small_mc, block_size=7))
    assert np.array_equal(base, small)


def test_arn_sampler_matches_embedding(ar2_model):
    vector_model, c = embed_arn(ar2_model)
    cfg = McConfig(n_paths=300, seed=TEST_SEED, parallelism=2)
    direct = simulate_exit_times_arn(ar2_model, 1.0, 'two_sided', cfg)
    embedded = simulate_exit_times(vector_model, ExitSpec(c=c), cfg)
    assert np.array_equal(direct, embedded), (
        'Времена выхода AR(2) и его векторного вложения должны совпадать '
        'бит в бит при одном и том же шуме.'
    )
    path_seed = PathSeed(TEST_SEED, 11)
    assert sample_exit_time_arn(
        ar2_model, 1.0, 'two_sided', path_seed, 10**6) == direct[11]


def test_geometric_oracle(iid_model, scalar_exit):
    cfg = McConfig(n_paths=4000, seed=TEST_SEED)
    estimate = estimate_mean_exit_time(iid_model, scalar_exit, cfg)
    expected = 1.0 / (2.0 * norm.sf(2.5))
    assert iid_mean_exit_time(0.4) == pytest.approx(expected)
    assert abs(estimate.mean_tau - expected) <= 3 * estimate.std_error, (
        'Для A = 0 время выхода геометрическое: Eτ = 1/(2Φ̄(1/ε)).'
    )
    assert estimate.ci_low < estimate.mean_tau < estimate.ci_high
    assert estimate.censored == 0 and not estimate.lower_bound
    assert estimate.rng_version == RNG_VERSION


def test_iid_one_sided_mean():
    assert iid_mean_exit_time(0.4, sided='one_sided') == pytest.approx(
        1.0 / norm.sf(2.5))


def test_all_censored_raises(iid_model, scalar_exit):
    model = dataclasses.replace(iid_model, epsilon=0.05)
    cfg = McConfig(n_paths=20, seed=TEST_SEED, max_steps=10)
    with pytest.raises(NoExitsObserved):
        estimate_mean_exit_time(model, scalar_exit, cfg)


def test_partially_censored_is_lower_bound(iid_model, scalar_exit):
    cfg = McConfig(n_paths=400, seed=TEST_SEED, max_steps=40)
    estimate = estimate_mean_exit_time(iid_model, scalar_exit, cfg)
    assert estimate.censored > 0 and estimate.lower_bound, (
        'При цензурировании оценка среднего помечается как нижняя граница.'
    )
    assert estimate.mean_tau <= 40


def test_scaled_log_mean():
    assert scaled_log_mean(0.1, math.e) == pytest.approx(0.01)
    with pytest.raises(DimensionError):
        scaled_log_mean(0.1, 0.5)


def test_wilson_interval():
    low, high = wilson_interval(0, 100)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert 0 < high < 0.05
    low, high = wilson_interval(50, 100)
    assert low < 0.5 < high


def test_exit_probability_against_geometric(iid_model, scalar_exit):
    p = 2 * norm.sf(2.5)
    cfg = McConfig(n_paths=4000, seed=TEST_SEED)
    result = estimate_exit_probability(iid_model, scalar_exit, 50, cfg)
    expected = 1 - (1 - p) ** 50
    assert abs(result.probability - expected) <= 3 * result.std_error
    assert result.ci_low < result.probability < result.ci_high
    assert mean_exit_time_upper_bound(50, expected) >= iid_mean_exit_time(
        0.4), 'Должно выполняться Eτ ≤ 2M / P(τ ≤ M).'


@pytest.mark.parametrize('n_steps', [100, 1000, 10000])
def test_chernoff_dominance(n_steps, table1_model, table1_exit):
    model = dataclasses.replace(table1_model, epsilon=0.08)
    sigma2 = asymptotic_exit_exponent(
        TABLE1_A, None, TABLE1_C).quadratic_form
    cfg = McConfig(n_paths=1000, seed=TEST_SEED)
    result = estimate_exit_probability(model, table1_exit, n_steps, cfg)
    bound = chernoff_exit_probability_bound(n_steps, 0.08, sigma2)
    assert result.probability <= min(1.0, bound) + 3 * result.std_error, (
        'Эмпирическая вероятность выхода не должна превышать '
        'оценку 2N·exp(−1/(2ε²σ²)).'
    )


def test_normal_sampler_moments():
    size = 10**6
    mean, variance = normal_sampler_moments(TEST_SEED, size)
    assert abs(mean) <= 4 / math.sqrt(size)
    assert abs(variance - 1) <= 4 * math.sqrt(2 / size)


@pytest.mark.parametrize('epsilon', [0.12, 0.10, 0.08, 0.07])
def test_table1_rows(epsilon, table1_model, table1_exit):
    model = dataclasses.replace(table1_model, epsilon=epsilon)
    estimate = estimate_mean_exit_time(
        model, table1_exit, McConfig(n_paths=1000, seed=TEST_SEED))
    assert abs(estimate.scaled_log - TABLE1_PUBLISHED[epsilon]) <= (
        TABLE1_TOLERANCE), (
        f'При ε = {epsilon} значение ε² log Eτ должно быть близко '
        f'к {TABLE1_PUBLISHED[epsilon]}.'
    )
    assert estimate.scaled_log > TABLE1_LIMIT


@pytest.mark.slow
@pytest.mark.parametrize('epsilon', [0.06, 0.05])
def test_table1_small_epsilon_rows(epsilon, table1_model, table1_exit):
    model = dataclasses.replace(table1_model, epsilon=epsilon)
    estimate = estimate_mean_exit_time(
        model, table1_exit, McConfig(n_paths=1000, seed=TEST_SEED))
    assert estimate.censored == 0
    assert abs(estimate.scaled_log - TABLE1_PUBLISHED[epsilon]) <= (
        TABLE1_TOLERANCE)


def test_different_seeds_agree(table1_model, table1_exit):
    model = dataclasses.replace(table1_model, epsilon=0.10)
    first, second = (
        estimate_mean_exit_time(
            model, table1_exit, McConfig(n_paths=1000, seed=seed))
        for seed in (TEST_SEED, TEST_SEED + 1))
    assert first.mean_tau != second.mean_tau, (
        'Разные seed должны давать разные выборки.'
    )
    assert first.ci_low <= second.ci_high and second.ci_low <= first.ci_high, (
        'Доверительные интервалы при разных seed должны пересекаться.'
    )
