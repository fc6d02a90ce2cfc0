"""Воспроизведение таблицы двумерного примера A = [[0.8, 1], [0, 0.5]]"""
import logging
import time

from django.core.management.base import CommandError

from exitrates.exceptions import NoExitsObserved
from exitrates.ldp import asymptotic_exit_exponent
from experiments.base import COMPUTATIONAL_FAILURE, ExperimentCommand
from experiments.config import TABLE1_CONFIG, TABLE1_PUBLISHED
from experiments.reports import (
    TABLE1_FIELDS, estimate_row, render_table, write_rows)
from montecarlo.mc import estimate_mean_exit_time

logger = logging.getLogger(__name__)


def table1_rows(cfg, epsilons=None):
    """Строки таблицы: опубликованное значение рядом с вычисленным"""
    exit = TABLE1_CONFIG.exit_spec()
    model = TABLE1_CONFIG.vector_model()
    limit = asymptotic_exit_exponent(
        model.a, model.noise_covariance, exit.normalized_c).exponent
    rows = []
    for epsilon in epsilons or TABLE1_CONFIG.analysis.epsilons:
        started = time.perf_counter()
        estimate = estimate_mean_exit_time(
            TABLE1_CONFIG.vector_model(epsilon), exit, cfg)
        published = TABLE1_PUBLISHED.get(epsilon)
        rows.append({
            **estimate_row(estimate),
            'published': published,
            'computed': estimate.scaled_log,
            'abs_diff': (None if published is None
                         else abs(estimate.scaled_log - published)),
            'limit': limit,
        })
        logger.info('table1 row epsilon=%g done in %.1f s', epsilon,
                    time.perf_counter() - started)
    return rows, limit


class Command(ExperimentCommand):
    help = 'Reproduce the bivariate AR(1) exit-time table'

    def add_arguments(self, parser):
        self.add_mc_arguments(parser)
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        cfg = self.mc_config(options, TABLE1_CONFIG)
        try:
            rows, limit = table1_rows(cfg, options.get('eps'))
        except NoExitsObserved as error:
            raise CommandError(str(error), returncode=COMPUTATIONAL_FAILURE)
        summary = (render_table(rows, TABLE1_FIELDS[:5])
                   + f'\nlimit 81/2426 = {limit:.6g}')
        self.emit(
            lambda stream: write_rows(
                rows, TABLE1_FIELDS, self.output_format(options), stream,
                limit=limit),
            summary, self.output_path(options))
