"""Монте-Карло оценка ε² log Eτ по сетке ε"""
import logging
import time

from django.core.management.base import CommandError

from exitrates.exceptions import NoExitsObserved
from experiments.base import COMPUTATIONAL_FAILURE, ExperimentCommand
from experiments.reports import (
    SIMULATE_FIELDS, estimate_row, render_table, write_rows)
from montecarlo.mc import estimate_mean_exit_time

logger = logging.getLogger(__name__)


def sweep(config, epsilons, cfg):
    """Оценки для каждого ε; общий seed, т.е. общие случайные числа"""
    exit = config.exit_spec()
    estimates = []
    for epsilon in epsilons:
        started = time.perf_counter()
        estimates.append(estimate_mean_exit_time(
            config.vector_model(epsilon), exit, cfg))
        logger.info('simulate epsilon=%g done in %.1f s', epsilon,
                    time.perf_counter() - started)
    return estimates


class Command(ExperimentCommand):
    help = 'Monte Carlo estimate of the mean exit time'

    def add_arguments(self, parser):
        self.add_config_argument(parser, required=True)
        self.add_mc_arguments(parser)
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        config = self.load(options)
        cfg = self.mc_config(options, config)
        epsilons = (options.get('eps') or config.analysis.epsilons
                    or [config.model.epsilon])
        try:
            estimates = sweep(config, epsilons, cfg)
        except NoExitsObserved as error:
            raise CommandError(str(error), returncode=COMPUTATIONAL_FAILURE)
        for estimate in estimates:
            if estimate.lower_bound:
                self.stderr.write(self.style.WARNING(
                    f'epsilon={estimate.epsilon:g}: {estimate.censored} '
                    f'censored paths, mean_tau is a lower bound'))
        rows = [estimate_row(estimate) for estimate in estimates]
        self.emit(
            lambda stream: write_rows(
                rows, SIMULATE_FIELDS, self.output_format(options, config),
                stream),
            render_table(rows, SIMULATE_FIELDS),
            self.output_path(options, config))
