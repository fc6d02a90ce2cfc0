"""Аналитический отчёт: Σ∞, экспоненты выхода, оптимальная траектория"""
from django.conf import settings
from django.core.management.base import CommandError

from exitrates.exceptions import (
    NoStationaryDistribution, UnreachableConstraint)
from exitrates.ldp import (
    ASYMPTOTIC, asymptotic_exit_exponent, asymptotic_horizon,
    finite_horizon_exit_rate, lower_bound_exponent)
from exitrates.matcore import (
    is_stable, solve_discrete_lyapunov, spectral_radius)
from exitrates.process import stationary_variance_arn
from experiments.base import COMPUTATIONAL_FAILURE, ExperimentCommand
from experiments.reports import (
    HORIZON_FIELDS, render_table, write_json, write_rows)

UNSTABLE_MESSAGE = ('no stationary distribution; exit exponent is 0 is NOT '
                    'implied — analysis unsupported')


def horizon_rows(a, q, c, horizons):
    """Строки таблицы конечных горизонтов и оптимальный путь при max N"""
    rows = []
    best = None
    for horizon in sorted(set(horizons)):
        try:
            rate = finite_horizon_exit_rate(a, q, c, horizon)
        except UnreachableConstraint:
            rows.append({'horizon': horizon, 'quadratic_form': 0.0,
                         'exponent': None})
            continue
        rows.append({'horizon': horizon,
                     'quadratic_form': rate.quadratic_form,
                     'exponent': rate.exponent})
        best = rate
    return rows, best


def analyze(config):
    model = config.vector_model()
    a, q = model.a, model.noise_covariance
    c = config.exit_spec().normalized_c
    if not is_stable(a):
        raise NoStationaryDistribution(
            f'spectral radius {spectral_radius(a):.6g} is not below 1')
    sigma = solve_discrete_lyapunov(a, q)
    limit = asymptotic_exit_exponent(a, q, c)
    search = asymptotic_horizon(
        a, q, c, settings.AREXIT['ASYMPTOTIC_TOL'],
        settings.AREXIT['ASYMPTOTIC_MAX_HORIZON'])
    horizons = config.analysis.horizons or settings.AREXIT['HORIZONS']
    rows, best = horizon_rows(a, q, c, horizons)
    report = {
        'model': config.model.kind,
        'spectral_radius': spectral_radius(a),
        'stationary_covariance': sigma,
        'quadratic_form': limit.quadratic_form,
        'asymptotic_exponent': limit.exponent,
        'lower_bound_exponent': lower_bound_exponent(limit.quadratic_form),
        'asymptotic_horizon': search._asdict(),
        'horizons': rows,
        'optimal_path': None if best is None else {
            'horizon': best.horizon,
            'points': best.optimal_path.points,
        },
    }
    if config.is_arn:
        report['stationary_variance'] = stationary_variance_arn(
            config.model.b)
    return report


class Command(ExperimentCommand):
    help = 'Exact exit-time asymptotics of a stable AR model'
    default_format = 'json'

    def add_arguments(self, parser):
        self.add_config_argument(parser, required=True)
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        config = self.load(options)
        try:
            report = analyze(config)
        except NoStationaryDistribution:
            raise CommandError(UNSTABLE_MESSAGE,
                               returncode=COMPUTATIONAL_FAILURE)
        except UnreachableConstraint as error:
            raise CommandError(str(error), returncode=COMPUTATIONAL_FAILURE)
        fmt = self.output_format(options, config)
        self.emit(lambda stream: self.write(report, fmt, stream),
                  self.summary(report), self.output_path(options, config))

    @staticmethod
    def write(report, fmt, stream):
        if fmt == 'json':
            write_json(report, stream)
            return
        rows = report['horizons'] + [{
            'horizon': ASYMPTOTIC,
            'quadratic_form': report['quadratic_form'],
            'exponent': report['asymptotic_exponent'],
        }]
        write_rows(rows, HORIZON_FIELDS, fmt, stream)

    def summary(self, report):
        search = report['asymptotic_horizon']
        lines = [
            f"spectral radius      {report['spectral_radius']:.6g}",
            f"c'Σ∞c                {report['quadratic_form']:.6g}",
            f"asymptotic exponent  {report['asymptotic_exponent']:.6g}",
            f"Chernoff exponent    {report['lower_bound_exponent']:.6g}",
            f"asymptotic from N =  {search['horizon']}"
            + ('' if search['converged'] else ' (not converged)'),
        ]
        return '\n'.join(lines) + '\n' + render_table(
            report['horizons'], HORIZON_FIELDS)
