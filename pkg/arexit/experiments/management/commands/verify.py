"""Самопроверка: рандомизированные сравнения с независимыми оракулами"""
from django.conf import settings
from django.core.management.base import CommandError

from experiments.base import (
    COMPUTATIONAL_FAILURE, INVALID_CONFIG, ExperimentCommand,
    threads_argument)
from experiments.checks import run_checks

INJECTED_FAULT = 1e-6


class Command(ExperimentCommand):
    help = 'Run the randomized cross-checks against independent oracles'

    def add_arguments(self, parser):
        parser.add_argument('--trials', type=int,
                            default=settings.AREXIT['VERIFY_TRIALS'],
                            help='random instances per suite')
        parser.add_argument('--seed', type=int,
                            default=settings.AREXIT['VERIFY_SEED'])
        parser.add_argument('--threads', type=threads_argument, default=1)
        parser.add_argument(
            '--inject-fault', action='store_true',
            help='perturb the closed-form exponent (negative control)')

    def handle(self, *args, **options):
        if options['trials'] < 1:
            raise CommandError('--trials must be positive',
                               returncode=INVALID_CONFIG)
        if not 0 <= options['seed'] < 2 ** 64:
            raise CommandError(
                f"--seed must be in [0, 2**64), got {options['seed']}",
                returncode=INVALID_CONFIG)
        results = run_checks(
            options['trials'], options['seed'],
            fault=INJECTED_FAULT if options['inject_fault'] else 0.0,
            threads=options['threads'])
        for result in results:
            status = (self.style.SUCCESS('ok') if result.passed
                      else self.style.ERROR('FAILED'))
            self.stdout.write(
                f'{result.name}: {result.instances} instances, {status}')
        failed = [result for result in results if not result.passed]
        if failed:
            for result in failed:
                for params in result.failures:
                    self.stderr.write(f'{result.name}: {params}')
            raise CommandError(
                f'{len(failed)} of {len(results)} checks failed',
                returncode=COMPUTATIONAL_FAILURE)
        total = sum(result.instances for result in results)
        self.stdout.write(self.style.SUCCESS(
            f'all checks passed ({total} instances)'))
