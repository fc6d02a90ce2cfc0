"""Общая часть команд analyze, simulate, table1 и verify"""
import argparse
import io

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from exitrates.exceptions import DimensionError
from montecarlo.mc import McConfig

from .config import FORMATS, load_config

COMPUTATIONAL_FAILURE = 1
INVALID_CONFIG = 2


def threads_argument(value):
    if value == 'auto':
        return value
    try:
        threads = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a positive integer or 'auto', got {value!r}")
    if threads < 1:
        raise argparse.ArgumentTypeError(
            f'thread count must be positive, got {threads}')
    return threads


def epsilons_argument(value):
    """Список ε через запятую: --eps 0.12,0.1,0.08"""
    try:
        epsilons = [float(item) for item in value.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'expected a comma separated list of numbers, got {value!r}')
    if not epsilons or any(not eps > 0 for eps in epsilons):
        raise argparse.ArgumentTypeError(
            f'epsilons must be positive, got {value!r}')
    return epsilons


def validation_message(error):
    if hasattr(error, 'error_dict'):
        return '; '.join(
            f'{field}: {message}'
            for field, messages in error.message_dict.items()
            for message in messages)
    return '; '.join(error.messages)


class ExperimentCommand(BaseCommand):
    """Базовая команда: конфигурация, параметры Монте-Карло, вывод"""

    requires_system_checks = []
    default_format = None

    def add_config_argument(self, parser, required=False):
        parser.add_argument(
            '--config', required=required,
            help='YAML run config (see configs/example.yaml)')

    def add_mc_arguments(self, parser):
        parser.add_argument('--seed', type=int,
                            help='base seed of the per-path generators')
        parser.add_argument('--paths', type=int, help='number of paths')
        parser.add_argument('--max-steps', type=int,
                            help='censoring cap per path')
        parser.add_argument('--threads', type=threads_argument,
                            help="worker threads, an integer or 'auto'")
        parser.add_argument('--eps', type=epsilons_argument,
                            help='comma separated epsilon sweep')

    def add_output_arguments(self, parser):
        parser.add_argument('--format', choices=FORMATS,
                            help='machine readable output format')
        parser.add_argument('--out', help='write machine output to a file')

    def load(self, options):
        if not options.get('config'):
            return None
        try:
            return load_config(options['config'])
        except ValidationError as error:
            raise CommandError(
                f'invalid config: {validation_message(error)}',
                returncode=INVALID_CONFIG)

    def mc_config(self, options, config=None):
        section = config.mc if config is not None else None
        try:
            return McConfig.from_settings(
                n_paths=self._pick(options.get('paths'), section, 'n_paths'),
                seed=self._pick(options.get('seed'), section, 'seed'),
                max_steps=self._pick(options.get('max_steps'), section,
                                     'max_steps'),
                parallelism=self._pick(options.get('threads'), section,
                                       'threads'),
            )
        except DimensionError as error:
            raise CommandError(f'invalid Monte Carlo options: {error}',
                               returncode=INVALID_CONFIG)

    @staticmethod
    def _pick(flag, section, name):
        if flag is not None or section is None:
            return flag
        return getattr(section, name)

    def output_format(self, options, config=None):
        if options.get('format'):
            return options['format']
        if config is not None and config.output.format:
            return config.output.format
        return self.default_format or settings.AREXIT['OUTPUT_FORMAT']

    def output_path(self, options, config=None):
        if options.get('out'):
            return options['out']
        if config is not None:
            return config.output.path
        return None

    def emit(self, write, summary, path):
        """Машинный вывод в файл (и сводка в stdout) либо сразу в stdout"""
        buffer = io.StringIO(newline='')
        write(buffer)
        if path:
            try:
                with open(path, 'w', encoding='utf-8', newline='') as stream:
                    stream.write(buffer.getvalue())
            except OSError as error:
                raise CommandError(f'cannot write {path}: {error}',
                                   returncode=COMPUTATIONAL_FAILURE)
            self.stdout.write(summary)
            self.stdout.write(self.style.SUCCESS(f'written to {path}'))
        else:
            self.stdout.write(buffer.getvalue(), ending='')
