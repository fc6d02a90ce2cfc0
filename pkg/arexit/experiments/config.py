"""Файл конфигурации запуска (YAML)"""
from __future__ import annotations

import dataclasses
import math

import numpy as np
import yaml
from django.core.exceptions import ValidationError

from exitrates.exceptions import DimensionError
from exitrates.ldp import ExitSpec, Sidedness
from exitrates.process import ArModel, ArnModel, embed_arn, first_coordinate

MATRIX = 'matrix'
ARN = 'arn'
IDENTITY_NOISE = 'identity'
FIRST_COORDINATE_NOISE = 'first-coordinate'
FORMATS = ('csv', 'json')


@dataclasses.dataclass(frozen=True)
class MatrixModelConfig:
    a: tuple
    epsilon: float
    x0: tuple
    noise: str = IDENTITY_NOISE
    kind = MATRIX

    @property
    def dim(self):
        return len(self.a)


@dataclasses.dataclass(frozen=True)
class ArnModelConfig:
    b: tuple
    epsilon: float
    starts: tuple
    kind = ARN

    @property
    def dim(self):
        return len(self.b)


@dataclasses.dataclass(frozen=True)
class ExitConfig:
    c: tuple | None
    level: float = 1.0
    sided: str = Sidedness.TWO_SIDED.value


@dataclasses.dataclass(frozen=True)
class McSection:
    n_paths: int | None = None
    seed: int | None = None
    max_steps: int | None = None
    threads: int | str | None = None


@dataclasses.dataclass(frozen=True)
class AnalysisConfig:
    horizons: tuple | None = None
    epsilons: tuple | None = None


@dataclasses.dataclass(frozen=True)
class OutputConfig:
    format: str | None = None
    path: str | None = None


@dataclasses.dataclass(frozen=True)
class RunConfig:
    model: MatrixModelConfig | ArnModelConfig
    exit: ExitConfig
    mc: McSection = dataclasses.field(default_factory=McSection)
    analysis: AnalysisConfig = dataclasses.field(
        default_factory=AnalysisConfig)
    output: OutputConfig = dataclasses.field(default_factory=OutputConfig)

    @property
    def is_arn(self):
        return self.model.kind == ARN

    def arn_model(self, epsilon=None):
        return ArnModel(
            b=self.model.b,
            epsilon=self.model.epsilon if epsilon is None else epsilon,
            starts=self.model.starts,
        )

    def vector_model(self, epsilon=None):
        """Модель AR(1); для AR(n) это сопровождающее вложение"""
        if self.is_arn:
            vector_model, _ = embed_arn(self.arn_model(epsilon))
            return vector_model
        loading = None
        if self.model.noise == FIRST_COORDINATE_NOISE:
            loading = first_coordinate(self.model.dim).reshape(-1, 1)
        return ArModel(
            a=np.array(self.model.a),
            epsilon=self.model.epsilon if epsilon is None else epsilon,
            x0=np.array(self.model.x0),
            loading=loading,
        )

    def exit_spec(self):
        c = self.exit.c
        if c is None:
            c = first_coordinate(self.model.dim)
        return ExitSpec(c=np.array(c), sided=self.exit.sided,
                        level=self.exit.level)

    def noise_covariance(self):
        return self.vector_model().noise_covariance


def _error(field, message):
    return ValidationError({field: [message]}, code='invalid')


def _section(data, name, required=False):
    section = data.get(name)
    if section is None:
        if required:
            raise _error(name, 'section is required')
        return {}
    if not isinstance(section, dict):
        raise _error(name, 'must be a mapping')
    return section


def _unknown_keys(section, name, allowed):
    unknown = set(section) - set(allowed)
    if unknown:
        raise _error(name, f'unknown keys: {", ".join(sorted(unknown))}')


def _real(value, field, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _error(field, f'expected a number, got {value!r}')
    value = float(value)
    if not math.isfinite(value):
        raise _error(field, 'must be finite')
    if positive and value <= 0:
        raise _error(field, 'must be positive')
    return value


def _reals(values, field, length=None):
    if not isinstance(values, (list, tuple)) or not values:
        raise _error(field, 'expected a non-empty list of numbers')
    result = tuple(_real(v, field) for v in values)
    if length is not None and len(result) != length:
        raise _error(field, f'expected {length} entries, got {len(result)}')
    return result


def _integer(value, field, optional=True, minimum=1):
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise _error(field, f'expected an integer, got {value!r}')
    if value < minimum:
        raise _error(field, f'must be at least {minimum}')
    return value


def _threads(value, field):
    if value is None or value == 'auto':
        return value
    return _integer(value, field)


def _parse_model(section):
    kind = section.get('kind', MATRIX)
    epsilon = _real(section.get('epsilon'), 'model.epsilon', positive=True)
    if kind == MATRIX:
        _unknown_keys(section, 'model', ('kind', 'a', 'epsilon', 'x0',
                                         'noise'))
        rows = section.get('a')
        if not isinstance(rows, (list, tuple)) or not rows:
            raise _error('model.a', 'expected a list of matrix rows')
        d = len(rows)
        a = tuple(_reals(row, 'model.a', length=d) for row in rows)
        x0 = section.get('x0')
        x0 = (0.0,) * d if x0 is None else _reals(x0, 'model.x0', length=d)
        noise = section.get('noise', IDENTITY_NOISE)
        if noise not in (IDENTITY_NOISE, FIRST_COORDINATE_NOISE):
            raise _error('model.noise', f'unknown noise covariance {noise!r}')
        return MatrixModelConfig(a=a, epsilon=epsilon, x0=x0, noise=noise)
    if kind == ARN:
        _unknown_keys(section, 'model', ('kind', 'b', 'epsilon', 'starts'))
        b = _reals(section.get('b'), 'model.b')
        starts = section.get('starts')
        if starts is None:
            starts = (0.0,) * len(b)
        else:
            starts = _reals(starts, 'model.starts', length=len(b))
        return ArnModelConfig(b=b, epsilon=epsilon, starts=starts)
    raise _error('model.kind', f"expected 'matrix' or 'arn', got {kind!r}")


def _parse_exit(section, model):
    _unknown_keys(section, 'exit', ('c', 'level', 'sided'))
    c = section.get('c')
    if c is not None:
        c = _reals(c, 'exit.c', length=model.dim)
    elif model.kind == MATRIX:
        raise _error('exit.c', 'exit direction is required')
    level = _real(section.get('level', 1.0), 'exit.level', positive=True)
    sided = section.get('sided', Sidedness.TWO_SIDED.value)
    if sided not in {s.value for s in Sidedness}:
        raise _error('exit.sided', f'unknown sidedness {sided!r}')
    return ExitConfig(c=c, level=level, sided=sided)


def _parse_mc(section):
    _unknown_keys(section, 'mc', ('n_paths', 'seed', 'max_steps', 'threads'))
    return McSection(
        n_paths=_integer(section.get('n_paths'), 'mc.n_paths'),
        seed=_integer(section.get('seed'), 'mc.seed', minimum=0),
        max_steps=_integer(section.get('max_steps'), 'mc.max_steps'),
        threads=_threads(section.get('threads'), 'mc.threads'),
    )


def _parse_analysis(section):
    _unknown_keys(section, 'analysis', ('horizons', 'epsilons'))
    horizons = section.get('horizons')
    if horizons is not None:
        if not isinstance(horizons, (list, tuple)) or not horizons:
            raise _error('analysis.horizons', 'expected a list of integers')
        horizons = tuple(_integer(h, 'analysis.horizons', optional=False)
                         for h in horizons)
    epsilons = section.get('epsilons')
    if epsilons is not None:
        epsilons = tuple(_real(e, 'analysis.epsilons', positive=True)
                         for e in _reals(epsilons, 'analysis.epsilons'))
    return AnalysisConfig(horizons=horizons, epsilons=epsilons)


def _parse_output(section):
    _unknown_keys(section, 'output', ('format', 'path'))
    fmt = section.get('format')
    if fmt is not None and fmt not in FORMATS:
        raise _error('output.format', f'expected csv or json, got {fmt!r}')
    path = section.get('path')
    if path is not None and not isinstance(path, str):
        raise _error('output.path', 'expected a file path')
    return OutputConfig(format=fmt, path=path)


def parse_config(data):
    """RunConfig из словаря; ValidationError при любой несогласованности"""
    if not isinstance(data, dict):
        raise _error('config', 'top level must be a mapping')
    _unknown_keys(data, 'config', ('model', 'exit', 'mc', 'analysis',
                                   'output'))
    model = _parse_model(_section(data, 'model', required=True))
    config = RunConfig(
        model=model,
        exit=_parse_exit(_section(data, 'exit'), model),
        mc=_parse_mc(_section(data, 'mc')),
        analysis=_parse_analysis(_section(data, 'analysis')),
        output=_parse_output(_section(data, 'output')),
    )
    try:
        config.vector_model()
        config.exit_spec()
    except DimensionError as error:
        raise _error('model', str(error)) from error
    return config


def config_to_dict(config):
    model = dataclasses.asdict(config.model)
    model = {'kind': config.model.kind, **model}
    if config.is_arn:
        model['b'] = list(model['b'])
        model['starts'] = list(model['starts'])
    else:
        model['a'] = [list(row) for row in model['a']]
        model['x0'] = list(model['x0'])
    exit_section = dataclasses.asdict(config.exit)
    if exit_section['c'] is not None:
        exit_section['c'] = list(exit_section['c'])
    analysis = {
        key: None if value is None else list(value)
        for key, value in dataclasses.asdict(config.analysis).items()
    }
    return {
        'model': model,
        'exit': exit_section,
        'mc': dataclasses.asdict(config.mc),
        'analysis': analysis,
        'output': dataclasses.asdict(config.output),
    }


def dump_config(config):
    return yaml.safe_dump(config_to_dict(config), sort_keys=False)


def load_config(path):
    try:
        with open(path, encoding='utf-8') as stream:
            data = yaml.safe_load(stream)
    except OSError as error:
        raise _error('config', f'cannot read {path}: {error}') from error
    except UnicodeDecodeError as error:
        raise _error('config', f'{path} is not UTF-8 text: {error}') from error
    except yaml.YAMLError as error:
        raise _error('config', f'{path} is not valid YAML: {error}') from error
    return parse_config(data)


TABLE1_PUBLISHED = {
    0.12: 0.0639,
    0.10: 0.0554,
    0.08: 0.0473,
    0.07: 0.0434,
    0.06: 0.0415,
    0.05: 0.0389,
}

TABLE1_CONFIG = parse_config({
    'model': {
        'kind': MATRIX,
        'a': [[0.8, 1.0], [0.0, 0.5]],
        'epsilon': 0.1,
        'x0': [0.0, 0.0],
    },
    'exit': {'c': [1.0, 1.0]},
    'analysis': {'epsilons': list(TABLE1_PUBLISHED)},
})
