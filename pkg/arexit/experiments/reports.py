"""Вывод отчётов: CSV (RFC 4180), JSON и таблицы для чтения глазами"""
import csv
import json
import math

import numpy as np
from django.conf import settings

SIMULATE_FIELDS = [
    'epsilon', 'n_paths', 'mean_tau', 'ci_low', 'ci_high', 'scaled_log',
    'censored', 'seed', 'rng_version', 'schema_version',
]
TABLE1_FIELDS = [
    'epsilon', 'published', 'computed', 'abs_diff', 'limit', 'mean_tau',
    'ci_low', 'ci_high', 'censored', 'n_paths', 'seed', 'rng_version',
    'schema_version',
]
HORIZON_FIELDS = ['horizon', 'quadratic_form', 'exponent', 'schema_version']


def schema_version():
    return settings.AREXIT['SCHEMA_VERSION']


def rounded(value, digits=12):
    """Число с заданным количеством значащих цифр; массивы поэлементно"""
    if isinstance(value, np.ndarray):
        return [rounded(v, digits) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [rounded(v, digits) for v in value]
    if isinstance(value, dict):
        return {key: rounded(v, digits) for key, v in value.items()}
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f'{value:.{digits}g}')


def estimate_row(estimate):
    return {
        'epsilon': estimate.epsilon,
        'n_paths': estimate.n_paths,
        'mean_tau': estimate.mean_tau,
        'ci_low': estimate.ci_low,
        'ci_high': estimate.ci_high,
        'scaled_log': estimate.scaled_log,
        'censored': estimate.censored,
        'seed': estimate.seed,
        'rng_version': estimate.rng_version,
    }


def write_csv(rows, fields, stream):
    writer = csv.DictWriter(stream, fieldnames=fields, lineterminator='\r\n',
                            extrasaction='ignore')
    writer.writeheader()
    for row in rows:
        writer.writerow({**rounded(row), 'schema_version': schema_version()})


def write_json(payload, stream):
    document = {'schema_version': schema_version(), **rounded(payload)}
    json.dump(document, stream, indent=2, allow_nan=False)
    stream.write('\n')


def write_rows(rows, fields, fmt, stream, **extra):
    """Строки в CSV или в JSON-документ {rows: [...], **extra}"""
    if fmt == 'csv':
        write_csv(rows, fields, stream)
    else:
        write_json({**extra, 'rows': rows}, stream)


def render_table(rows, fields):
    header = [field for field in fields if field != 'schema_version']
    cells = [header] + [
        [_human(row.get(field)) for field in header] for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(header))]
    return '\n'.join(
        '  '.join(cell.rjust(width) for cell, width in zip(line, widths))
        for line in cells)


def _human(value):
    if value is None:
        return '-'
    if isinstance(value, (float, np.floating)):
        return f'{value:.6g}'
    return str(value)
