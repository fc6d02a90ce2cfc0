import io

import pytest
import yaml
from django.apps import apps
from django.core.management import call_command

try:
    from exitrates.ldp import ExitSpec  # noqa:F401
    from exitrates.process import ArModel  # noqa:F401
except ImportError:
    raise AssertionError(
        'В приложении `exitrates` опишите модули `process` и `ldp`'
    )
except RuntimeError:
    registered_apps = set(app.name for app in apps.get_app_configs())
    for need_app_name in ('exitrates', 'montecarlo', 'experiments'):
        if need_app_name not in registered_apps:
            raise AssertionError(
                f'Убедитесь, что зарегистрировано приложение {need_app_name}'
            )

pytest_plugins = [
    'fixtures.fixture_data'
]


@pytest.fixture
def write_config(tmp_path):
    """Записывает словарь в YAML-файл и возвращает путь к нему"""
    def write(data, name='run.yaml'):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False),
                        encoding='utf-8')
        return str(path)
    return write


@pytest.fixture
def run_command():
    """call_command с перехватом stdout и stderr"""
    def run(name, *args, **options):
        stdout = io.StringIO()
        stderr = io.StringIO()
        call_command(name, *args, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue(), stderr.getvalue()
    return run
