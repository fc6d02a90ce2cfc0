from django.apps import AppConfig


class ExitratesConfig(AppConfig):
    name = 'exitrates'
    verbose_name = 'Экспоненты выхода'
