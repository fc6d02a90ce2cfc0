from django.apps import AppConfig


class MontecarloConfig(AppConfig):
    name = 'montecarlo'
    verbose_name = 'Моделирование времени выхода'
