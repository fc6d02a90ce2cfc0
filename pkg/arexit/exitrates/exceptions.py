class ExitRatesError(Exception):
    """Базовая ошибка вычислений"""


class DimensionError(ExitRatesError, ValueError):
    """Несогласованные размерности или недопустимые значения входа"""


class NoStationaryDistribution(ExitRatesError):
    """Спектральный радиус не меньше единицы"""


class UnreachableConstraint(ExitRatesError):
    """Шум не достигает направления c за данный горизонт"""


class NoExitsObserved(ExitRatesError):
    """Все траектории упёрлись в ограничение по числу шагов"""
