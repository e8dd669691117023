"""
Исключения пакета.
Библиотечный код только выбрасывает их; коды выхода назначает CLI.
"""
from typing import Iterable, Sequence


class ParadoxLensError(Exception):
    """Базовое исключение paradoxlens"""


class DataValidationError(ParadoxLensError, ValueError):
    """Нарушены инварианты данных: метка группы, уникальность id, пустая группа"""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(message if row is None else f"строка {row}: {message}")


class SchemaError(DataValidationError):
    """В CSV нет обязательного столбца"""

    def __init__(self, column: str, available: Sequence[str] = ()):
        self.column = column
        self.available = tuple(available)
        super().__init__(f"нет столбца '{column}' (есть: {', '.join(self.available) or '-'})")


class RowParseError(DataValidationError):
    """Значение в строке не разбирается как конечное число"""

    def __init__(self, row: int, column: str, value: str):
        self.column = column
        self.value = value
        super().__init__(f"столбец '{column}': некорректное значение {value!r}", row=row)


class CoverageError(DataValidationError):
    """Явные границы интервалов не покрывают все значения"""

    def __init__(self, uncovered: Iterable[float]):
        self.uncovered = tuple(float(v) for v in uncovered)
        preview = ", ".join(f"{v:g}" for v in self.uncovered[:10])
        more = "" if len(self.uncovered) <= 10 else f" ... (+{len(self.uncovered) - 10})"
        super().__init__(f"значения вне границ интервалов: {preview}{more}")


class ScenarioConfigError(DataValidationError):
    """Некорректный параметр сценария симуляции"""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


class SingularDesignError(ParadoxLensError):
    """Матрица плана неполного ранга"""

    def __init__(self, terms: Sequence[str]):
        self.terms = tuple(terms)
        super().__init__(f"коллинеарные столбцы плана: {', '.join(self.terms)}")


class DegreesOfFreedomError(ParadoxLensError):
    """Наблюдений меньше, чем параметров"""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        super().__init__(f"недостаточно наблюдений: n={n}, параметров {p}")


class DegenerateRegressionError(ParadoxLensError):
    """Переменная с нулевой выборочной дисперсией в парной регрессии"""


class DegenerateSampleError(ParadoxLensError):
    """Выборка с нулевой дисперсией"""


class InsufficientDataError(ParadoxLensError):
    """Слишком мало точек для процедуры"""


class NoOverlapError(ParadoxLensError):
    """Ни один интервал не содержит обе группы: сравнение требует экстраполяции"""


class ConsistencyError(ParadoxLensError):
    """Оценки получены на разных наборах данных"""
