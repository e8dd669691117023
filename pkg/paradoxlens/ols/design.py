"""
Спецификация и построение матрицы плана.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from paradoxlens.core.errors import DataValidationError
from paradoxlens.core.models import Dataset

INTERCEPT = "intercept"
GROUP = "group_indicator"
GROUP0 = "group0_indicator"
GROUP1 = "group1_indicator"

VARIABLES = ("w_initial", "w_final", "gain")
TERMS = (INTERCEPT, GROUP, GROUP0, GROUP1) + VARIABLES
RESPONSES = VARIABLES + ("residual",)


@dataclass(frozen=True)
class DesignSpec:
    """Отклик и упорядоченный список членов модели"""

    response: str
    terms: Tuple[str, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if self.response not in RESPONSES:
            raise DataValidationError(f"неизвестный отклик: {self.response!r}")
        if not terms:
            raise DataValidationError("модель без членов")
        unknown = [t for t in terms if t not in TERMS]
        if unknown:
            raise DataValidationError(f"неизвестные члены модели: {unknown}")
        if len(set(terms)) != len(terms):
            raise DataValidationError(f"повторяющиеся члены модели: {terms}")
        if {INTERCEPT, GROUP0, GROUP1} <= set(terms):
            raise DataValidationError("intercept, group0_indicator и group1_indicator вместе дают вырожденный план")
        if self.response in terms:
            raise DataValidationError(f"отклик {self.response} среди предикторов")

    @property
    def has_intercept_span(self) -> bool:
        """Константа лежит в линейной оболочке плана"""
        return INTERCEPT in self.terms or {GROUP0, GROUP1} <= set(self.terms)

    def index(self, term: str) -> int:
        return self.terms.index(term)


# Модели из текста: подмодель, ANCOVA по W_F и по приросту
SUBMODEL = DesignSpec(response="w_final", terms=(INTERCEPT, GROUP))
ANCOVA_FINAL = DesignSpec(response="w_final", terms=(INTERCEPT, GROUP, "w_initial"))
ANCOVA_GAIN = DesignSpec(response="gain", terms=(INTERCEPT, GROUP, "w_initial"))
GAIN_ON_GROUP = DesignSpec(response="gain", terms=(INTERCEPT, GROUP))
RESIDUAL_STAGE = DesignSpec(response="residual", terms=(GROUP0, GROUP1, "w_initial"))


def term_column(ds: Dataset, term: str) -> np.ndarray:
    """Один столбец плана"""
    if term == INTERCEPT:
        return np.ones(ds.n, dtype=np.float64)
    if term == GROUP or term == GROUP1:
        return (ds.group == 1).astype(np.float64)
    if term == GROUP0:
        return (ds.group == 0).astype(np.float64)
    return np.asarray(ds.variable(term), dtype=np.float64)


def design_matrix(ds: Dataset, terms: Tuple[str, ...]) -> np.ndarray:
    """Матрица плана n x p в порядке членов"""
    if not terms:
        return np.empty((ds.n, 0))
    return np.column_stack([term_column(ds, t) for t in terms])
