"""
Прямая и обратная парная регрессия.
Произведение наклонов равно r^2 прямой регрессии, поэтому обратная
регрессия не получается обращением прямой.
"""
import logging
from dataclasses import dataclass

import numpy as np

from paradoxlens.core.errors import DataValidationError, DegenerateRegressionError
from paradoxlens.core.models import Dataset

from .design import INTERCEPT, VARIABLES, DesignSpec
from .solver import FitResult, fit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReverseFitReport:
    """y ~ x и x ~ y на одних данных"""

    forward: FitResult
    reverse: FitResult
    slope_product: float
    r_squared: float

    @property
    def x(self) -> str:
        return self.reverse.spec.response

    @property
    def y(self) -> str:
        return self.forward.spec.response

    @property
    def forward_slope(self) -> float:
        return self.forward.coef(self.x)

    @property
    def reverse_slope(self) -> float:
        return self.reverse.coef(self.y)


def reverse_fit(ds: Dataset, x: str, y: str) -> ReverseFitReport:
    """
    Прямая (y на x) и обратная (x на y) регрессии со свободным членом.

    Raises:
        DegenerateRegressionError: одна из переменных постоянна
    """
    if x not in VARIABLES or y not in VARIABLES or x == y:
        raise DataValidationError(f"нужны две разные переменные из {VARIABLES}, получено {x!r}, {y!r}")
    for name in (x, y):
        values = ds.variable(name)
        if values.size < 2 or float(np.var(values)) == 0.0:
            raise DegenerateRegressionError(f"переменная {name} имеет нулевую дисперсию")

    forward = fit(ds, DesignSpec(response=y, terms=(INTERCEPT, x)))
    reverse = fit(ds, DesignSpec(response=x, terms=(INTERCEPT, y)))
    slope_product = forward.coef(x) * reverse.coef(y)
    logger.debug(f"Наклоны {y}~{x}: {forward.coef(x):.6g}, {x}~{y}: {reverse.coef(y):.6g}")
    return ReverseFitReport(
        forward=forward,
        reverse=reverse,
        slope_product=float(slope_product),
        r_squared=forward.r_squared,
    )
