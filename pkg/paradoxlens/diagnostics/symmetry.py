"""
Проверка симметрии относительно среднего: |асимметрия| и бутстреп смены знаков.
"""
import logging
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from paradoxlens.core.errors import DegenerateSampleError, InsufficientDataError

logger = logging.getLogger(__name__)

# Предел размера матрицы знаков за один проход
_CHUNK_ELEMENTS = 4_000_000


def symmetry_test(values: Sequence[float], draws: int, seed: int) -> Tuple[float, float]:
    """
    Выборочная асимметрия (с поправкой на смещение) и p-значение для H0: симметрия.

    Центрированные значения умножаются на случайные знаки, статистика - |skew|.

    Args:
        values: выборка, n >= 3
        draws: число бутстреп-выборок B
        seed: зерно генератора

    Returns:
        (skewness, p), p = (1 + #{T* >= T}) / (B + 1)

    Raises:
        InsufficientDataError: меньше 3 точек
        DegenerateSampleError: нулевая дисперсия
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n < 3:
        raise InsufficientDataError(f"асимметрия требует не менее 3 точек, получено {n}")
    centered = x - x.mean()
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("выборка с нулевой дисперсией")
    if draws < 1:
        raise InsufficientDataError(f"число бутстреп-выборок должно быть >= 1, получено {draws}")

    skewness = float(stats.skew(centered, bias=False))
    observed = abs(skewness)

    rng = np.random.default_rng(seed)
    rows = max(1, _CHUNK_ELEMENTS // n)
    exceed = 0
    done = 0
    while done < draws:
        size = min(rows, draws - done)
        signs = rng.integers(0, 2, size=(size, n), dtype=np.int8) * 2 - 1
        replicated = np.abs(stats.skew(signs * centered, axis=1, bias=False))
        exceed += int(np.count_nonzero(replicated >= observed))
        done += size

    p = (1 + exceed) / (draws + 1)
    logger.debug(f"Симметрия: n={n}, skew={skewness:.4g}, p={p:.4g}")
    return skewness, p
