"""
Пересечение носителей W_I двух групп.
Сравнение вне пересечения требует экстраполяции.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .models import GROUP_LABELS, Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OverlapReport:
    """Диапазоны групп, их пересечение и доли наблюдений внутри него"""

    group_ranges: Dict[int, Tuple[float, float]]
    intersection: Tuple[float, float] | None
    inside_fraction: Dict[int, float]

    @property
    def extrapolation_required(self) -> bool:
        """Носители не пересекаются"""
        return self.intersection is None

    @property
    def partial(self) -> bool:
        """Часть наблюдений какой-либо группы лежит вне пересечения"""
        return any(f < 1.0 for f in self.inside_fraction.values())


def support_overlap(ds: Dataset) -> OverlapReport:
    """
    Отчёт о перекрытии носителей начального измерения.

    Args:
        ds: набор данных с обеими непустыми группами
    """
    ds.require_both_groups()

    ranges = {}
    for label in GROUP_LABELS:
        values = ds.w_initial[ds.group == label]
        ranges[label] = (float(values.min()), float(values.max()))

    lo = max(r[0] for r in ranges.values())
    hi = min(r[1] for r in ranges.values())
    intersection = (lo, hi) if lo <= hi else None

    fractions = {}
    for label in GROUP_LABELS:
        values = ds.w_initial[ds.group == label]
        if intersection is None:
            fractions[label] = 0.0
        else:
            inside = np.count_nonzero((values >= lo) & (values <= hi))
            fractions[label] = inside / values.size

    report = OverlapReport(group_ranges=ranges, intersection=intersection, inside_fraction=fractions)
    if report.extrapolation_required:
        logger.warning(f"⚠️  Носители W_I не пересекаются: {ranges}")
    return report
