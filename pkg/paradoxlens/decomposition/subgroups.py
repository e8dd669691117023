"""
Две разности средних прироста.

A1 - разность групповых средних (первый статистик).
A2 - разность средних по подгруппам W_I, взвешенных общими частотами f_i
(второй статистик). Разница A2 - A1 - эффект смешивания, он определяется
тем, насколько различаются веса подгрупп f^1 и f^0.

В A2 входят только интервалы, где представлены обе группы: группа есть,
и её относительная частота в интервале (f1_i / f_i или f0_i / f_i) не ниже
min_group_ratio. Остальные интервалы требуют экстраполяции и перечисляются
в отчёте.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from paradoxlens.configs import config
from paradoxlens.core.binning import assign_bins
from paradoxlens.core.errors import NoOverlapError
from paradoxlens.core.models import BinningSpec, Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubgroupTable:
    """
    Таблица подгрупп по интервалам W_I.

    n1/n0 - размеры подгрупп мальчиков/девочек, f1/f0/f - доли (нулевые там,
    где группы нет), средние прироста - NaN для отсутствующей группы.
    """

    edges: np.ndarray
    n1: np.ndarray
    n0: np.ndarray
    mean_gain_1: np.ndarray
    mean_gain_0: np.ndarray
    f1: np.ndarray
    f0: np.ndarray
    f: np.ndarray
    alpha: float
    min_group_ratio: float = 0.0

    @property
    def n_bins(self) -> int:
        return len(self.n1)

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2.0

    @property
    def shared(self) -> np.ndarray:
        """Маска интервалов, где есть обе группы"""
        return (self.n1 > 0) & (self.n0 > 0)

    @property
    def thin(self) -> np.ndarray:
        """Интервалы с обеими группами, где min(f1_i, f0_i) / f_i < min_group_ratio"""
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.minimum(self.f1, self.f0) / self.f
        return self.shared & (ratio < self.min_group_ratio)

    @property
    def retained(self) -> np.ndarray:
        """Интервалы, входящие в A2"""
        return self.shared & ~self.thin

    @property
    def retained_weights(self) -> np.ndarray:
        """f, перенормированные на интервалы A2 (0 вне их)"""
        weights = np.where(self.retained, self.f, 0.0)
        total = weights.sum()
        return weights / total if total > 0 else weights

    def mixture_gap(self) -> float:
        """max_i |f_i - (alpha f1_i + (1 - alpha) f0_i)|"""
        mixture = self.alpha * self.f1 + (1.0 - self.alpha) * self.f0
        return float(np.max(np.abs(self.f - mixture))) if self.n_bins else 0.0


@dataclass(frozen=True)
class ConditionalEffect:
    """Разность средних прироста в одном интервале"""

    bin: int
    center: float
    difference: float
    weight: float


@dataclass(frozen=True)
class Decomposition:
    """A1, A2, эффект смешивания и таблица подгрупп"""

    a1: float
    a2: float
    confounding_effect: float
    weight_divergence: float
    table: SubgroupTable
    bins_missing_a_group: Tuple[int, ...]
    thin_bins: Tuple[int, ...]
    a1_from_group_weights: float
    symmetric_half_sum: float
    binning: BinningSpec

    @property
    def alpha(self) -> float:
        return self.table.alpha

    @property
    def excluded_bins(self) -> Tuple[int, ...]:
        """Все интервалы вне A2 по возрастанию"""
        return tuple(sorted(self.bins_missing_a_group + self.thin_bins))


def _bin_means(indices: np.ndarray, gain: np.ndarray, k: int) -> np.ndarray:
    """Средние прироста по интервалам (NaN для пустых)"""
    means = np.full(k, np.nan)
    for i in np.unique(indices):
        # Та же редукция, что в compute_a1: при одном интервале средние совпадают бит в бит
        means[i] = gain[indices == i].mean()
    return means


def build_table(ds: Dataset, spec: BinningSpec, min_group_ratio: Optional[float] = None) -> SubgroupTable:
    """
    Сводка по подгруппам W_I для обеих групп

    Args:
        ds: набор данных с обеими группами
        spec: разбиение W_I
        min_group_ratio: порог относительной частоты группы в интервале
            (по умолчанию config.analysis.min_group_ratio)
    """
    ds.require_both_groups()
    if min_group_ratio is None:
        min_group_ratio = config.analysis.min_group_ratio
    if not 0.0 <= min_group_ratio <= 1.0:
        raise ValueError(f"min_group_ratio должен быть в [0, 1], получено {min_group_ratio}")

    assignment = assign_bins(ds, spec)
    k = assignment.n_bins
    boys = ds.group == 1
    gain = ds.gain

    n1 = np.bincount(assignment.indices[boys], minlength=k)
    n0 = np.bincount(assignment.indices[~boys], minlength=k)

    total1, total0 = int(n1.sum()), int(n0.sum())
    table = SubgroupTable(
        edges=assignment.edges,
        n1=n1,
        n0=n0,
        mean_gain_1=_bin_means(assignment.indices[boys], gain[boys], k),
        mean_gain_0=_bin_means(assignment.indices[~boys], gain[~boys], k),
        f1=n1 / total1,
        f0=n0 / total0,
        f=(n1 + n0) / (total1 + total0),
        alpha=total1 / (total1 + total0),
        min_group_ratio=float(min_group_ratio),
    )
    return table


def compute_a1(ds: Dataset) -> float:
    """mean(gain | группа 1) - mean(gain | группа 0)"""
    ds.require_both_groups()
    boys = ds.group == 1
    gain = ds.gain
    return float(gain[boys].mean() - gain[~boys].mean())


def _weighted(means: np.ndarray, weights: np.ndarray) -> float:
    """Взвешенная сумма, пропускающая интервалы с нулевым весом"""
    mask = weights > 0
    return float(np.sum(means[mask] * weights[mask]))


def weight_divergence(table: SubgroupTable) -> float:
    """Расстояние полной вариации между f1 и f0: 0.5 * sum|f1_i - f0_i|"""
    return float(0.5 * np.sum(np.abs(table.f1 - table.f0)))


def _require_retained(table: SubgroupTable, spec: BinningSpec) -> np.ndarray:
    retained = table.retained
    if not retained.any():
        if table.shared.any():
            raise NoOverlapError(
                f"во всех интервалах с обеими группами ({spec.describe()}) доля одной из групп "
                f"ниже min_group_ratio={table.min_group_ratio}"
            )
        raise NoOverlapError(
            f"ни один из {table.n_bins} интервалов ({spec.describe()}) не содержит обе группы"
        )
    return retained


def compute_a2(ds: Dataset, spec: BinningSpec, min_group_ratio: Optional[float] = None) -> Decomposition:
    """
    A2 = sum_i (D1_i - D0_i) f_i по интервалам, где представлены обе группы,
    f перенормированы на эти интервалы.

    Raises:
        NoOverlapError: ни один интервал не содержит обе группы
    """
    table = build_table(ds, spec, min_group_ratio)
    retained = _require_retained(table, spec)

    missing = tuple(int(i) for i in np.flatnonzero(~table.shared))
    thin = tuple(int(i) for i in np.flatnonzero(table.thin))
    if missing:
        logger.warning(f"⚠️  Интервалы без одной из групп исключены из A2: {list(missing)}")
    if thin:
        logger.warning(
            f"⚠️  Интервалы с долей группы ниже {table.min_group_ratio:g} от её доли в выборке "
            f"исключены из A2: {list(thin)}"
        )

    weights = table.retained_weights
    differences = np.where(retained, table.mean_gain_1 - table.mean_gain_0, 0.0)
    a2 = _weighted(differences, weights)
    a1 = compute_a1(ds)

    # Первая строка: A1 через собственные веса групп
    a1_grouped = _weighted(table.mean_gain_1, table.f1) - _weighted(table.mean_gain_0, table.f0)

    # Симметричная полусумма по интервалам A2
    f1_kept = np.where(retained, table.f1, 0.0)
    f0_kept = np.where(retained, table.f0, 0.0)
    f1_kept = f1_kept / f1_kept.sum()
    f0_kept = f0_kept / f0_kept.sum()
    half_sum = 0.5 * _weighted(differences, f1_kept + f0_kept)

    decomposition = Decomposition(
        a1=a1,
        a2=a2,
        confounding_effect=a2 - a1,
        weight_divergence=weight_divergence(table),
        table=table,
        bins_missing_a_group=missing,
        thin_bins=thin,
        a1_from_group_weights=a1_grouped,
        symmetric_half_sum=half_sum,
        binning=spec,
    )
    logger.info(
        f"📊 A1={a1:.6g}, A2={a2:.6g}, смешивание={a2 - a1:.6g}, "
        f"TV(f1,f0)={decomposition.weight_divergence:.4f}"
    )
    return decomposition


def conditional_effect_curve(ds: Dataset, spec: BinningSpec,
                             min_group_ratio: Optional[float] = None) -> List[ConditionalEffect]:
    """
    Разности D1_i - D0_i по интервалам A2 и их веса.
    Взвешенная сумма кривой воспроизводит A2.
    """
    table = build_table(ds, spec, min_group_ratio)
    retained = _require_retained(table, spec)
    weights = table.retained_weights
    centers = table.centers
    return [
        ConditionalEffect(
            bin=int(i),
            center=float(centers[i]),
            difference=float(table.mean_gain_1[i] - table.mean_gain_0[i]),
            weight=float(weights[i]),
        )
        for i in np.flatnonzero(retained)
    ]
