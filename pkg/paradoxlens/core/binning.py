"""
Разбиение начального измерения W_I на подгруппы.
Границы строятся по объединённой выборке, поэтому интервал i означает
одну и ту же подгруппу для обеих групп.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, DataValidationError
from .models import BinningSpec, Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BinAssignment:
    """Номер интервала для каждого наблюдения и границы интервалов"""

    indices: np.ndarray
    edges: np.ndarray

    @property
    def n_bins(self) -> int:
        return len(self.edges) - 1

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2.0

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n_bins)


def _locate(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """[a, b) для всех интервалов, кроме последнего, который закрыт"""
    if len(edges) <= 2:
        return np.zeros(len(values), dtype=np.int64)
    return np.searchsorted(edges[1:-1], values, side="right").astype(np.int64)


def assign_bins(ds: Dataset, spec: BinningSpec) -> BinAssignment:
    """
    Назначение интервалов по W_I.

    Args:
        ds: непустой набор данных
        spec: стратегия разбиения

    Returns:
        BinAssignment: индексы в [0, a) и границы
    """
    if ds.n == 0:
        raise DataValidationError("разбиение пустого набора данных")

    values = ds.w_initial
    lo, hi = float(values.min()), float(values.max())

    if spec.strategy == "explicit":
        edges = np.asarray(spec.edges, dtype=np.float64)
        uncovered = values[(values < edges[0]) | (values > edges[-1])]
        if uncovered.size:
            raise CoverageError(np.unique(uncovered))
    elif lo == hi:
        # Все значения совпадают - единственный вырожденный интервал
        edges = np.array([lo, hi], dtype=np.float64)
    elif spec.strategy == "fixed_width":
        edges = np.linspace(lo, hi, spec.k + 1)
        edges[0], edges[-1] = lo, hi
    else:
        edges = np.quantile(values, np.linspace(0.0, 1.0, spec.k + 1))
        edges[0], edges[-1] = lo, hi
        unique_edges = np.unique(edges)
        if len(unique_edges) < len(edges):
            logger.debug(f"Совпадающие квантили: {spec.k} -> {len(unique_edges) - 1} интервалов")
        edges = unique_edges

    indices = _locate(values, edges)
    assignment = BinAssignment(indices=indices, edges=edges)
    logger.debug(f"Разбиение {spec.describe()}: размеры {assignment.sizes.tolist()}")
    return assignment
