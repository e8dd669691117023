"""
Модель данных: наблюдения, набор данных, спецификация разбиения W_I.
Все типы неизменяемы после создания.
"""
import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, Literal, Sequence, Tuple

import numpy as np

from .errors import DataValidationError

logger = logging.getLogger(__name__)

GROUP_LABELS = (0, 1)  # 0 - девочки, 1 - мальчики


@dataclass(frozen=True)
class Observation:
    """Один субъект: группа, начальное и конечное измерение"""

    subject_id: str
    group: int
    w_initial: float
    w_final: float

    @property
    def gain(self) -> float:
        """Прирост D = W_F - W_I, всегда пересчитывается"""
        return self.w_final - self.w_initial


def _readonly(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Упорядоченный набор наблюдений в столбцовом виде.

    Прирост хранится как fl(w_final - w_initial) и никогда не берётся из входа.
    """

    subject_ids: Tuple[str, ...]
    group: np.ndarray
    w_initial: np.ndarray
    w_final: np.ndarray
    gain: np.ndarray = field(init=False)

    def __post_init__(self):
        ids = tuple(str(s) for s in self.subject_ids)
        group = np.asarray(self.group)
        w_initial = np.array(self.w_initial, dtype=np.float64)
        w_final = np.array(self.w_final, dtype=np.float64)

        n = len(ids)
        if group.shape != (n,) or w_initial.shape != (n,) or w_final.shape != (n,):
            raise DataValidationError(
                f"несогласованные длины столбцов: id={n}, group={group.shape}, "
                f"w_initial={w_initial.shape}, w_final={w_final.shape}"
            )

        bad_group = ~np.isin(group, GROUP_LABELS)
        if bad_group.any():
            row = int(np.flatnonzero(bad_group)[0])
            raise DataValidationError(f"метка группы {group[row]!r} вне {{0, 1}}", row=row)

        for name, values in (("w_initial", w_initial), ("w_final", w_final)):
            not_finite = ~np.isfinite(values)
            if not_finite.any():
                row = int(np.flatnonzero(not_finite)[0])
                raise DataValidationError(f"{name} не конечно: {values[row]!r}", row=row)

        if len(set(ids)) != n:
            seen = set()
            for row, sid in enumerate(ids):
                if sid in seen:
                    raise DataValidationError(f"повторный subject_id '{sid}'", row=row)
                seen.add(sid)

        object.__setattr__(self, "subject_ids", ids)
        object.__setattr__(self, "group", _readonly(group.astype(np.int8)))
        object.__setattr__(self, "w_initial", _readonly(w_initial))
        object.__setattr__(self, "w_final", _readonly(w_final))
        object.__setattr__(self, "gain", _readonly(w_final - w_initial))

    @classmethod
    def from_observations(cls, observations: Sequence[Observation]) -> "Dataset":
        """Сборка набора из списка наблюдений"""
        return cls(
            subject_ids=tuple(o.subject_id for o in observations),
            group=np.array([o.group for o in observations], dtype=np.int8),
            w_initial=np.array([o.w_initial for o in observations], dtype=np.float64),
            w_final=np.array([o.w_final for o in observations], dtype=np.float64),
        )

    @property
    def n(self) -> int:
        return len(self.subject_ids)

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[Observation]:
        for i in range(self.n):
            yield self.observation(i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.subject_ids == other.subject_ids
            and np.array_equal(self.group, other.group)
            and np.array_equal(self.w_initial, other.w_initial)
            and np.array_equal(self.w_final, other.w_final)
        )

    __hash__ = None

    def observation(self, index: int) -> Observation:
        return Observation(
            subject_id=self.subject_ids[index],
            group=int(self.group[index]),
            w_initial=float(self.w_initial[index]),
            w_final=float(self.w_final[index]),
        )

    @property
    def observations(self) -> Tuple[Observation, ...]:
        return tuple(self)

    @property
    def group_counts(self) -> Dict[int, int]:
        """Число наблюдений в каждой группе"""
        return {label: int(np.count_nonzero(self.group == label)) for label in GROUP_LABELS}

    def variable(self, name: str) -> np.ndarray:
        """Столбец по имени: w_initial, w_final или gain"""
        if name not in ("w_initial", "w_final", "gain"):
            raise KeyError(f"неизвестная переменная: {name}")
        return getattr(self, name)

    def require_both_groups(self) -> None:
        """Проверка, что обе группы непусты"""
        counts = self.group_counts
        empty = [label for label, count in counts.items() if count == 0]
        if empty:
            raise DataValidationError(f"пустая группа: {empty[0]} (размеры групп {counts})")

    def take(self, indices: Sequence[int] | np.ndarray) -> "Dataset":
        """Подвыборка или перестановка строк"""
        idx = np.asarray(indices)
        if idx.dtype == bool:
            idx = np.flatnonzero(idx)
        return Dataset(
            subject_ids=tuple(self.subject_ids[i] for i in idx),
            group=self.group[idx],
            w_initial=self.w_initial[idx],
            w_final=self.w_final[idx],
        )

    def fingerprint(self) -> str:
        """SHA-256 от строк набора, связывает этапы анализа с одними данными"""
        digest = hashlib.sha256()
        digest.update("\x1f".join(self.subject_ids).encode("utf-8"))
        digest.update(self.group.astype("<i1").tobytes())
        digest.update(self.w_initial.astype("<f8").tobytes())
        digest.update(self.w_final.astype("<f8").tobytes())
        return digest.hexdigest()


@dataclass(frozen=True)
class ColumnSchema:
    """Соответствие столбцов CSV полям наблюдения"""

    subject_id: str = "id"
    group: str = "sex"
    w_initial: str = "w_initial"
    w_final: str = "w_final"
    gain: str = "gain"

    def required(self) -> Tuple[str, ...]:
        return (self.subject_id, self.group, self.w_initial, self.w_final)


BinStrategy = Literal["fixed_width", "quantile", "explicit"]


@dataclass(frozen=True)
class BinningSpec:
    """
    Разбиение W_I на подгруппы (общие для обеих групп).

    Интервалы полуоткрыты слева [a, b), последний закрыт.
    """

    strategy: BinStrategy
    k: int | None = None
    edges: Tuple[float, ...] | None = None

    def __post_init__(self):
        if self.strategy in ("fixed_width", "quantile"):
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise DataValidationError(f"число интервалов должно быть целым >= 1, получено {self.k!r}")
            object.__setattr__(self, "k", int(self.k))
        elif self.strategy == "explicit":
            if self.edges is None or len(self.edges) < 2:
                raise DataValidationError("нужно не менее двух границ интервалов")
            edges = tuple(float(e) for e in self.edges)
            if not all(math.isfinite(e) for e in edges):
                raise DataValidationError("границы интервалов должны быть конечными")
            if any(b <= a for a, b in zip(edges, edges[1:])):
                raise DataValidationError(f"границы должны строго возрастать: {edges}")
            object.__setattr__(self, "edges", edges)
        else:
            raise DataValidationError(f"неизвестная стратегия разбиения: {self.strategy!r}")

    @classmethod
    def fixed_width(cls, k: int) -> "BinningSpec":
        return cls(strategy="fixed_width", k=k)

    @classmethod
    def quantile(cls, k: int) -> "BinningSpec":
        return cls(strategy="quantile", k=k)

    @classmethod
    def explicit(cls, edges: Sequence[float]) -> "BinningSpec":
        return cls(strategy="explicit", edges=tuple(edges))

    @classmethod
    def default_for(cls, ds: Dataset, min_per_group_bin: int = 5) -> "BinningSpec":
        """
        Квантильное разбиение по умолчанию: k = max(2, floor(sqrt(n)/2)),
        но так, чтобы на интервал в среднем приходилось >= min_per_group_bin
        наблюдений меньшей группы.
        """
        k = max(2, int(math.floor(math.sqrt(ds.n) / 2)))
        smallest = min(ds.group_counts.values())
        cap = max(1, smallest // min_per_group_bin)
        return cls.quantile(min(k, cap))

    @classmethod
    def diagnostic_for(cls, ds: Dataset, min_per_group_bin: int = 5, max_bins: int = 4) -> "BinningSpec":
        """Более грубое квантильное разбиение для диагностики остатков: страты крупнее"""
        return cls.quantile(min(cls.default_for(ds, min_per_group_bin).k, max_bins))

    def describe(self) -> str:
        if self.strategy == "explicit":
            return f"explicit({', '.join(f'{e:g}' for e in self.edges)})"
        return f"{self.strategy}({self.k})"
