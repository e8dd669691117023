"""
Чтение и запись набора данных в CSV.
Формат: UTF-8, разделитель запятая, обязательная строка заголовка.
"""
import logging
import math
import os
from typing import List

import numpy as np
import pandas as pd

from .errors import DataValidationError, RowParseError, SchemaError
from .models import ColumnSchema, Dataset

logger = logging.getLogger(__name__)

_GROUP_VALUES = {"0": 0, "1": 1}


def _parse_measure(raw: str, row: int, column: str) -> float:
    """Разбор измерения: конечное число с точкой в качестве десятичного разделителя"""
    text = raw.strip()
    try:
        value = float(text)
    except ValueError:
        raise RowParseError(row, column, raw) from None
    if not math.isfinite(value):
        raise RowParseError(row, column, raw)
    return value


def load_csv(path: str | os.PathLike, schema: ColumnSchema | None = None) -> Dataset:
    """
    Загрузка набора данных из CSV.

    Args:
        path: путь к файлу
        schema: соответствие столбцов (по умолчанию id,sex,w_initial,w_final)

    Returns:
        Dataset с пересчитанным приростом, порядок строк сохранён

    Индексы строк в ошибках - номера строк данных, начиная с 0.
    """
    schema = schema or ColumnSchema()
    logger.debug(f"Чтение {path}")

    frame = pd.read_csv(
        path,
        sep=",",
        dtype=str,
        keep_default_na=False,
        encoding="utf-8",
    )
    columns = [str(c).strip() for c in frame.columns]
    frame.columns = columns

    for column in schema.required():
        if column not in columns:
            raise SchemaError(column, columns)

    ids: List[str] = []
    groups: List[int] = []
    initial: List[float] = []
    final: List[float] = []

    for row, record in enumerate(frame.itertuples(index=False, name=None)):
        values = dict(zip(columns, record))
        raw_group = values[schema.group].strip()
        if raw_group not in _GROUP_VALUES:
            raise DataValidationError(
                f"столбец '{schema.group}': метка группы {raw_group!r} вне {{0, 1}}", row=row
            )
        ids.append(values[schema.subject_id].strip())
        groups.append(_GROUP_VALUES[raw_group])
        initial.append(_parse_measure(values[schema.w_initial], row, schema.w_initial))
        final.append(_parse_measure(values[schema.w_final], row, schema.w_final))

    if schema.gain in columns:
        logger.debug(f"Столбец '{schema.gain}' во входе игнорируется, прирост пересчитывается")

    ds = Dataset(
        subject_ids=tuple(ids),
        group=np.array(groups, dtype=np.int8),
        w_initial=np.array(initial, dtype=np.float64),
        w_final=np.array(final, dtype=np.float64),
    )
    logger.info(f"📥 Загружено {ds.n} наблюдений из {path} (группы: {ds.group_counts})")
    return ds


def save_csv(ds: Dataset, path: str | os.PathLike, schema: ColumnSchema | None = None) -> None:
    """
    Запись набора данных в CSV со столбцом производного прироста.

    Числа пишутся кратчайшим представлением, однозначно восстанавливающим float64,
    поэтому load -> save -> load воспроизводит тот же Dataset.
    """
    schema = schema or ColumnSchema()
    frame = pd.DataFrame({
        schema.subject_id: list(ds.subject_ids),
        schema.group: [str(int(g)) for g in ds.group],
        schema.w_initial: [repr(float(v)) for v in ds.w_initial],
        schema.w_final: [repr(float(v)) for v in ds.w_final],
        schema.gain: [repr(float(v)) for v in ds.gain],
    })
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info(f"💾 Набор данных ({ds.n} строк) сохранён в {path}")
