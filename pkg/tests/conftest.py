"""
Общие фикстуры: пример из восьми строк, данные сценария Лорда, сброс конфигурации.
"""
import logging

import numpy as np
import pytest

from paradoxlens.configs import config
from paradoxlens.configs.logging_config import BASE_LOGGER
from paradoxlens.core.models import BinningSpec, Dataset
from paradoxlens.simulate import generate, preset_config

# (id, группа, W_I, W_F): мальчики - группа 1, девочки - группа 0
WORKED_ROWS = [
    ("b1", 1, 48.0, 51.0),
    ("b2", 1, 61.0, 62.0),
    ("b3", 1, 62.0, 63.0),
    ("b4", 1, 63.0, 64.0),
    ("g1", 0, 46.0, 48.0),
    ("g2", 0, 47.0, 49.0),
    ("g3", 0, 49.0, 51.0),
    ("g4", 0, 58.0, 58.0),
]
WORKED_EDGES = (40.0, 55.0, 70.0)


def make_dataset(rows) -> Dataset:
    ids, groups, initial, final = zip(*rows)
    return Dataset(
        subject_ids=ids,
        group=np.array(groups, dtype=np.int8),
        w_initial=np.array(initial, dtype=np.float64),
        w_final=np.array(final, dtype=np.float64),
    )


def random_dataset(rng: np.random.Generator, n: int) -> Dataset:
    """Произвольный набор с обеими группами и разными сдвигами и наклонами"""
    group = rng.integers(0, 2, size=n)
    group[:2] = (0, 1)
    w_initial = rng.normal(rng.uniform(40, 70), rng.uniform(1, 10), size=n) + 5.0 * group
    slope = rng.uniform(-1, 2)
    w_final = 10.0 + slope * w_initial + rng.uniform(-3, 3) * group + rng.standard_t(5, size=n)
    return Dataset(
        subject_ids=tuple(f"r{i}" for i in range(n)),
        group=group,
        w_initial=w_initial,
        w_final=w_final,
    )


def write_csv(path, rows, header="id,sex,w_initial,w_final") -> str:
    lines = [header] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """Конфигурация из окружения без PARADOXLENS_SEED и без файловых логов"""
    monkeypatch.delenv("PARADOXLENS_SEED", raising=False)
    monkeypatch.setenv("PARADOXLENS_LOG_FILE", "FALSE")
    config.reload_from_env()
    yield
    config.reload_from_env()
    base = logging.getLogger(BASE_LOGGER)
    base.handlers.clear()
    base.propagate = True


@pytest.fixture
def worked() -> Dataset:
    return make_dataset(WORKED_ROWS)


@pytest.fixture
def worked_spec() -> BinningSpec:
    return BinningSpec.explicit(WORKED_EDGES)


@pytest.fixture
def worked_csv(tmp_path) -> str:
    return write_csv(tmp_path / "worked.csv", WORKED_ROWS)


@pytest.fixture(scope="session")
def lord_null():
    """Сценарий lord-null: mu 54/64, sigma 5, rho 0.7, по 2000 в группе"""
    return generate(preset_config("lord-null", seed=7))
