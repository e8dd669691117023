"""
Генератор сценария Лорда.

Для группы s: W_I ~ N(mu_s, sigma^2),
W_F = mu_s + rho (W_I - mu_s) + gain_s + e, E[e] = 0, Var[e] = sigma^2 (1 - rho^2).
Регрессия к среднему (rho < 1) даёт ненулевой ANCOVA-коэффициент группы
даже при нулевых приростах.
"""
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Literal, Tuple

import numpy as np
from pydantic import BaseModel, Field

from paradoxlens.configs import config
from paradoxlens.core.dataset_io import save_csv
from paradoxlens.core.errors import ScenarioConfigError
from paradoxlens.core.models import Dataset

logger = logging.getLogger(__name__)

NoiseFamily = Literal["gaussian", "laplace", "mixture"]
NOISE_FAMILIES = ("gaussian", "laplace", "mixture")
MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class NoiseSpec:
    """
    Семейство шума W_F. Дисперсия всегда sigma^2 (1 - rho^2).

    mixture: две нормальные компоненты с общим sd, средние разнесены на
    separation sd компоненты, weight - доля первой компоненты.
    """

    family: NoiseFamily = "gaussian"
    separation: float = 6.0
    weight: float = 0.5

    def __post_init__(self):
        if self.family not in NOISE_FAMILIES:
            raise ScenarioConfigError("noise", f"семейство должно быть одним из {NOISE_FAMILIES}, получено {self.family!r}")
        if not math.isfinite(self.separation) or self.separation < 0:
            raise ScenarioConfigError("noise.separation", f"должно быть конечным и >= 0, получено {self.separation}")
        if not 0.0 < self.weight < 1.0:
            raise ScenarioConfigError("noise.weight", f"должно лежать в (0, 1), получено {self.weight}")

    @classmethod
    def parse(cls, text: str) -> "NoiseSpec":
        """'gaussian', 'laplace', 'mixture' или 'mixture:<separation>[:<weight>]'"""
        family, _, rest = text.strip().partition(":")
        if family != "mixture" or not rest:
            if rest:
                raise ScenarioConfigError("noise", f"параметры допустимы только для mixture: {text!r}")
            return cls(family=family)
        parts = rest.split(":")
        try:
            separation = float(parts[0])
            weight = float(parts[1]) if len(parts) > 1 else 0.5
        except ValueError:
            raise ScenarioConfigError("noise", f"некорректные параметры смеси: {text!r}")
        if len(parts) > 2:
            raise ScenarioConfigError("noise", f"лишние параметры смеси: {text!r}")
        return cls(family="mixture", separation=separation, weight=weight)

    def describe(self) -> str:
        if self.family == "mixture":
            return f"mixture:{self.separation:g}:{self.weight:g}"
        return self.family


@dataclass(frozen=True)
class ScenarioConfig:
    """Параметры сценария; проверяются при создании"""

    n0: int = 2000
    n1: int = 2000
    mu0: float = 54.0
    mu1: float = 64.0
    sigma: float = 5.0
    rho: float = 0.7
    gain0: float = 0.0
    gain1: float = 0.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    seed: int = 0

    def __post_init__(self):
        for name in ("n0", "n1"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 2:
                raise ScenarioConfigError(name, f"нужно целое >= 2, получено {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("mu0", "mu1", "sigma", "rho", "gain0", "gain1"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ScenarioConfigError(name, f"должно быть конечным, получено {value!r}")
            object.__setattr__(self, name, value)
        if self.sigma <= 0:
            raise ScenarioConfigError("sigma", f"должно быть > 0, получено {self.sigma}")
        if abs(self.rho) > 1:
            raise ScenarioConfigError("rho", f"должно лежать в [-1, 1], получено {self.rho}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise ScenarioConfigError("seed", f"нужно целое в [0, 2^64), получено {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def noise_sd(self) -> float:
        """sigma * sqrt(1 - rho^2)"""
        return self.sigma * math.sqrt(max(0.0, 1.0 - self.rho ** 2))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["noise"] = asdict(self.noise)
        return data


@dataclass(frozen=True)
class ScenarioTruth:
    """Истинные значения оцениваемых величин"""

    true_a1: float
    true_a2: float
    true_ancova_group_coef: float
    true_b0: float
    true_residual_variance_submodel: float
    true_residual_variance_supermodel: float

    @classmethod
    def of(cls, cfg: ScenarioConfig) -> "ScenarioTruth":
        ancova = (cfg.mu1 - cfg.mu0) * (1.0 - cfg.rho) + (cfg.gain1 - cfg.gain0)
        return cls(
            true_a1=cfg.gain1 - cfg.gain0,
            # При общем линейном наклоне A2 совпадает с ANCOVA-коэффициентом
            true_a2=ancova,
            true_ancova_group_coef=ancova,
            true_b0=cfg.rho,
            true_residual_variance_submodel=cfg.sigma ** 2,
            true_residual_variance_supermodel=cfg.noise_sd ** 2,
        )


def _noise(rng: np.random.Generator, spec: NoiseSpec, scale: float, size: int) -> np.ndarray:
    if scale == 0.0:
        return np.zeros(size)
    if spec.family == "gaussian":
        return rng.normal(0.0, scale, size)
    if spec.family == "laplace":
        return rng.laplace(0.0, scale / math.sqrt(2.0), size)

    p = spec.weight
    component_sd = scale / math.sqrt(1.0 + p * (1.0 - p) * spec.separation ** 2)
    delta = spec.separation * component_sd
    first = rng.random(size) < p
    means = np.where(first, (1.0 - p) * delta, -p * delta)
    return means + rng.normal(0.0, component_sd, size)


def generate(cfg: ScenarioConfig) -> Tuple[Dataset, ScenarioTruth]:
    """
    Набор данных по сценарию: сначала группа 0, затем группа 1.

    Один и тот же cfg (включая seed) даёт побитово одинаковый набор.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    tau = cfg.noise_sd

    groups, initial, final = [], [], []
    for label, n, mu, gain in ((0, cfg.n0, cfg.mu0, cfg.gain0), (1, cfg.n1, cfg.mu1, cfg.gain1)):
        w_initial = rng.normal(mu, cfg.sigma, n)
        e = _noise(rng, cfg.noise, tau, n)
        w_final = w_initial - (1.0 - cfg.rho) * (w_initial - mu) + gain + e
        groups.append(np.full(n, label, dtype=np.int8))
        initial.append(w_initial)
        final.append(w_final)

    n_total = cfg.n0 + cfg.n1
    ds = Dataset(
        subject_ids=tuple(f"s{idx:05d}" for idx in range(n_total)),
        group=np.concatenate(groups),
        w_initial=np.concatenate(initial),
        w_final=np.concatenate(final),
    )
    logger.debug(f"Сгенерировано {n_total} наблюдений (seed={cfg.seed}, шум {cfg.noise.describe()})")
    return ds, ScenarioTruth.of(cfg)


class ScenarioSidecar(BaseModel):
    """JSON-спутник CSV: параметры сценария и истинные значения"""

    config: Dict[str, Any] = Field(description="Параметры ScenarioConfig")
    truth: Dict[str, float] = Field(description="Истинные значения из ScenarioTruth")
    rng: str = Field(description="Алгоритм генератора случайных чисел")


def sidecar_path(csv_path: str | Path) -> Path:
    """data.csv -> data.scenario.json"""
    path = Path(csv_path)
    return path.with_name(f"{path.stem if path.suffix else path.name}.scenario.json")


def save_scenario(ds: Dataset, cfg: ScenarioConfig, truth: ScenarioTruth,
                  csv_path: str | Path) -> Tuple[Path, Path]:
    """
    Запись CSV и JSON-спутника.

    Returns:
        (путь CSV, путь JSON)
    """
    csv_file = Path(csv_path)
    save_csv(ds, csv_file)
    sidecar = ScenarioSidecar(config=cfg.to_dict(), truth=asdict(truth), rng=config.simulation.rng_algorithm)
    json_file = sidecar_path(csv_file)
    with open(json_file, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(sidecar.model_dump(), indent=2, ensure_ascii=False, sort_keys=True))
        f.write("\n")
    logger.info(f"💾 Сценарий сохранён: {csv_file}, {json_file}")
    return csv_file, json_file
