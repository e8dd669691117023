"""
Повторные симуляции: распределение оценок по репликам.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np

from paradoxlens.configs import config
from paradoxlens.core.errors import NoOverlapError
from paradoxlens.core.models import BinningSpec
from paradoxlens.decomposition import compute_a1, compute_a2
from paradoxlens.ols.design import ANCOVA_GAIN, GROUP
from paradoxlens.ols.solver import fit
from paradoxlens.supermodel import build_supermodel

from .scenario import ScenarioConfig, ScenarioTruth, generate

logger = logging.getLogger(__name__)

STATISTICS = ("a1", "a2", "ancova_group_coef", "b0", "composition_delta")


@dataclass(frozen=True)
class ReplicateStats:
    """Оценки одной реплики"""

    index: int
    seed: int
    a1: float
    a2: float
    ancova_group_coef: float
    ancova_group_se: float
    b0: float
    b0_se: float
    composition_delta: float


@dataclass(frozen=True)
class Moments:
    """Среднее, sd и стандартная ошибка среднего по репликам (sd = 0 при одной реплике)"""

    mean: float
    sd: float
    se: float


@dataclass(frozen=True)
class StudySummary:
    reps: int
    seed: int
    rng: str
    truth: ScenarioTruth
    statistics: Dict[str, Moments]
    replicates: Tuple[ReplicateStats, ...]


def replicate_seed(seed: int, index: int) -> int:
    """Зерно реплики: потомок SeedSequence(seed) с ключом (index,), не зависит от порядка выполнения"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return int(sequence.generate_state(1, np.uint64)[0])


def run_replicate(cfg: ScenarioConfig, index: int, binning: Optional[BinningSpec] = None) -> ReplicateStats:
    """Генерация и полный анализ одной реплики"""
    seed = replicate_seed(cfg.seed, index)
    ds, _ = generate(replace(cfg, seed=seed))
    spec = binning or BinningSpec.default_for(ds, config.analysis.min_expected_per_group_bin)
    try:
        a2 = compute_a2(ds, spec).a2
    except NoOverlapError:
        a2 = math.nan
    ancova = fit(ds, ANCOVA_GAIN)
    report = build_supermodel(ds)
    return ReplicateStats(
        index=index,
        seed=seed,
        a1=compute_a1(ds),
        a2=a2,
        ancova_group_coef=ancova.coef(GROUP),
        ancova_group_se=ancova.se(GROUP),
        b0=report.residual_stage.b0,
        b0_se=report.residual_stage.b0_se,
        composition_delta=report.relative_composition_delta,
    )


def _moments(values: np.ndarray) -> Moments:
    values = values[np.isfinite(values)]
    if values.size == 0:
        return Moments(mean=math.nan, sd=math.nan, se=math.nan)
    if values.size == 1:
        return Moments(mean=float(values[0]), sd=0.0, se=0.0)
    sd = float(values.std(ddof=1))
    return Moments(mean=float(values.mean()), sd=sd, se=sd / math.sqrt(values.size))


def replicate_study(cfg: ScenarioConfig, reps: int, workers: int = 1,
                    binning: Optional[BinningSpec] = None) -> StudySummary:
    """
    Сводка оценок по reps репликам сценария.

    Args:
        cfg: сценарий, cfg.seed - корневое зерно
        reps: число реплик, >= 1
        workers: число потоков; результат от него не зависит
        binning: разбиение для A2 (по умолчанию правило default_for)
    """
    if reps < 1:
        raise ValueError(f"число реплик должно быть >= 1, получено {reps}")
    logger.info(f"🚀 Запуск {reps} реплик (seed={cfg.seed}, потоков {workers})")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {r: pool.submit(run_replicate, cfg, r, binning) for r in range(reps)}
            results = {r: future.result() for r, future in futures.items()}
    else:
        results = {r: run_replicate(cfg, r, binning) for r in range(reps)}

    replicates = tuple(results[r] for r in sorted(results))
    statistics = {
        name: _moments(np.array([getattr(rep, name) for rep in replicates], dtype=np.float64))
        for name in STATISTICS
    }
    logger.info(f"✅ Реплики завершены: среднее A1={statistics['a1'].mean:.4g}, b0={statistics['b0'].mean:.4g}")
    return StudySummary(
        reps=reps,
        seed=cfg.seed,
        rng=config.simulation.rng_algorithm,
        truth=ScenarioTruth.of(cfg),
        statistics=statistics,
        replicates=replicates,
    )
