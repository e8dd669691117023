"""
Диагностика остатков: условия, при которых коэффициент регрессии можно
читать как эффект (симметрия и унимодальность остатков в каждой группе и
в каждом интервале W_I), и проверка снижения условной дисперсии.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Literal, Optional, Tuple

import numpy as np

from paradoxlens.configs import config
from paradoxlens.core.binning import assign_bins
from paradoxlens.core.errors import ConsistencyError, DataValidationError
from paradoxlens.core.models import GROUP_LABELS, BinningSpec, Dataset
from paradoxlens.ols.solver import FitResult

from .dip import MIN_POINTS, unimodality_test
from .symmetry import symmetry_test

logger = logging.getLogger(__name__)

Verdict = Literal["supports_effect_reading", "violates", "insufficient_n"]
SUPPORTS: Verdict = "supports_effect_reading"
VIOLATES: Verdict = "violates"
INSUFFICIENT: Verdict = "insufficient_n"
CORRECTIONS = ("bonferroni", "none")


@dataclass(frozen=True)
class StratumDiagnostics:
    """Одна страта: группа и, возможно, интервал W_I"""

    group: int
    bin: Optional[int]
    n: int
    skewness: Optional[float]
    symmetry_p: Optional[float]
    dip_statistic: Optional[float]
    dip_p: Optional[float]
    verdict: Verdict


@dataclass(frozen=True)
class DiagnosticsReport:
    """Вердикты по стратам и общий вердикт"""

    model: str
    strata: Tuple[StratumDiagnostics, ...]
    verdict: Verdict
    seed: int
    min_n: int
    alpha: float
    threshold: float
    correction: str
    bootstrap_draws: int
    dip_draws: int
    binning: str

    def violations(self) -> Tuple[StratumDiagnostics, ...]:
        return tuple(s for s in self.strata if s.verdict == VIOLATES)


@dataclass(frozen=True)
class VarianceReduction:
    """Маргинальная и средняя условная дисперсия остатков подмодели в группе"""

    marginal_var: float
    avg_conditional_var: float
    reduced: bool
    mixture_mean: float


def _stratum_seed(seed: int, group: int, bin_index: Optional[int]) -> int:
    """Независимый поток для каждой страты; 0 - вся группа, k+1 - интервал k"""
    sequence = np.random.SeedSequence([seed, group, 0 if bin_index is None else bin_index + 1])
    return int(sequence.generate_state(1, np.uint64)[0])


def _diagnose_stratum(values: np.ndarray, group: int, bin_index: Optional[int], *, seed: int,
                      min_n: int, threshold: float, bootstrap_draws: int, dip_draws: int) -> StratumDiagnostics:
    n = int(values.size)
    if n < min_n:
        return StratumDiagnostics(group, bin_index, n, None, None, None, None, INSUFFICIENT)

    if np.ptp(values) == 0.0:
        # Вырожденная страта симметрична и унимодальна
        skewness, symmetry_p, dip, dip_p = 0.0, 1.0, 0.0, 1.0
    else:
        skewness, symmetry_p = symmetry_test(values, bootstrap_draws, _stratum_seed(seed, group, bin_index))
        dip, dip_p = unimodality_test(values, dip_draws, seed)

    verdict = SUPPORTS if symmetry_p >= threshold and dip_p >= threshold else VIOLATES
    return StratumDiagnostics(group, bin_index, n, skewness, symmetry_p, dip, dip_p, verdict)


def _overall(strata: Tuple[StratumDiagnostics, ...]) -> Verdict:
    verdicts = {s.verdict for s in strata}
    if VIOLATES in verdicts:
        return VIOLATES
    if verdicts == {INSUFFICIENT}:
        return INSUFFICIENT
    return SUPPORTS


def residual_diagnostics(ds: Dataset, fit: FitResult, spec: BinningSpec, *,
                         seed: int,
                         min_n: Optional[int] = None,
                         alpha: Optional[float] = None,
                         bootstrap_draws: Optional[int] = None,
                         dip_draws: Optional[int] = None,
                         correction: Optional[str] = None,
                         residuals: Optional[np.ndarray] = None) -> DiagnosticsReport:
    """
    Диагностика остатков модели по группам и по парам (группа, интервал).

    Args:
        ds: набор данных, на котором получена модель
        fit: результат МНК
        spec: разбиение W_I
        seed: зерно всех процедур Монте-Карло
        min_n, alpha, bootstrap_draws, dip_draws, correction: по умолчанию из config.diagnostics
        residuals: подставные остатки вместо fit.residuals (той же длины)

    Raises:
        ConsistencyError: модель получена на других данных
    """
    if fit.dataset_fingerprint != ds.fingerprint():
        raise ConsistencyError("модель получена на другом наборе данных")
    ds.require_both_groups()

    settings = config.diagnostics
    min_n = settings.min_n if min_n is None else int(min_n)
    alpha = settings.alpha if alpha is None else float(alpha)
    bootstrap_draws = settings.bootstrap_draws if bootstrap_draws is None else int(bootstrap_draws)
    dip_draws = settings.dip_draws if dip_draws is None else int(dip_draws)
    correction = settings.correction if correction is None else correction
    if correction not in CORRECTIONS:
        raise DataValidationError(f"поправка должна быть одной из {CORRECTIONS}, получено {correction!r}")
    if min_n < MIN_POINTS:
        raise DataValidationError(f"минимальный размер страты должен быть >= {MIN_POINTS}, получено {min_n}")
    if not 0.0 < alpha < 1.0:
        raise DataValidationError(f"порог alpha должен лежать в (0, 1), получено {alpha}")

    eps = fit.residuals if residuals is None else np.asarray(residuals, dtype=np.float64)
    if eps.shape != (ds.n,):
        raise DataValidationError(f"длина остатков {eps.shape} не совпадает с n={ds.n}")

    assignment = assign_bins(ds, spec)
    cells = []
    for label in GROUP_LABELS:
        mask = ds.group == label
        cells.append((label, None, eps[mask]))
        for b in range(assignment.n_bins):
            in_bin = mask & (assignment.indices == b)
            if in_bin.any():
                cells.append((label, b, eps[in_bin]))

    # Два теста на каждую оцениваемую страту
    tested = sum(values.size >= min_n for _, _, values in cells)
    threshold = alpha / (2 * tested) if correction == "bonferroni" and tested else alpha
    floor = 1.0 / (min(bootstrap_draws, dip_draws) + 1)
    if tested and floor >= threshold:
        logger.warning(f"⚠️  Минимальное p-значение Монте-Карло {floor:.2g} не ниже порога {threshold:.2g}: "
                       f"нарушения не будут обнаружены, увеличьте число выборок")

    options = dict(seed=seed, min_n=min_n, threshold=threshold, bootstrap_draws=bootstrap_draws, dip_draws=dip_draws)
    strata = tuple(_diagnose_stratum(values, label, b, **options) for label, b, values in cells)
    verdict = _overall(strata)
    if verdict == INSUFFICIENT:
        logger.warning(f"⚠️  Все страты меньше min_n={min_n}, вердикт не выносится")
    elif verdict == VIOLATES:
        logger.warning(f"⚠️  Нарушены условия в {sum(s.verdict == VIOLATES for s in strata)} стратах")
    else:
        logger.info("✅ Остатки симметричны и унимодальны во всех оценённых стратах")

    return DiagnosticsReport(
        model=f"{fit.spec.response} ~ {' + '.join(fit.terms)}",
        strata=strata,
        verdict=verdict,
        seed=int(seed),
        min_n=min_n,
        alpha=alpha,
        threshold=threshold,
        correction=correction,
        bootstrap_draws=bootstrap_draws,
        dip_draws=dip_draws,
        binning=spec.describe(),
    )


def variance_reduction_check(ds: Dataset, submodel: FitResult, spec: BinningSpec) -> Dict[int, VarianceReduction]:
    """
    Закон полной дисперсии для остатков подмодели в каждой группе:
    sum p(интервал|s) Var(e1|интервал, s) <= Var(e1|s).

    Дисперсии - генеральные (ddof=0).
    """
    if submodel.dataset_fingerprint != ds.fingerprint():
        raise ConsistencyError("подмодель получена на другом наборе данных")
    ds.require_both_groups()
    assignment = assign_bins(ds, spec)
    eps = submodel.residuals

    result = {}
    for label in GROUP_LABELS:
        mask = ds.group == label
        group_eps = eps[mask]
        bins = assignment.indices[mask]
        size = group_eps.size
        counts = np.bincount(bins, minlength=assignment.n_bins)
        sums = np.bincount(bins, weights=group_eps, minlength=assignment.n_bins)
        occupied = counts > 0
        means = np.zeros(assignment.n_bins)
        means[occupied] = sums[occupied] / counts[occupied]
        squares = np.bincount(bins, weights=(group_eps - means[bins]) ** 2, minlength=assignment.n_bins)

        avg_conditional = float(squares.sum() / size)
        marginal = float(group_eps.var())
        mixture_mean = float(np.sum(counts / size * means))
        reduced = avg_conditional <= marginal + 1e-10
        if not reduced:
            logger.error(f"❌ Условная дисперсия больше маргинальной в группе {label}")
        if abs(mixture_mean) > 1e-10 * max(1.0, math.sqrt(marginal)):
            logger.warning(f"⚠️  Смесь условных средних остатков не равна нулю: {mixture_mean:.3g}")
        result[label] = VarianceReduction(
            marginal_var=marginal,
            avg_conditional_var=avg_conditional,
            reduced=reduced,
            mixture_mean=mixture_mean,
        )
    return result
