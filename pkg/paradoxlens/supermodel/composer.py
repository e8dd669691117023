"""
Построение супермодели из подмодели.

1. Подмодель: W_F ~ 1 + S, остатки e1.
2. Регрессия остатков: e1 ~ [S=0] + [S=1] + W_I (общий наклон b0, два свободных члена a0, a1).
3. Композиция: W_F = (mu_G + a0) + (mu_B - mu_G - a0 + a1) S + b0 W_I + e2,
   сверяется с прямой МНК-оценкой W_F ~ 1 + S + W_I.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import stats

from paradoxlens.configs import config
from paradoxlens.core.binning import assign_bins
from paradoxlens.core.errors import (ConsistencyError, DataValidationError,
                                     DegreesOfFreedomError, SingularDesignError)
from paradoxlens.core.models import GROUP_LABELS, BinningSpec, Dataset
from paradoxlens.ols.design import (ANCOVA_FINAL, ANCOVA_GAIN, GROUP, GROUP0, GROUP1,
                                    INTERCEPT, RESIDUAL_STAGE, SUBMODEL)
from paradoxlens.ols.solver import FitResult, fit, fit_response

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ResidualStageFit:
    """Регрессия остатков подмодели на W_I с общим наклоном"""

    a0: float
    a1: float
    b0: float
    stage_residuals: np.ndarray
    dataset_fingerprint: str
    fit: Optional[FitResult] = None

    @property
    def b0_se(self) -> float:
        return self.fit.se("w_initial") if self.fit is not None else math.nan


@dataclass(frozen=True)
class SeparateSlopes:
    """Наклоны e1 на W_I, оценённые отдельно по группам"""

    slope: Dict[int, float]
    se: Dict[int, float]
    gap: float
    gap_se: float


@dataclass(frozen=True)
class GroupResidualProfile:
    """Связь e1 с W_I и моменты e1 внутри одной группы"""

    n: int
    mean_gain: float
    mean_gain_se: float
    residual_gain_shift: float
    corr_with_w_initial: float
    corr_t: float
    variance: float
    skewness: float
    excess_kurtosis: float


@dataclass(frozen=True)
class GainFinalEquivalence:
    """ANCOVA по W_F и по приросту: совпадение коэффициента группы, сдвиг наклона на 1"""

    group_coef_final: float
    group_coef_gain: float
    group_delta: float
    w_initial_delta: float


@dataclass(frozen=True, eq=False)
class SupermodelReport:
    """Подмодель, регрессия остатков, композиция и прямая оценка"""

    submodel: FitResult
    residual_stage: ResidualStageFit
    composed: Dict[str, float]
    direct: FitResult
    max_composition_delta: float
    relative_composition_delta: float
    equivalence: GainFinalEquivalence
    profiles: Dict[int, GroupResidualProfile]
    separate_slopes: Optional[SeparateSlopes]
    null_scenario: bool
    moment_differences: Dict[str, float] = field(default_factory=dict)

    @property
    def composed_group_t(self) -> float:
        """t-статистика составного коэффициента группы (он совпадает с прямым)"""
        return self.direct.t(GROUP)


def _check_same_data(fingerprint: str, ds: Dataset, what: str) -> None:
    if fingerprint != ds.fingerprint():
        raise ConsistencyError(f"{what} получен на другом наборе данных")


def fit_submodel(ds: Dataset) -> FitResult:
    """
    W_F ~ 1 + S: коэффициенты (mu_G, mu_B - mu_G), остатки - отклонения от средних групп.

    Raises:
        DataValidationError: пустая группа
    """
    ds.require_both_groups()
    result = fit(ds, SUBMODEL)
    logger.debug(f"Подмодель: mu_G={result.coef(INTERCEPT):.6g}, mu_B-mu_G={result.coef(GROUP):.6g}")
    return result


def fit_residual_stage(ds: Dataset, submodel: FitResult) -> ResidualStageFit:
    """
    МНК остатков подмодели на {[S=0], [S=1], W_I}.

    Raises:
        ConsistencyError: подмодель получена на других данных
        SingularDesignError: W_I коллинеарен индикаторам групп
    """
    _check_same_data(submodel.dataset_fingerprint, ds, "остаток подмодели")
    stage = fit_response(ds, RESIDUAL_STAGE.terms, submodel.residuals, name=RESIDUAL_STAGE.response)
    return ResidualStageFit(
        a0=stage.coef(GROUP0),
        a1=stage.coef(GROUP1),
        b0=stage.coef("w_initial"),
        stage_residuals=stage.residuals,
        dataset_fingerprint=stage.dataset_fingerprint,
        fit=stage,
    )


def _group_profile(ds: Dataset, residuals: np.ndarray, label: int) -> GroupResidualProfile:
    mask = ds.group == label
    n = int(mask.sum())
    eps = residuals[mask]
    gain = ds.gain[mask]
    w_initial = ds.w_initial[mask]

    mean_gain = float(gain.mean())
    mean_gain_se = float(gain.std(ddof=1) / math.sqrt(n)) if n > 1 else math.nan

    corr, corr_t = math.nan, math.nan
    if n >= 3 and np.ptp(eps) > 0 and np.ptp(w_initial) > 0:
        corr = float(np.corrcoef(eps, w_initial)[0, 1])
        corr_t = corr * math.sqrt((n - 2) / (1.0 - corr ** 2)) if abs(corr) < 1.0 else math.copysign(math.inf, corr)

    skewness, kurtosis = math.nan, math.nan
    if n >= 4 and np.ptp(eps) > 0:
        skewness = float(stats.skew(eps, bias=False))
        kurtosis = float(stats.kurtosis(eps, fisher=True, bias=False))

    return GroupResidualProfile(
        n=n,
        mean_gain=mean_gain,
        mean_gain_se=mean_gain_se,
        residual_gain_shift=float(np.mean(eps - gain)),
        corr_with_w_initial=corr,
        corr_t=corr_t,
        variance=float(eps.var()),
        skewness=skewness,
        excess_kurtosis=kurtosis,
    )


def _separate_slopes(ds: Dataset, residuals: np.ndarray) -> Optional[SeparateSlopes]:
    """Наклоны e1 ~ 1 + W_I по каждой группе; None, если хотя бы один не оценивается"""
    slope, se = {}, {}
    for label in GROUP_LABELS:
        mask = ds.group == label
        try:
            group_fit = fit_response(ds.take(mask), (INTERCEPT, "w_initial"), residuals[mask])
        except (SingularDesignError, DegreesOfFreedomError) as e:
            logger.warning(f"⚠️  Наклон в группе {label} не оценивается: {e}")
            return None
        slope[label] = group_fit.coef("w_initial")
        se[label] = group_fit.se("w_initial")
    return SeparateSlopes(
        slope=slope,
        se=se,
        gap=slope[1] - slope[0],
        gap_se=math.sqrt(se[0] ** 2 + se[1] ** 2),
    )


def _is_null_scenario(profiles: Dict[int, GroupResidualProfile]) -> bool:
    """Средний прирост каждой группы в пределах z стандартных ошибок от нуля"""
    z = config.analysis.null_scenario_z
    for profile in profiles.values():
        se = profile.mean_gain_se
        tolerance = z * se if np.isfinite(se) and se > 0 else 1e-10
        if abs(profile.mean_gain) > tolerance:
            return False
    return True


def compose(submodel: FitResult, stage: ResidualStageFit, ds: Dataset) -> SupermodelReport:
    """
    Составные коэффициенты супермодели и их сверка с прямой оценкой.

    Args:
        submodel: W_F ~ 1 + S на ds
        stage: регрессия остатков этой подмодели на ds
        ds: набор данных для прямой оценки

    Raises:
        ConsistencyError: оценки получены на разных данных
    """
    if submodel.dataset_fingerprint != stage.dataset_fingerprint:
        raise ConsistencyError("подмодель и регрессия остатков получены на разных наборах данных")
    _check_same_data(submodel.dataset_fingerprint, ds, "подмодель")
    if submodel.spec != SUBMODEL:
        raise DataValidationError(f"ожидается подмодель {SUBMODEL.response} ~ 1 + S")

    mu_g = submodel.coef(INTERCEPT)
    mu_diff = submodel.coef(GROUP)
    composed = {
        INTERCEPT: mu_g + stage.a0,
        GROUP: mu_diff - stage.a0 + stage.a1,
        "w_initial": stage.b0,
    }

    direct = fit(ds, ANCOVA_FINAL)
    deltas = [abs(composed[term] - direct.coef(term)) for term in ANCOVA_FINAL.terms]
    max_delta = float(max(deltas))
    scale = max(1.0, float(np.max(np.abs(direct.coefficients))))
    relative = max_delta / scale
    if relative > config.analysis.composition_tolerance:
        logger.warning(f"⚠️  Композиция расходится с прямой оценкой: {relative:.3g} (отн.)")

    gain_fit = fit(ds, ANCOVA_GAIN)
    equivalence = GainFinalEquivalence(
        group_coef_final=direct.coef(GROUP),
        group_coef_gain=gain_fit.coef(GROUP),
        group_delta=abs(direct.coef(GROUP) - gain_fit.coef(GROUP)),
        w_initial_delta=abs(direct.coef("w_initial") - gain_fit.coef("w_initial") - 1.0),
    )

    profiles = {label: _group_profile(ds, submodel.residuals, label) for label in GROUP_LABELS}
    differences = {
        "variance": profiles[1].variance - profiles[0].variance,
        "skewness": profiles[1].skewness - profiles[0].skewness,
        "excess_kurtosis": profiles[1].excess_kurtosis - profiles[0].excess_kurtosis,
    }
    null_scenario = _is_null_scenario(profiles)

    report = SupermodelReport(
        submodel=submodel,
        residual_stage=stage,
        composed=composed,
        direct=direct,
        max_composition_delta=max_delta,
        relative_composition_delta=relative,
        equivalence=equivalence,
        profiles=profiles,
        separate_slopes=_separate_slopes(ds, submodel.residuals),
        null_scenario=null_scenario,
        moment_differences=differences,
    )
    logger.info(
        f"🧩 Супермодель: группа {composed[GROUP]:.6g} (t={report.composed_group_t:.3g}), "
        f"b0={stage.b0:.6g}, расхождение с прямой оценкой {max_delta:.3g}"
    )
    return report


def build_supermodel(ds: Dataset) -> SupermodelReport:
    """Подмодель, регрессия остатков и композиция за один вызов"""
    submodel = fit_submodel(ds)
    stage = fit_residual_stage(ds, submodel)
    return compose(submodel, stage, ds)


def prediction_improvement(ds: Dataset, report: SupermodelReport) -> Tuple[float, float]:
    """
    Суммы квадратов остатков подмодели и супермодели.

    Returns:
        (sse_sub, sse_super), sse_super <= sse_sub
    """
    _check_same_data(report.submodel.dataset_fingerprint, ds, "отчёт")
    residuals = report.residual_stage.stage_residuals
    return report.submodel.sse, float(residuals @ residuals)


@dataclass(frozen=True)
class StageVarianceReduction:
    """Var(e1 | s) против среднего по интервалам Var(e2 | интервал, s)"""

    marginal_var: float
    avg_conditional_var: float
    per_bin_var: Tuple[float, ...]


def stage_variance_reduction(ds: Dataset, report: SupermodelReport,
                             spec: BinningSpec) -> Dict[int, StageVarianceReduction]:
    """
    Условные дисперсии остатков супермодели по интервалам W_I в каждой группе.
    Поинтервальные значения только сообщаются; неравенство для среднего
    выполняется на данных генератора, но не гарантировано в общем случае.
    """
    _check_same_data(report.submodel.dataset_fingerprint, ds, "отчёт")
    assignment = assign_bins(ds, spec)
    eps1 = report.submodel.residuals
    eps2 = report.residual_stage.stage_residuals

    result = {}
    for label in GROUP_LABELS:
        mask = ds.group == label
        bins = assignment.indices[mask]
        e2 = eps2[mask]
        per_bin, weighted = [], 0.0
        for b in range(assignment.n_bins):
            in_bin = bins == b
            count = int(in_bin.sum())
            if count == 0:
                per_bin.append(math.nan)
                continue
            variance = float(e2[in_bin].var())
            per_bin.append(variance)
            weighted += count / mask.sum() * variance
        result[label] = StageVarianceReduction(
            marginal_var=float(eps1[mask].var()),
            avg_conditional_var=float(weighted),
            per_bin_var=tuple(per_bin),
        )
    return result
