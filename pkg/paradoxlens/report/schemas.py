"""
Pydantic-схемы JSON-отчётов.
Нечисловые значения (NaN, inf) записываются как null.
"""
import math
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1"


def num(value) -> Optional[float]:
    """float или None для NaN/inf"""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


class FitSchema(BaseModel):
    response: str = Field(description="Отклик модели")
    terms: List[str] = Field(description="Члены модели в порядке плана")
    coef: List[Optional[float]] = Field(description="Коэффициенты")
    se: List[Optional[float]] = Field(description="Стандартные ошибки (null при n = p)")
    t: List[Optional[float]] = Field(description="t-статистики")
    r2: float = Field(description="Коэффициент детерминации")
    resid_var: float = Field(description="Оценка дисперсии остатков SSE / (n - p)")
    n: int = Field(description="Число наблюдений")
    solver: str = Field(description="cholesky или qr")


class BinSchema(BaseModel):
    bin: int
    lower: float
    upper: float
    center: float
    n1: int = Field(description="Мальчиков в интервале")
    n0: int = Field(description="Девочек в интервале")
    mean_gain_1: Optional[float] = Field(description="Средний прирост мальчиков (null, если их нет)")
    mean_gain_0: Optional[float] = Field(description="Средний прирост девочек (null, если их нет)")
    f1: float
    f0: float
    f: float


class ConditionalEffectSchema(BaseModel):
    bin: int
    center: float
    difference: float = Field(description="Разность средних прироста в интервале")
    weight: float = Field(description="Вес интервала в A2")


class DecompositionSchema(BaseModel):
    a1: float = Field(description="Разность средних прироста групп")
    a1_t: Optional[float] = Field(description="t-статистика A1 из регрессии прироста на группу")
    a2: float = Field(description="Разность средних по подгруппам с общими весами f")
    confounding_effect: float = Field(description="A2 - A1")
    weight_divergence: float = Field(description="Расстояние полной вариации между f1 и f0")
    alpha: float = Field(description="Доля мальчиков")
    binning: str
    bins: List[BinSchema]
    excluded_bins: List[int] = Field(description="Интервалы, исключённые из A2: пустые, без одной из групп или с малой долей группы")
    thin_bins: List[int] = Field(default_factory=list, description="Интервалы с обеими группами, где доля группы ниже порога")
    min_group_ratio: float = Field(default=0.0, description="Порог min(f1_i, f0_i) / f_i для включения интервала в A2")
    a1_from_group_weights: float = Field(description="A1 через собственные веса групп")
    symmetric_half_sum: float = Field(description="Полусумма с весами (f1 + f0) / 2")
    mixture_gap: float = Field(description="max |f - (alpha f1 + (1 - alpha) f0)|")
    conditional_effects: List[ConditionalEffectSchema]


class StageSchema(BaseModel):
    a0: float
    a1: float
    b0: float
    b0_se: Optional[float]


class EquivalenceSchema(BaseModel):
    group_coef_final: float
    group_coef_gain: float
    group_delta: float
    w_initial_delta: float


class GroupProfileSchema(BaseModel):
    n: int
    mean_gain: float
    mean_gain_se: Optional[float]
    residual_gain_shift: float
    corr_with_w_initial: Optional[float]
    corr_t: Optional[float]
    variance: float
    skewness: Optional[float]
    excess_kurtosis: Optional[float]


class SeparateSlopesSchema(BaseModel):
    slope: Dict[str, Optional[float]]
    se: Dict[str, Optional[float]]
    gap: Optional[float]
    gap_se: Optional[float]


class VarianceReductionSchema(BaseModel):
    marginal_var: float
    avg_conditional_var: float
    reduced: bool
    mixture_mean: float


class StageVarianceSchema(BaseModel):
    marginal_var: float
    avg_conditional_var: float
    per_bin_var: List[Optional[float]]


class SupermodelSchema(BaseModel):
    submodel: FitSchema
    stage: StageSchema
    composed: Dict[str, float] = Field(description="Составные коэффициенты супермодели")
    composed_group_t: Optional[float]
    direct: FitSchema
    max_composition_delta: float
    relative_composition_delta: float
    equivalence: EquivalenceSchema
    groups: Dict[str, GroupProfileSchema]
    moment_differences: Dict[str, Optional[float]]
    separate_slopes: Optional[SeparateSlopesSchema]
    null_scenario: bool = Field(description="Средний прирост каждой группы неотличим от нуля")
    sse_sub: float
    sse_super: float
    variance_reduction: Dict[str, VarianceReductionSchema]
    stage_variance: Dict[str, StageVarianceSchema]


class StratumSchema(BaseModel):
    group: int
    bin: Optional[int]
    n: int
    skewness: Optional[float]
    symmetry_p: Optional[float]
    dip_statistic: Optional[float]
    dip_p: Optional[float]
    verdict: str


class DiagnosticsSchema(BaseModel):
    model: str
    verdict: str
    seed: int
    min_n: int
    alpha: float
    threshold: float = Field(description="Порог p-значений страты после поправки на множественность")
    correction: str
    bootstrap_draws: int
    dip_draws: int
    binning: str
    strata: List[StratumSchema]


class OverlapSchema(BaseModel):
    group_ranges: Dict[str, Tuple[float, float]]
    intersection: Optional[Tuple[float, float]]
    inside_fraction: Dict[str, float]
    extrapolation_required: bool
    partial: bool


class ReverseSchema(BaseModel):
    x: str
    y: str
    forward_slope: float
    reverse_slope: float
    slope_product: float
    r_squared: float


class ReportBundleSchema(BaseModel):
    """Полный отчёт analyze"""

    schema_version: str = SCHEMA_VERSION
    n: int
    group_counts: Dict[str, int]
    decomposition: DecompositionSchema
    supermodel: SupermodelSchema
    diagnostics: DiagnosticsSchema
    overlap: OverlapSchema
    reverse: Optional[ReverseSchema]
    narrative: str = ""


class MomentsSchema(BaseModel):
    mean: Optional[float]
    sd: Optional[float]
    se: Optional[float]


class StudySchema(BaseModel):
    """Сводка повторных симуляций"""

    schema_version: str = SCHEMA_VERSION
    reps: int
    seed: int
    rng: str
    truth: Dict[str, float]
    statistics: Dict[str, MomentsSchema]
