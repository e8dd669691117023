"""
Сборка отчёта: разложение A1/A2, супермодель, диагностика, перекрытие носителей
и текстовое изложение двух прочтений одних данных.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from paradoxlens.configs import config
from paradoxlens.core.errors import DegenerateRegressionError, NoOverlapError
from paradoxlens.core.models import BinningSpec, Dataset
from paradoxlens.core.overlap import OverlapReport, support_overlap
from paradoxlens.decomposition import Decomposition, compute_a2, conditional_effect_curve
from paradoxlens.diagnostics import (DiagnosticsReport, VarianceReduction,
                                     residual_diagnostics, variance_reduction_check)
from paradoxlens.ols.design import GAIN_ON_GROUP, GROUP
from paradoxlens.ols.reverse import ReverseFitReport, reverse_fit
from paradoxlens.ols.solver import FitResult, fit
from paradoxlens.supermodel import (StageVarianceReduction, SupermodelReport,
                                    build_supermodel, prediction_improvement,
                                    stage_variance_reduction)

from .formatter import ReportFormatter
from .schemas import (BinSchema, ConditionalEffectSchema, DecompositionSchema,
                      DiagnosticsSchema, EquivalenceSchema, FitSchema,
                      GroupProfileSchema, OverlapSchema, ReportBundleSchema,
                      ReverseSchema, SeparateSlopesSchema, StageSchema,
                      StageVarianceSchema, StratumSchema, SupermodelSchema,
                      VarianceReductionSchema, num)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReportBundle:
    """Все результаты analyze и текст, построенный только из их полей"""

    decomposition: Decomposition
    supermodel: SupermodelReport
    diagnostics: DiagnosticsReport
    overlap: OverlapReport
    reverse: Optional[ReverseFitReport]
    variance_reduction: Dict[int, VarianceReduction]
    stage_variance: Dict[int, StageVarianceReduction]
    prediction: Tuple[float, float]
    a1_fit: FitResult
    group_counts: Dict[int, int]
    narrative: str
    schema: ReportBundleSchema


def fit_schema(result: FitResult) -> FitSchema:
    return FitSchema(
        response=result.spec.response,
        terms=list(result.terms),
        coef=[num(v) for v in result.coefficients],
        se=[num(v) for v in result.standard_errors],
        t=[num(v) for v in result.t_statistics],
        r2=result.r_squared,
        resid_var=result.residual_variance,
        n=result.n,
        solver=result.solver,
    )


def decomposition_schema(decomposition: Decomposition, a1_fit: FitResult,
                         curve) -> DecompositionSchema:
    table = decomposition.table
    bins = [
        BinSchema(
            bin=i,
            lower=float(table.edges[i]),
            upper=float(table.edges[i + 1]),
            center=float(table.centers[i]),
            n1=int(table.n1[i]),
            n0=int(table.n0[i]),
            mean_gain_1=num(table.mean_gain_1[i]),
            mean_gain_0=num(table.mean_gain_0[i]),
            f1=float(table.f1[i]),
            f0=float(table.f0[i]),
            f=float(table.f[i]),
        )
        for i in range(table.n_bins)
    ]
    return DecompositionSchema(
        a1=decomposition.a1,
        a1_t=num(a1_fit.t(GROUP)),
        a2=decomposition.a2,
        confounding_effect=decomposition.confounding_effect,
        weight_divergence=decomposition.weight_divergence,
        alpha=decomposition.alpha,
        binning=decomposition.binning.describe(),
        bins=bins,
        excluded_bins=list(decomposition.excluded_bins),
        thin_bins=list(decomposition.thin_bins),
        min_group_ratio=table.min_group_ratio,
        a1_from_group_weights=decomposition.a1_from_group_weights,
        symmetric_half_sum=decomposition.symmetric_half_sum,
        mixture_gap=table.mixture_gap(),
        conditional_effects=[
            ConditionalEffectSchema(bin=c.bin, center=c.center, difference=c.difference, weight=c.weight)
            for c in curve
        ],
    )


def supermodel_schema(report: SupermodelReport, prediction: Tuple[float, float],
                      variance_reduction: Dict[int, VarianceReduction],
                      stage_variance: Dict[int, StageVarianceReduction]) -> SupermodelSchema:
    stage = report.residual_stage
    slopes = report.separate_slopes
    return SupermodelSchema(
        submodel=fit_schema(report.submodel),
        stage=StageSchema(a0=stage.a0, a1=stage.a1, b0=stage.b0, b0_se=num(stage.b0_se)),
        composed=dict(report.composed),
        composed_group_t=num(report.composed_group_t),
        direct=fit_schema(report.direct),
        max_composition_delta=report.max_composition_delta,
        relative_composition_delta=report.relative_composition_delta,
        equivalence=EquivalenceSchema(**vars(report.equivalence)),
        groups={
            str(label): GroupProfileSchema(**{k: num(v) if isinstance(v, float) else v
                                              for k, v in vars(profile).items()})
            for label, profile in report.profiles.items()
        },
        moment_differences={k: num(v) for k, v in report.moment_differences.items()},
        separate_slopes=None if slopes is None else SeparateSlopesSchema(
            slope={str(k): num(v) for k, v in slopes.slope.items()},
            se={str(k): num(v) for k, v in slopes.se.items()},
            gap=num(slopes.gap),
            gap_se=num(slopes.gap_se),
        ),
        null_scenario=report.null_scenario,
        sse_sub=prediction[0],
        sse_super=prediction[1],
        variance_reduction={str(k): VarianceReductionSchema(**vars(v)) for k, v in variance_reduction.items()},
        stage_variance={
            str(k): StageVarianceSchema(
                marginal_var=v.marginal_var,
                avg_conditional_var=v.avg_conditional_var,
                per_bin_var=[num(x) for x in v.per_bin_var],
            )
            for k, v in stage_variance.items()
        },
    )


def diagnostics_schema(report: DiagnosticsReport) -> DiagnosticsSchema:
    return DiagnosticsSchema(
        model=report.model,
        verdict=report.verdict,
        seed=report.seed,
        min_n=report.min_n,
        alpha=report.alpha,
        threshold=report.threshold,
        correction=report.correction,
        bootstrap_draws=report.bootstrap_draws,
        dip_draws=report.dip_draws,
        binning=report.binning,
        strata=[StratumSchema(**vars(s)) for s in report.strata],
    )


def overlap_schema(report: OverlapReport) -> OverlapSchema:
    return OverlapSchema(
        group_ranges={str(k): v for k, v in report.group_ranges.items()},
        intersection=report.intersection,
        inside_fraction={str(k): v for k, v in report.inside_fraction.items()},
        extrapolation_required=report.extrapolation_required,
        partial=report.partial,
    )


def reverse_schema(report: ReverseFitReport) -> ReverseSchema:
    return ReverseSchema(
        x=report.x,
        y=report.y,
        forward_slope=report.forward_slope,
        reverse_slope=report.reverse_slope,
        slope_product=report.slope_product,
        r_squared=report.r_squared,
    )


class ReportCreator:
    """Основной класс для сборки отчёта analyze"""

    def __init__(self):
        self.formatter = ReportFormatter()

    def create(self, ds: Dataset, spec: BinningSpec, seed: int, *,
               min_n: Optional[int] = None,
               alpha: Optional[float] = None,
               bootstrap_draws: Optional[int] = None,
               dip_draws: Optional[int] = None,
               correction: Optional[str] = None,
               diagnostic_spec: Optional[BinningSpec] = None) -> ReportBundle:
        """
        Полный анализ набора данных

        Args:
            ds: набор данных с обеими группами
            spec: разбиение W_I
            seed: зерно процедур Монте-Карло
            diagnostic_spec: разбиение для диагностики остатков
                (по умолчанию BinningSpec.diagnostic_for с config.diagnostics.max_bins)
            correction: поправка порога страт (по умолчанию config.diagnostics.correction)

        Raises:
            NoOverlapError: носители W_I не пересекаются или нет общих интервалов
        """
        logger.info(f"🛠️  Анализ {ds.n} наблюдений, разбиение {spec.describe()}")
        ds.require_both_groups()

        overlap = support_overlap(ds)
        if overlap.extrapolation_required:
            raise NoOverlapError(
                f"носители W_I групп не пересекаются {overlap.group_ranges}: "
                f"сравнение при равном W_I требует экстраполяции"
            )

        # 1. Два статистика
        decomposition = compute_a2(ds, spec)
        curve = conditional_effect_curve(ds, spec)
        a1_fit = fit(ds, GAIN_ON_GROUP)

        # 2. Подмодель -> супермодель
        supermodel = build_supermodel(ds)
        prediction = prediction_improvement(ds, supermodel)
        variance_reduction = variance_reduction_check(ds, supermodel.submodel, spec)
        stage_variance = stage_variance_reduction(ds, supermodel, spec)

        # 3. Условия прочтения коэффициента как эффекта
        if diagnostic_spec is None:
            diagnostic_spec = BinningSpec.diagnostic_for(
                ds, config.analysis.min_expected_per_group_bin, config.diagnostics.max_bins
            )
        diagnostics = residual_diagnostics(
            ds, supermodel.direct, diagnostic_spec, seed=seed, min_n=min_n, alpha=alpha,
            bootstrap_draws=bootstrap_draws, dip_draws=dip_draws, correction=correction,
        )

        try:
            reverse = reverse_fit(ds, "w_final", "w_initial")
        except DegenerateRegressionError as e:
            logger.warning(f"⚠️  Обратная регрессия пропущена: {e}")
            reverse = None

        counts = ds.group_counts
        schema = ReportBundleSchema(
            n=ds.n,
            group_counts={str(k): v for k, v in counts.items()},
            decomposition=decomposition_schema(decomposition, a1_fit, curve),
            supermodel=supermodel_schema(supermodel, prediction, variance_reduction, stage_variance),
            diagnostics=diagnostics_schema(diagnostics),
            overlap=overlap_schema(overlap),
            reverse=None if reverse is None else reverse_schema(reverse),
        )
        narrative = self.formatter.format_narrative(schema)
        schema = schema.model_copy(update={"narrative": narrative})

        logger.info(f"✅ Отчёт готов: A1={decomposition.a1:.4g}, A2={decomposition.a2:.4g}, "
                    f"диагностика: {diagnostics.verdict}")
        return ReportBundle(
            decomposition=decomposition,
            supermodel=supermodel,
            diagnostics=diagnostics,
            overlap=overlap,
            reverse=reverse,
            variance_reduction=variance_reduction,
            stage_variance=stage_variance,
            prediction=prediction,
            a1_fit=a1_fit,
            group_counts=counts,
            narrative=narrative,
            schema=schema,
        )
