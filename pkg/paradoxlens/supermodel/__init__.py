from .composer import (GainFinalEquivalence, GroupResidualProfile,
                       ResidualStageFit, SeparateSlopes, StageVarianceReduction,
                       SupermodelReport, build_supermodel, compose,
                       fit_residual_stage, fit_submodel, prediction_improvement,
                       stage_variance_reduction)

__all__ = [
    "GainFinalEquivalence",
    "GroupResidualProfile",
    "ResidualStageFit",
    "SeparateSlopes",
    "StageVarianceReduction",
    "SupermodelReport",
    "build_supermodel",
    "compose",
    "fit_residual_stage",
    "fit_submodel",
    "prediction_improvement",
    "stage_variance_reduction",
]
