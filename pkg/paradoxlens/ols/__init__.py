from .design import (ANCOVA_FINAL, ANCOVA_GAIN, GAIN_ON_GROUP, GROUP, GROUP0,
                     GROUP1, INTERCEPT, RESIDUAL_STAGE, SUBMODEL, DesignSpec,
                     design_matrix)
from .reverse import ReverseFitReport, reverse_fit
from .solver import FitResult, fit, fit_response, predict

__all__ = [
    "ANCOVA_FINAL",
    "ANCOVA_GAIN",
    "DesignSpec",
    "FitResult",
    "GAIN_ON_GROUP",
    "GROUP",
    "GROUP0",
    "GROUP1",
    "INTERCEPT",
    "RESIDUAL_STAGE",
    "ReverseFitReport",
    "SUBMODEL",
    "design_matrix",
    "fit",
    "fit_response",
    "predict",
    "reverse_fit",
]
