from .dip import dip_statistic, uniform_null_dips, unimodality_test
from .residuals import (CORRECTIONS, INSUFFICIENT, SUPPORTS, VIOLATES, DiagnosticsReport,
                        StratumDiagnostics, VarianceReduction,
                        residual_diagnostics, variance_reduction_check)
from .symmetry import symmetry_test

__all__ = [
    "CORRECTIONS",
    "DiagnosticsReport",
    "INSUFFICIENT",
    "SUPPORTS",
    "StratumDiagnostics",
    "VIOLATES",
    "VarianceReduction",
    "dip_statistic",
    "residual_diagnostics",
    "symmetry_test",
    "uniform_null_dips",
    "unimodality_test",
    "variance_reduction_check",
]
