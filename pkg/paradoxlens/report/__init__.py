from .creator import (ReportBundle, ReportCreator, decomposition_schema,
                      diagnostics_schema, fit_schema, overlap_schema)
from .formatter import ReportFormatter, fmt
from .plot import render_plot
from .schemas import (DiagnosticsSchema, ReportBundleSchema, StudySchema)

__all__ = [
    "DiagnosticsSchema",
    "ReportBundle",
    "ReportBundleSchema",
    "ReportCreator",
    "ReportFormatter",
    "StudySchema",
    "decomposition_schema",
    "diagnostics_schema",
    "fit_schema",
    "fmt",
    "overlap_schema",
    "render_plot",
]
