from .binning import BinAssignment, assign_bins
from .dataset_io import load_csv, save_csv
from .errors import (ConsistencyError, CoverageError, DataValidationError,
                     DegenerateRegressionError, DegenerateSampleError,
                     DegreesOfFreedomError, InsufficientDataError,
                     NoOverlapError, ParadoxLensError, RowParseError,
                     ScenarioConfigError, SchemaError, SingularDesignError)
from .models import BinningSpec, ColumnSchema, Dataset, Observation
from .overlap import OverlapReport, support_overlap

__all__ = [
    "BinAssignment",
    "BinningSpec",
    "ColumnSchema",
    "ConsistencyError",
    "CoverageError",
    "DataValidationError",
    "Dataset",
    "DegenerateRegressionError",
    "DegenerateSampleError",
    "DegreesOfFreedomError",
    "InsufficientDataError",
    "NoOverlapError",
    "Observation",
    "OverlapReport",
    "ParadoxLensError",
    "RowParseError",
    "ScenarioConfigError",
    "SchemaError",
    "SingularDesignError",
    "assign_bins",
    "load_csv",
    "save_csv",
    "support_overlap",
]
