from .presets import PRESETS, preset_config
from .scenario import (NoiseSpec, ScenarioConfig, ScenarioSidecar,
                       ScenarioTruth, generate, save_scenario, sidecar_path)
from .study import (Moments, ReplicateStats, StudySummary, replicate_seed,
                    replicate_study, run_replicate)

__all__ = [
    "Moments",
    "NoiseSpec",
    "PRESETS",
    "ReplicateStats",
    "ScenarioConfig",
    "ScenarioSidecar",
    "ScenarioTruth",
    "StudySummary",
    "generate",
    "preset_config",
    "replicate_seed",
    "replicate_study",
    "run_replicate",
    "save_scenario",
    "sidecar_path",
]
