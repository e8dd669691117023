"""
Именованные сценарии.
"""
import logging
from typing import Any, Dict

from paradoxlens.configs import config
from paradoxlens.core.errors import ScenarioConfigError

from .scenario import NoiseSpec, ScenarioConfig

logger = logging.getLogger(__name__)


def _lord_null() -> Dict[str, Any]:
    defaults = config.simulation
    return dict(
        n0=defaults.n_per_group,
        n1=defaults.n_per_group,
        mu0=defaults.mu0,
        mu1=defaults.mu1,
        sigma=defaults.sigma,
        rho=defaults.rho,
        gain0=0.0,
        gain1=0.0,
    )


def _gain() -> Dict[str, Any]:
    # Реальный прирост мальчиков на фоне регрессии к среднему
    return {**_lord_null(), "gain1": 2.0}


def _confounded() -> Dict[str, Any]:
    # Сильно разнесённые группы: узкое пересечение носителей W_I
    return {**_lord_null(), "mu0": 50.0, "mu1": 70.0, "sigma": 4.0, "rho": 0.5}


PRESETS = {
    "lord-null": _lord_null,
    "gain": _gain,
    "confounded": _confounded,
}


def preset_config(name: str, seed: int, **overrides: Any) -> ScenarioConfig:
    """
    Сценарий по имени с переопределёнными полями.

    Args:
        name: lord-null, gain или confounded
        seed: зерно
        overrides: поля ScenarioConfig (None пропускается), noise - NoiseSpec или строка
    """
    if name not in PRESETS:
        raise ScenarioConfigError("preset", f"неизвестный сценарий {name!r}, доступны: {', '.join(PRESETS)}")
    params = PRESETS[name]()
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "noise" and isinstance(value, str):
            value = NoiseSpec.parse(value)
        params[key] = value
    cfg = ScenarioConfig(seed=seed, **params)
    logger.debug(f"Сценарий {name}: {cfg}")
    return cfg
