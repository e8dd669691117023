"""
Конфигурация приложения.
Содержит все настройки, загружаемые из переменных окружения.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)
load_dotenv()

ENV_PREFIX = "PARADOXLENS_"


def _env(name: str, default: str) -> str:
    """Чтение переменной окружения с префиксом проекта"""
    return os.getenv(f"{ENV_PREFIX}{name}", default)


@dataclass
class AppConfig:
    """Основная конфигурация приложения"""

    # Пути - вычисляем от корня проекта
    base_dir: str = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    logs_dir: str = field(default_factory=lambda: _env("LOGS_DIR", os.path.join(
        os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))), "data", "logs")))

    # Настройки логирования
    log_level: str = field(default_factory=lambda: _env("LOG_LEVEL", "INFO"))
    log_to_file: bool = field(default_factory=lambda: _env("LOG_FILE", "FALSE").upper() == "TRUE")

    # Зерно по умолчанию, если не передан --seed
    default_seed: int = 20240601

    @property
    def env_seed(self) -> Optional[int]:
        """Зерно из PARADOXLENS_SEED (None, если не задано)"""
        raw = _env("SEED", "").strip()
        if not raw:
            return None
        try:
            return int(raw)
        except ValueError:
            logger.warning(f"Некорректное значение {ENV_PREFIX}SEED={raw!r}, игнорируем")
            return None

    def update_from_dict(self, updates: Dict[str, Any]) -> None:
        """Обновление полей из словаря"""
        for key, value in updates.items():
            if key == 'log_to_file' and isinstance(value, str):
                self.log_to_file = value.upper() == "TRUE"
            elif hasattr(self, key):
                setattr(self, key, value)
            else:
                logger.warning(f"Неизвестный ключ {key}:{value}")


@dataclass
class AnalysisConfig:
    """Численные допуски МНК и параметры разбиения"""

    # Порог обусловленности для перехода на QR с выбором ведущего столбца
    condition_limit: float = 1e8
    # Столбец считается коллинеарным, если |R_jj| < rank_tolerance * max|R_ii|
    rank_tolerance: float = 1e-10
    # Допуск совпадения составной и прямой моделей (относительный)
    composition_tolerance: float = 1e-8
    # |t| выше порога считается значимым
    significance_t: float = field(default_factory=lambda: float(_env("SIGNIFICANCE_T", "2.0")))
    # Правило по умолчанию: k = max(2, floor(sqrt(n)/2)), не меньше 5 наблюдений группы на интервал
    min_expected_per_group_bin: int = 5
    # Интервал входит в A2, если min(f1_i, f0_i) / f_i не ниже порога (0 - только наличие обеих групп)
    min_group_ratio: float = field(default_factory=lambda: float(_env("MIN_GROUP_RATIO", "0.2")))
    # Порог "нулевого сценария": |средний прирост| <= z * SE в каждой группе
    null_scenario_z: float = 3.0

    def update_from_dict(self, updates: Dict[str, Any]) -> None:
        """Обновление полей из словаря"""
        for key, value in updates.items():
            if hasattr(self, key):
                setattr(self, key, type(getattr(self, key))(value))
            else:
                logger.warning(f"Неизвестный ключ {key}:{value}")


@dataclass
class DiagnosticsConfig:
    """Настройки диагностики остатков"""

    min_n: int = field(default_factory=lambda: int(_env("MIN_N", "20")))
    alpha: float = field(default_factory=lambda: float(_env("ALPHA", "0.05")))
    bootstrap_draws: int = field(default_factory=lambda: int(_env("BOOTSTRAP_DRAWS", "2000")))
    dip_draws: int = field(default_factory=lambda: int(_env("DIP_DRAWS", "2000")))
    # Поправка на множественность по стратам: bonferroni или none
    correction: str = field(default_factory=lambda: _env("CORRECTION", "bonferroni"))
    # Число интервалов W_I для страт по умолчанию
    max_bins: int = field(default_factory=lambda: int(_env("DIAGNOSTIC_BINS", "4")))

    def update_from_dict(self, updates: Dict[str, Any]) -> None:
        """Обновление полей из словаря"""
        for key, value in updates.items():
            if hasattr(self, key):
                setattr(self, key, type(getattr(self, key))(value))
            else:
                logger.warning(f"Неизвестный ключ {key}:{value}")


@dataclass
class SimulationConfig:
    """Константы сценария по умолчанию (пресет lord-null)"""

    n_per_group: int = 2000
    mu0: float = 54.0
    mu1: float = 64.0
    sigma: float = 5.0
    rho: float = 0.7
    rng_algorithm: str = "PCG64"


class Config:
    """Главный класс конфигурации"""

    def __init__(self):
        self.app = AppConfig()
        self.analysis = AnalysisConfig()
        self.diagnostics = DiagnosticsConfig()
        self.simulation = SimulationConfig()

    def update_config(self, section: str, updates: Dict[str, Any]) -> bool:
        """Унифицированное обновление конфигурации"""
        if not isinstance(updates, dict):
            logger.warning(f"updates не является словарём: {type(updates)}")
            return False
        try:
            if section == 'app':
                self.app.update_from_dict(updates)
            elif section == 'analysis':
                self.analysis.update_from_dict(updates)
            elif section == 'diagnostics':
                self.diagnostics.update_from_dict(updates)
            else:
                logger.warning(f"Неизвестная секция конфигурации: {section}")
                return False
            return True
        except (TypeError, ValueError) as e:
            logger.error(f"Ошибка обновления конфигурации: {e}")
            return False

    def resolve_seed(self, seed: Optional[int] = None) -> int:
        """Зерно: явный аргумент, затем PARADOXLENS_SEED, затем значение по умолчанию"""
        if seed is not None:
            return int(seed)
        env_seed = self.app.env_seed
        if env_seed is not None:
            return env_seed
        return self.app.default_seed

    def reload_from_env(self) -> None:
        """Перезагрузка конфигурации из окружения"""
        self.app = AppConfig()
        self.analysis = AnalysisConfig()
        self.diagnostics = DiagnosticsConfig()
        self.simulation = SimulationConfig()


# Глобальный экземпляр конфигурации
config = Config()
