import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from .config import config

BASE_LOGGER = "paradoxlens"


def setup_logging(level: str | None = None) -> logging.Logger:
    """Настройка логирования для приложения"""

    # Формат логов
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    date_format = "%Y-%m-%d %H:%M:%S"

    # Базовый логгер, все модули пакета - его потомки
    logger = logging.getLogger(BASE_LOGGER)

    # Устанавливаем уровень логирования
    level_name = (level or config.app.log_level).upper()
    log_level = getattr(logging, level_name, logging.INFO)
    logger.setLevel(log_level)
    logger.propagate = False

    # Удаляем существующие обработчики
    logger.handlers.clear()

    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("matplotlib.font_manager").setLevel(logging.WARNING)

    # Консольный обработчик: stderr, stdout занят отчётами
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(log_format, date_format))
    console_handler.setLevel(log_level)
    logger.addHandler(console_handler)

    if config.app.log_to_file:
        # --- Файловый обработчик с кастомной ротацией ---
        os.makedirs(config.app.logs_dir, exist_ok=True)
        log_file = os.path.join(config.app.logs_dir, "paradoxlens.log")

        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding="utf-8"
        )

        # Превращаем name.log.1 -> name_1.log
        def custom_namer(default_name):
            base, ext, num = default_name.rsplit('.', 2)
            return f"{base}_{num}.log"

        file_handler.namer = custom_namer
        file_handler.setFormatter(logging.Formatter(log_format, date_format))
        file_handler.setLevel(log_level)
        logger.addHandler(file_handler)
        logger.debug(f"Логи будут сохранены в: {config.app.logs_dir}")

    logger.debug(f"Уровень логирования: {level_name}")
    return logger
