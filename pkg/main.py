"""
Точка входа paradoxlens.

Запуск:
    python main.py simulate --preset lord-null --seed 7 -o data.csv
    python main.py analyze data.csv --format json
    python main.py plot data.csv -o lord.svg
    python main.py diagnose data.csv --model ancova
"""
import os
import sys

# Получаем абсолютный путь к папке, где лежит main.py
project_root = os.path.dirname(os.path.abspath(__file__))

# Добавляем этот путь в список поиска модулей, если его там нет
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from paradoxlens.cli import run  # noqa: E402

if __name__ == "__main__":
    sys.exit(run())
