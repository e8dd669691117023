"""
Разбор аргументов командной строки.
"""
import argparse
from typing import Optional, Tuple

from paradoxlens import __version__
from paradoxlens.diagnostics import CORRECTIONS
from paradoxlens.simulate.presets import PRESETS

MAX_SEED = 2 ** 64 - 1


def seed_value(text: str) -> int:
    """Зерно: целое в [0, 2^64)"""
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"зерно должно быть целым, получено {text!r}")
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError(f"зерно должно лежать в [0, 2^64), получено {value}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"нужно целое число, получено {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"нужно целое >= 1, получено {value}")
    return value


def bin_strategy(text: str) -> Tuple[str, Optional[Tuple[float, ...]]]:
    """width | quantile | edges:<e0>,<e1>,..."""
    if text == "width":
        return "fixed_width", None
    if text == "quantile":
        return "quantile", None
    if text.startswith("edges:"):
        try:
            edges = tuple(float(e) for e in text[len("edges:"):].split(",") if e.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"некорректный список границ: {text!r}")
        if len(edges) < 2:
            raise argparse.ArgumentTypeError("нужно не менее двух границ интервалов")
        return "explicit", edges
    raise argparse.ArgumentTypeError(f"стратегия должна быть width, quantile или edges:<список>, получено {text!r}")


def _shared_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("-o", "--output", help="Файл результата (по умолчанию stdout)")
    parent.add_argument("--seed", type=seed_value, help="Зерно (иначе PARADOXLENS_SEED)")
    parent.add_argument("--format", choices=("json", "text"), default="text", help="Формат вывода")
    parent.add_argument("-v", "--verbose", action="store_true", help="Подробное логирование")
    return parent


def _input_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("input", help="CSV с данными")
    parent.add_argument("--col-id", default="id", help="Столбец идентификатора")
    parent.add_argument("--col-group", default="sex", help="Столбец группы (0/1)")
    parent.add_argument("--col-initial", default="w_initial", help="Столбец начального измерения")
    parent.add_argument("--col-final", default="w_final", help="Столбец конечного измерения")
    return parent


def _analysis_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--bins", type=positive_int, help="Число интервалов W_I")
    parent.add_argument("--bin-strategy", type=bin_strategy, default=None,
                        help="width, quantile или edges:<e0>,<e1>,...")
    parent.add_argument("--min-n", type=positive_int, help="Минимальный размер страты")
    parent.add_argument("--alpha", type=float,
                        help="Уровень диагностики; порог страты alpha / (2 * число страт) при поправке bonferroni")
    parent.add_argument("--correction", choices=CORRECTIONS, default=None,
                        help="Поправка на число страт: bonferroni (по умолчанию, PARADOXLENS_CORRECTION) "
                             "или none (порог страты равен alpha)")
    parent.add_argument("--mc-draws", type=positive_int, help="Число выборок Монте-Карло (бутстреп и dip)")
    return parent


def _scenario_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--preset", choices=tuple(PRESETS), default="lord-null", help="Базовый сценарий")
    parent.add_argument("--n0", type=int, help="Число девочек")
    parent.add_argument("--n1", type=int, help="Число мальчиков")
    parent.add_argument("--mu0", type=float, help="Среднее W_I девочек")
    parent.add_argument("--mu1", type=float, help="Среднее W_I мальчиков")
    parent.add_argument("--sigma", type=float, help="sd W_I внутри группы")
    parent.add_argument("--rho", type=float, help="Коэффициент регрессии к среднему, [-1, 1]")
    parent.add_argument("--gain0", type=float, help="Истинный прирост девочек")
    parent.add_argument("--gain1", type=float, help="Истинный прирост мальчиков")
    parent.add_argument("--noise", help="gaussian, laplace или mixture[:<separation>[:<weight>]]")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Парсер с подкомандами simulate, study, analyze, plot, diagnose"""
    parser = argparse.ArgumentParser(
        prog="paradoxlens",
        description="Парадокс Лорда: две разности средних, супермодель и диагностика остатков",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    shared = _shared_parent()
    source = _input_parent()
    analysis = _analysis_parent()
    scenario = _scenario_parent()
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("simulate", parents=[shared, scenario],
                        help="Сгенерировать CSV и JSON-спутник сценария")

    study = commands.add_parser("study", parents=[shared, scenario], help="Повторные симуляции и сводка оценок")
    study.add_argument("--reps", type=positive_int, default=100, help="Число реплик")
    study.add_argument("--workers", type=positive_int, default=1, help="Число потоков")

    commands.add_parser("analyze", parents=[shared, source, analysis], help="Полный отчёт по CSV")

    plot = commands.add_parser("plot", parents=[shared, source], help="SVG-диаграмма W_F против W_I")
    plot.add_argument("--title", default="W_F против W_I по группам", help="Заголовок диаграммы")

    diagnose = commands.add_parser("diagnose", parents=[shared, source, analysis], help="Диагностика остатков модели")
    diagnose.add_argument("--model", choices=("submodel", "ancova"), default="ancova",
                          help="Модель: отклик ~ 1 + S или отклик ~ 1 + S + W_I")
    diagnose.add_argument("--response", choices=("w_final", "gain"), default="w_final", help="Отклик модели")
    return parser
