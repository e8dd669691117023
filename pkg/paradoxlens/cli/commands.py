"""
Подкоманды CLI и коды выхода.

Библиотека только выбрасывает исключения; здесь они превращаются в коды:
0 - успех, 1 - ввод/вывод и загрузка, 2 - использование,
3 - нет перекрытия групп, 4 - диагностика нарушена.
"""
import argparse
import logging
import sys
from dataclasses import asdict
from typing import Callable, Dict, Optional, Sequence

from paradoxlens.configs import config
from paradoxlens.configs.logging_config import setup_logging
from paradoxlens.core.dataset_io import load_csv
from paradoxlens.core.errors import (CoverageError, DataValidationError,
                                     NoOverlapError, ParadoxLensError,
                                     ScenarioConfigError)
from paradoxlens.core.models import BinningSpec, ColumnSchema, Dataset
from paradoxlens.diagnostics import INSUFFICIENT, VIOLATES, residual_diagnostics
from paradoxlens.diagnostics.dip import MIN_POINTS
from paradoxlens.ols.design import ANCOVA_FINAL, ANCOVA_GAIN, GAIN_ON_GROUP, SUBMODEL
from paradoxlens.ols.solver import fit
from paradoxlens.report import ReportCreator, ReportFormatter, diagnostics_schema, render_plot
from paradoxlens.report.schemas import MomentsSchema, StudySchema, num
from paradoxlens.simulate import generate, preset_config, replicate_study, save_scenario

from .parser import build_parser

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NO_OVERLAP = 3
EXIT_VIOLATES = 4

SCENARIO_FIELDS = ("n0", "n1", "mu0", "mu1", "sigma", "rho", "gain0", "gain1", "noise")


class UsageError(ParadoxLensError):
    """Некорректная комбинация флагов"""


class LoadError(ParadoxLensError):
    """Входной файл не читается или не проходит проверку"""


def _emit(text: str, output: Optional[str]) -> None:
    """Результат в файл или в stdout"""
    if not text.endswith("\n"):
        text += "\n"
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info(f"💾 Результат сохранён в {output}")
    else:
        sys.stdout.write(text)


def _load(args: argparse.Namespace) -> Dataset:
    schema = ColumnSchema(
        subject_id=args.col_id,
        group=args.col_group,
        w_initial=args.col_initial,
        w_final=args.col_final,
    )
    try:
        return load_csv(args.input, schema)
    except (OSError, UnicodeDecodeError, ValueError) as e:
        # DataValidationError тоже ValueError
        raise LoadError(f"не удалось загрузить {args.input}: {e}") from e


def binning_from_args(args: argparse.Namespace, ds: Dataset) -> BinningSpec:
    """Разбиение из --bins/--bin-strategy; по умолчанию - квантильное правило"""
    default = BinningSpec.default_for(ds, config.analysis.min_expected_per_group_bin)
    strategy, edges = args.bin_strategy or ("quantile", None)
    try:
        if strategy == "explicit":
            return BinningSpec.explicit(edges)
        k = args.bins if args.bins is not None else default.k
        return BinningSpec(strategy=strategy, k=k)
    except DataValidationError as e:
        raise UsageError(str(e)) from e


def diagnostic_binning_from_args(args: argparse.Namespace, ds: Dataset) -> BinningSpec:
    """Явные --bins/--bin-strategy действуют и на диагностику; иначе более грубое разбиение"""
    if args.bins is not None or args.bin_strategy is not None:
        return binning_from_args(args, ds)
    return BinningSpec.diagnostic_for(ds, config.analysis.min_expected_per_group_bin, config.diagnostics.max_bins)


def _diagnostic_options(args: argparse.Namespace) -> Dict[str, Optional[int | float | str]]:
    if args.alpha is not None and not 0.0 < args.alpha < 1.0:
        raise UsageError(f"--alpha должно лежать в (0, 1), получено {args.alpha}")
    if args.min_n is not None and args.min_n < MIN_POINTS:
        raise UsageError(f"--min-n должно быть >= {MIN_POINTS}, получено {args.min_n}")
    return {
        "min_n": args.min_n,
        "alpha": args.alpha,
        "bootstrap_draws": args.mc_draws,
        "dip_draws": args.mc_draws,
        "correction": args.correction,
    }


def _scenario(args: argparse.Namespace, seed: int):
    overrides = {name: getattr(args, name) for name in SCENARIO_FIELDS}
    try:
        return preset_config(args.preset, seed, **overrides)
    except ScenarioConfigError as e:
        raise UsageError(f"некорректный параметр сценария {e}") from e


def cmd_simulate(args: argparse.Namespace) -> int:
    """CSV по сценарию и JSON-спутник рядом с ним"""
    if not args.output:
        raise UsageError("simulate требует -o/--output")
    seed = config.resolve_seed(args.seed)
    cfg = _scenario(args, seed)
    ds, truth = generate(cfg)
    save_scenario(ds, cfg, truth, args.output)
    return EXIT_OK


def cmd_study(args: argparse.Namespace) -> int:
    """Сводка оценок по репликам сценария"""
    seed = config.resolve_seed(args.seed)
    cfg = _scenario(args, seed)
    summary = replicate_study(cfg, args.reps, workers=args.workers)
    schema = StudySchema(
        reps=summary.reps,
        seed=summary.seed,
        rng=summary.rng,
        truth=asdict(summary.truth),
        statistics={name: MomentsSchema(mean=num(m.mean), sd=num(m.sd), se=num(m.se))
                    for name, m in summary.statistics.items()},
    )
    if args.format == "json":
        _emit(schema.model_dump_json(indent=2), args.output)
    else:
        _emit(ReportFormatter().format_study(schema), args.output)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    """Разложение, супермодель, диагностика и текст"""
    options = _diagnostic_options(args)
    ds = _load(args)
    spec = binning_from_args(args, ds)
    seed = config.resolve_seed(args.seed)

    diagnostic_spec = diagnostic_binning_from_args(args, ds)
    bundle = ReportCreator().create(ds, spec, seed, diagnostic_spec=diagnostic_spec, **options)
    if args.format == "json":
        _emit(bundle.schema.model_dump_json(indent=2), args.output)
    else:
        _emit(ReportFormatter().format_report_text(bundle.schema), args.output)
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    """SVG-диаграмма (W_I, W_F)"""
    if not args.output:
        raise UsageError("plot требует -o/--output")
    ds = _load(args)
    ds.require_both_groups()
    render_plot(ds, args.output, title=args.title)
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    """Диагностика остатков; код 4 при нарушении"""
    options = _diagnostic_options(args)
    ds = _load(args)
    ds.require_both_groups()
    spec = diagnostic_binning_from_args(args, ds)
    seed = config.resolve_seed(args.seed)

    if args.model == "submodel":
        design = SUBMODEL if args.response == "w_final" else GAIN_ON_GROUP
    else:
        design = ANCOVA_FINAL if args.response == "w_final" else ANCOVA_GAIN
    report = residual_diagnostics(ds, fit(ds, design), spec, seed=seed, **options)
    schema = diagnostics_schema(report)

    if args.format == "json":
        _emit(schema.model_dump_json(indent=2), args.output)
    else:
        _emit(ReportFormatter().format_diagnostics_table(schema), args.output)

    if report.verdict == INSUFFICIENT:
        print(f"⚠️  Все страты меньше min_n={report.min_n}: вердикт не выносится", file=sys.stderr)
    return EXIT_VIOLATES if report.verdict == VIOLATES else EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "study": cmd_study,
    "analyze": cmd_analyze,
    "plot": cmd_plot,
    "diagnose": cmd_diagnose,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа CLI, возвращает код выхода"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logging("DEBUG" if args.verbose else None)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CoverageError) as e:
        logger.error(f"❌ {e}")
        print(f"ошибка использования: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NoOverlapError as e:
        logger.error(f"❌ {e}")
        print(f"⚠️  Нет перекрытия групп по W_I, сравнение требует экстраполяции: {e}", file=sys.stderr)
        return EXIT_NO_OVERLAP
    except (LoadError, OSError, ParadoxLensError) as e:
        logger.error(f"❌ {e}")
        print(f"ошибка: {e}", file=sys.stderr)
        return EXIT_IO
