"""
Текстовое оформление отчётов.
Все числа в тексте берутся из полей схем и форматируются одной функцией,
поэтому текст и JSON совпадают.
"""
import logging
from typing import List, Optional

from paradoxlens.configs import config

from .schemas import (DecompositionSchema, DiagnosticsSchema, ReportBundleSchema,
                      StudySchema)

logger = logging.getLogger(__name__)

ROUNDING_NOTE = "Числа в тексте округлены до 4 знаков (t - до 2), точные значения в JSON-отчёте."


def fmt(value: Optional[float], digits: int = 4) -> str:
    """Число с фиксированной точкой; null -> 'н/д'"""
    if value is None:
        return "н/д"
    return f"{value:.{digits}f}"


def fmt_small(value: Optional[float]) -> str:
    """Малые величины (расхождения) в экспоненциальной записи"""
    if value is None:
        return "н/д"
    return f"{value:.2e}"


class ReportFormatter:
    """Класс для форматирования отчётов в текст"""

    def __init__(self):
        self.verdict_labels = {
            "supports_effect_reading": "✅ остатки симметричны и унимодальны, коэффициенты можно читать как эффекты",
            "violates": "❌ условия нарушены, чтение коэффициентов как эффектов не обосновано",
            "insufficient_n": "⚠️  страты слишком малы для вывода",
        }
        self.short_verdicts = {
            "supports_effect_reading": "ок",
            "violates": "нарушено",
            "insufficient_n": "мало n",
        }
        self.group_names = {0: "девочки", 1: "мальчики"}

    def _significant(self, t: Optional[float]) -> bool:
        return t is not None and abs(t) > config.analysis.significance_t

    def format_narrative(self, report: ReportBundleSchema) -> str:
        """
        Два прочтения одних данных и их примирение.

        Args:
            report: отчёт без текста

        Returns:
            Текст, каждое число которого взято из полей report
        """
        d = report.decomposition
        s = report.supermodel
        group_coef = s.composed["group_indicator"]
        lines: List[str] = []

        lines.append(
            f"📐 Данные: n = {report.n} (мальчики {report.group_counts['1']}, "
            f"девочки {report.group_counts['0']}), разбиение W_I: {d.binning}."
        )
        lines.append(f"ℹ️  {ROUNDING_NOTE}")

        # Первый статистик
        if self._significant(d.a1_t):
            reading_1 = "средние приросты групп различаются."
        else:
            reading_1 = "средний прирост у групп одинаков, эффекта пола нет."
        lines.append(
            f"👩‍🔬 Первый статистик: разность средних приростов A1 = {fmt(d.a1)} "
            f"(t = {fmt(d.a1_t, 2)}): {reading_1}"
        )

        # Второй статистик
        if self._significant(s.composed_group_t):
            direction = "больше" if group_coef > 0 else "меньше"
            reading_2 = f"при равном начальном весе мальчики прибавляют {direction}, чем девочки."
        else:
            reading_2 = "при равном начальном весе различие не значимо."
        lines.append(
            f"👨‍🔬 Второй статистик: коэффициент пола при учёте W_I = {fmt(group_coef)} "
            f"(t = {fmt(s.composed_group_t, 2)}), взвешенная разность по подгруппам A2 = {fmt(d.a2)}: {reading_2}"
        )

        lines.append(
            f"🔗 Эффект смешивания A2 - A1 = {fmt(d.confounding_effect)}; "
            f"расхождение весов подгрупп f1 и f0 (полная вариация) = {fmt(d.weight_divergence)}."
        )

        lines.append(
            f"🧩 Супермодель: разность средних W_F = {fmt(s.submodel.coef[1])}, "
            f"остатки подмодели зависят от W_I с общим наклоном b0 = {fmt(s.stage.b0)}; "
            f"составной коэффициент пола {fmt(group_coef)} совпадает с прямой оценкой "
            f"(расхождение {fmt_small(s.max_composition_delta)}). "
            f"SSE: {fmt(s.sse_sub)} -> {fmt(s.sse_super)}."
        )

        lines.append(
            "💡 Оба вывода верны, но отвечают на разные вопросы: A1 описывает различие "
            "групп в целом, коэффициент при учёте W_I описывает различие при равном "
            "начальном весе (прогноз, а не причинный эффект, если W_I не единственный конфаундер)."
        )

        if s.null_scenario:
            lines.append("📌 Средний прирост каждой группы неотличим от нуля (сценарий Лорда).")

        if d.excluded_bins:
            lines.append(
                f"⚠️  Интервалы исключены из A2: {d.excluded_bins} "
                f"(пустые, без одной из групп или с долей группы ниже {d.min_group_ratio:g} от её доли в выборке)."
            )
        o = report.overlap
        if o.partial and o.intersection is not None:
            lines.append(
                f"⚠️  Часть наблюдений вне общего носителя W_I [{fmt(o.intersection[0], 2)}, "
                f"{fmt(o.intersection[1], 2)}]: доля внутри у девочек {fmt(o.inside_fraction['0'], 3)}, "
                f"у мальчиков {fmt(o.inside_fraction['1'], 3)}."
            )

        lines.append(f"🔍 Диагностика остатков ({report.diagnostics.model}): "
                     f"{self.verdict_labels[report.diagnostics.verdict]}.")
        return "\n".join(lines)

    def format_bins_table(self, d: DecompositionSchema) -> str:
        """Таблица подгрупп"""
        header = f"{'#':>3} {'интервал W_I':>21} {'n1':>6} {'n0':>6} {'D1':>9} {'D0':>9} {'f1':>7} {'f0':>7} {'f':>7}"
        rows = [header, "-" * len(header)]
        for b in d.bins:
            mark = " *" if b.bin in d.excluded_bins else ""
            rows.append(
                f"{b.bin:>3} [{fmt(b.lower, 2):>8}, {fmt(b.upper, 2):>8}] {b.n1:>6} {b.n0:>6} "
                f"{fmt(b.mean_gain_1, 3):>9} {fmt(b.mean_gain_0, 3):>9} "
                f"{fmt(b.f1, 3):>7} {fmt(b.f0, 3):>7} {fmt(b.f, 3):>7}{mark}"
            )
        if d.excluded_bins:
            rows.append("* исключён из A2")
        return "\n".join(rows)

    def format_diagnostics_table(self, diag: DiagnosticsSchema) -> str:
        """Таблица страт диагностики"""
        header = f"{'группа':<9} {'интервал':>8} {'n':>6} {'skew':>8} {'p_sym':>7} {'dip':>8} {'p_dip':>7}  вердикт"
        rows = [
            f"🔍 {diag.model}, seed={diag.seed}, min_n={diag.min_n}, alpha={diag.alpha}, "
            f"порог страты {diag.threshold:.3g} ({diag.correction})",
            header,
            "-" * len(header),
        ]
        for st in diag.strata:
            rows.append(
                f"{self.group_names[st.group]:<9} {'все' if st.bin is None else st.bin:>8} {st.n:>6} "
                f"{fmt(st.skewness, 3):>8} {fmt(st.symmetry_p, 3):>7} {fmt(st.dip_statistic, 4):>8} "
                f"{fmt(st.dip_p, 3):>7}  {self.short_verdicts[st.verdict]}"
            )
        rows.append(f"Итог: {self.verdict_labels[diag.verdict]}")
        return "\n".join(rows)

    def format_report_text(self, report: ReportBundleSchema) -> str:
        """Текст analyze: изложение и таблицы"""
        parts = [
            report.narrative,
            "",
            "📊 Подгруппы по W_I",
            self.format_bins_table(report.decomposition),
            "",
            self.format_diagnostics_table(report.diagnostics),
        ]
        if report.reverse is not None:
            r = report.reverse
            parts += [
                "",
                f"↔️  {r.y} ~ {r.x}: наклон {fmt(r.forward_slope)}; {r.x} ~ {r.y}: наклон {fmt(r.reverse_slope)}; "
                f"произведение {fmt(r.slope_product)} = r^2 {fmt(r.r_squared)}",
            ]
        return "\n".join(parts) + "\n"

    def format_study(self, study: StudySchema) -> str:
        """Сводка повторных симуляций"""
        rows = [f"🎲 Реплик: {study.reps}, seed={study.seed}, генератор {study.rng}",
                f"{'величина':<20} {'среднее':>10} {'sd':>10} {'se':>10}"]
        for name, m in study.statistics.items():
            rows.append(f"{name:<20} {fmt(m.mean):>10} {fmt(m.sd):>10} {fmt(m.se):>10}")
        rows.append("Истинные значения: " + ", ".join(f"{k}={fmt(v)}" for k, v in study.truth.items()))
        return "\n".join(rows) + "\n"
