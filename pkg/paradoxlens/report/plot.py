"""
Диаграмма (W_I, W_F) по группам: облака точек, линии регрессии внутри групп,
диагональ W_F = W_I и средние групп. SVG без даты и со стабильными id.
"""
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from paradoxlens.core.models import GROUP_LABELS, Dataset  # noqa: E402
from paradoxlens.ols.design import INTERCEPT, DesignSpec  # noqa: E402
from paradoxlens.ols.solver import fit  # noqa: E402

logger = logging.getLogger(__name__)

WITHIN_GROUP = DesignSpec(response="w_final", terms=(INTERCEPT, "w_initial"))

STYLE = {
    0: {"label": "девочки", "color": "#d62728", "marker": "o"},
    1: {"label": "мальчики", "color": "#1f77b4", "marker": "s"},
}


def render_plot(ds: Dataset, path: str | Path, title: str = "W_F против W_I по группам") -> Path:
    """
    Запись SVG-диаграммы.

    Raises:
        DataValidationError: одна из групп пуста
    """
    ds.require_both_groups()
    path = Path(path)

    rc = {"svg.hashsalt": "paradoxlens", "svg.fonttype": "none"}
    with plt.rc_context(rc):
        fig, ax = plt.subplots(figsize=(7, 6))
        lo = float(min(ds.w_initial.min(), ds.w_final.min()))
        hi = float(max(ds.w_initial.max(), ds.w_final.max()))

        for label in GROUP_LABELS:
            style = STYLE[label]
            subset = ds.take(ds.group == label)
            ax.scatter(subset.w_initial, subset.w_final, s=8, alpha=0.35, color=style["color"],
                       marker=style["marker"], label=f"{style['label']} (n={subset.n})", gid=f"points-{label}")

            x_lo, x_hi = float(subset.w_initial.min()), float(subset.w_initial.max())
            if subset.n >= 3 and x_hi > x_lo:
                line = fit(subset, WITHIN_GROUP)
                a, b = line.coef(INTERCEPT), line.coef("w_initial")
                ax.plot([x_lo, x_hi], [a + b * x_lo, a + b * x_hi], color=style["color"], linewidth=2,
                        label=f"регрессия: {style['label']}, наклон {b:.3f}", gid=f"regression-{label}")
            else:
                logger.warning(f"⚠️  Линия регрессии для группы {label} не строится")

            ax.plot([subset.w_initial.mean()], [subset.w_final.mean()], marker="X", markersize=12,
                    color=style["color"], markeredgecolor="black", linestyle="none",
                    label=f"среднее: {style['label']}", gid=f"mean-{label}")

        ax.plot([lo, hi], [lo, hi], color="gray", linestyle="--", linewidth=1, label="W_F = W_I", gid="identity")
        ax.set_xlabel("Начальное измерение W_I")
        ax.set_ylabel("Конечное измерение W_F")
        ax.set_title(title)
        ax.legend(loc="upper left", fontsize=8)
        ax.set_aspect("equal", adjustable="datalim")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

    logger.info(f"💾 Диаграмма сохранена: {path}")
    return path
