"""Render backtest report figures to image files next to the delimited bundle."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .backtest import BacktestReport, indicator_tables, win_rate_table
from .reporting import format_level

FIGURE_DIR = "figures"
FIGURE_FILES = ("predictions.png", "indicators.png", "win_rates.png")

_DPI = 120
_METRIC_LABELS = (("mape", "MAPE"), ("okape", "OKAPE"), ("trend_ok", "%TrendOK"))


def render_report_figures(report: BacktestReport, out_dir: str | Path) -> list[Path]:
    """Write predictions overlay, indicator bars, and win-rate bars as PNGs."""
    out = Path(out_dir) / FIGURE_DIR
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / name for name in FIGURE_FILES]
    _render_predictions(report, paths[0])
    _render_indicators(report, paths[1])
    _render_win_rates(report, paths[2])
    return paths


def _render_predictions(report: BacktestReport, path: Path) -> None:
    anchors = [day.anchor_index for day in report.days]
    actual = [day.actual_next for day in report.days]
    predicted = [
        day.predicted if day.predicted is not None else float("nan") for day in report.days
    ]
    fig, ax = plt.subplots(figsize=(9, 4.5), dpi=_DPI)
    ax.plot(anchors, actual, color="0.25", lw=1.2, label="next close")
    ax.plot(anchors, predicted, color="tab:blue", lw=1.0, label="ensemble forecast")
    # Axis follows the realized series; blown-up scenario days clip out of view.
    spread = max(actual) - min(actual)
    pad = 0.08 * spread if spread > 0.0 else 0.05 * max(actual)
    ax.set_ylim(min(actual) - pad, max(actual) + pad)
    ax.set_xlabel("anchor index")
    ax.set_ylabel("value")
    ax.set_title(f"One-step forecasts, anchors {report.start}..{report.end}")
    ax.legend(loc="best")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _render_indicators(report: BacktestReport, path: Path) -> None:
    rows = indicator_tables(report)
    dimensions = ("k", "sequence", "horizon")
    fig, axes = plt.subplots(3, 3, figsize=(10, 8), dpi=_DPI)
    for row_idx, dimension in enumerate(dimensions):
        dim_rows = [r for r in rows if r.dimension == dimension]
        labels = [format_level(r.level) for r in dim_rows]
        for col_idx, (attr, label) in enumerate(_METRIC_LABELS):
            ax = axes[row_idx][col_idx]
            values = [getattr(r, attr) if getattr(r, attr) is not None else 0.0 for r in dim_rows]
            ax.bar(range(len(values)), values, color="tab:blue", width=0.6)
            ax.set_xticks(range(len(labels)))
            ax.set_xticklabels(labels)
            if row_idx == 0:
                ax.set_title(label)
            if col_idx == 0:
                ax.set_ylabel(dimension)
            ax.grid(axis="y", alpha=0.3)
    fig.suptitle("Indicators by fixed input")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _render_win_rates(report: BacktestReport, path: Path) -> None:
    wins = win_rate_table(report)
    dimensions = ("k", "sequence", "horizon")
    fig, axes = plt.subplots(1, 3, figsize=(10, 3.5), dpi=_DPI)
    for ax, dimension in zip(axes, dimensions):
        keys = [key for key in wins.percents if key[0] == dimension]
        labels = [format_level(level) for _, level in keys]
        values = [wins.percents[key] for key in keys]
        ax.bar(range(len(values)), values, color="tab:orange", width=0.6)
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels)
        ax.set_title(dimension)
        ax.set_ylabel("% of days best")
        ax.grid(axis="y", alpha=0.3)
    fig.suptitle(f"Winning input levels over {wins.n_days} days")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
