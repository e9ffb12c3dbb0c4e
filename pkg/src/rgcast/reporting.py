"""Delimited report bundles and fixed-width text tables for backtests.

The bundle is five comma-separated files: the stacked indicator tables
(per-k, per-sequence, per-horizon), the per-cell combination table, the
win-rate table, the per-day per-cell prediction log, and the per-day
averaged predictions. Indicator percentages are written to one decimal and
MAPE to three; the per-day logs keep full precision so every table can be
recomputed from them.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .backtest import (
    BacktestReport,
    combination_table,
    indicator_tables,
    win_rate_table,
)

INDICATORS_FILE = "indicators.csv"
COMBINATIONS_FILE = "combinations.csv"
WIN_RATES_FILE = "win_rates.csv"
DAY_LOG_FILE = "day_log.csv"
DAY_AVERAGES_FILE = "day_averages.csv"

BUNDLE_FILES = (
    INDICATORS_FILE,
    COMBINATIONS_FILE,
    WIN_RATES_FILE,
    DAY_LOG_FILE,
    DAY_AVERAGES_FILE,
)


def format_level(level: int | str | float) -> str:
    if isinstance(level, float):
        return f"{level:g}"
    return str(level)


def format_mape(value: float | None) -> str:
    if value is None:
        return "NA"
    # Blown-up scenario days can push MAPE far beyond table-sized decimals.
    return f"{value:.3f}" if value < 1e6 else f"{value:.3e}"


def format_percent(value: float | None) -> str:
    return "NA" if value is None else f"{value:.1f}"


def format_full(value: float | None) -> str:
    return "NA" if value is None else repr(value)


def render_text_table(headers: list[str], rows: list[list[str]]) -> str:
    """Right-aligned fixed-width table, one string with trailing newline."""
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def render_delimited(headers: list[str], rows: list[list[str]], delimiter: str = ",") -> str:
    lines = [delimiter.join(headers)]
    lines.extend(delimiter.join(row) for row in rows)
    return "\n".join(lines) + "\n"


def indicator_table_blocks(report: BacktestReport) -> list[tuple[str, list[list[str]]]]:
    """The three indicator tables as (level header, formatted rows) blocks."""
    rows = indicator_tables(report)
    blocks = []
    for dimension in ("k", "sequence", "horizon"):
        block = [
            [
                format_level(row.level),
                format_mape(row.mape),
                format_percent(row.okape),
                format_percent(row.trend_ok),
            ]
            for row in rows
            if row.dimension == dimension
        ]
        blocks.append((dimension, block))
    return blocks


def _write_rows(path: Path, headers: list[str], rows: list[list[str]]) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(headers)
        writer.writerows(rows)


def write_report_bundle(report: BacktestReport, out_dir: str | Path) -> list[Path]:
    """Write the five-file delimited bundle into out_dir; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = report.grid

    indicator_rows = [
        [
            row.dimension,
            format_level(row.level),
            format_mape(row.mape),
            format_percent(row.okape),
            format_percent(row.trend_ok),
            str(row.n_days),
            str(row.trend_excluded),
        ]
        for row in indicator_tables(report)
    ]
    _write_rows(
        out / INDICATORS_FILE,
        ["dimension", "level", "mape", "okape", "trend_ok", "n_days", "trend_excluded"],
        indicator_rows,
    )

    combination_rows = [
        [
            str(row.k),
            row.sequence,
            format_level(row.horizon),
            format_mape(row.mape),
            format_percent(row.okape),
            format_percent(row.trend_ok),
            str(row.n_days),
            str(row.trend_excluded),
        ]
        for row in combination_table(report)
    ]
    _write_rows(
        out / COMBINATIONS_FILE,
        ["k", "sequence", "horizon", "mape", "okape", "trend_ok", "n_days", "trend_excluded"],
        combination_rows,
    )

    wins = win_rate_table(report)
    win_rows = [
        [dimension, format_level(level), str(wins.counts[(dimension, level)]),
         format_percent(wins.percents[(dimension, level)])]
        for dimension, level in wins.counts
    ]
    _write_rows(out / WIN_RATES_FILE, ["dimension", "level", "wins", "percent"], win_rows)

    log_rows = []
    for day in report.days:
        for cell in day.cells:
            log_rows.append(
                [
                    day.anchor_label,
                    str(day.anchor_index),
                    str(cell.k),
                    cell.sequence,
                    format_level(cell.horizon),
                    format_full(cell.forecast.value) if cell.ok else "NA",
                    cell.error or "ok",
                ]
            )
    _write_rows(
        out / DAY_LOG_FILE,
        ["anchor_label", "anchor_index", "k", "sequence", "horizon", "prediction", "status"],
        log_rows,
    )

    level_keys = (
        [("k", k) for k in grid.k_values]
        + [("sequence", name) for name in grid.sequence_names]
        + [("horizon", t) for t in grid.horizons]
    )
    average_headers = ["anchor_label", "anchor_index", "previous", "actual_next", "ensemble"] + [
        f"{dimension}={format_level(level)}" for dimension, level in level_keys
    ]
    average_rows = []
    for day in report.days:
        row = [
            day.anchor_label,
            str(day.anchor_index),
            format_full(day.previous),
            format_full(day.actual_next),
            format_full(day.predicted),
        ]
        row.extend(format_full(day.averages[key]) for key in level_keys)
        average_rows.append(row)
    _write_rows(out / DAY_AVERAGES_FILE, average_headers, average_rows)

    return [out / name for name in BUNDLE_FILES]
