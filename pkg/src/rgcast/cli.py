"""Command-line front door: forecast, backtest, and sequences commands.

Configuration comes from flags, optionally seeded by a key=value config
file (flags win). Date labels resolve by exact match only; silently
snapping to a nearby date would corrupt a backtest.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backtest import backtest, default_anchor_range
from .figures import render_report_figures
from .interpolation import InterpolationError
from .reporting import (
    format_level,
    indicator_table_blocks,
    render_delimited,
    render_text_table,
    write_report_bundle,
)
from .scenarios import (
    DEFAULT_HORIZONS,
    DEFAULT_K_VALUES,
    GridSpec,
    fixed_dimension_average,
    most_probable_scenario,
    run_grid,
    scenario_weights,
    weighted_forecast,
)
from .series import BUILTIN_SEQUENCES, SeriesError, TimeSeries, builtin_sequence, load_series

_CONFIG_KEYS = (
    "input",
    "date-col",
    "value-col",
    "delimiter",
    "k",
    "sequences",
    "horizons",
    "anchor",
    "from",
    "to",
    "out-dir",
    "format",
    "workers",
)


def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for line_number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SeriesError(f"{path}:{line_number}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise SeriesError(f"{path}:{line_number}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _merge_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    config = _read_config(args.config)
    for key, value in config.items():
        attr = {"from": "from_label", "to": "to_label"}.get(key, key.replace("-", "_"))
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _column_spec(value: str | None, default: int | str | None) -> int | str | None:
    if value is None:
        return default
    if value.lower() in ("none", ""):
        return None
    return value


def _parse_grid(args: argparse.Namespace) -> GridSpec:
    k_values = (
        tuple(int(tok) for tok in args.k.split(",")) if args.k else DEFAULT_K_VALUES
    )
    names = args.sequences.split(",") if args.sequences else list(BUILTIN_SEQUENCES)
    sequences = tuple(builtin_sequence(name.strip()) for name in names)
    horizons = (
        tuple(float(tok) for tok in args.horizons.split(","))
        if args.horizons
        else DEFAULT_HORIZONS
    )
    return GridSpec(k_values=k_values, sequences=sequences, horizons=horizons)


def _load(args: argparse.Namespace) -> TimeSeries:
    if not args.input:
        raise SeriesError("no input file given (--input)")
    return load_series(
        args.input,
        value_col=_column_spec(args.value_col, None),
        date_col=_column_spec(args.date_col, "auto"),
        delimiter=args.delimiter or ",",
    )


def _emit(title: str, headers: list[str], rows: list[list[str]], fmt: str) -> None:
    if fmt == "delimited":
        print(f"# {title}")
        print(render_delimited(headers, rows), end="")
    else:
        print(title)
        print(render_text_table(headers, rows), end="")
    print()


def _format_value(value: float) -> str:
    return f"{value:.6g}"


def cmd_forecast(args: argparse.Namespace) -> int:
    series = _load(args)
    grid = _parse_grid(args)
    anchor_arg = args.anchor or "latest"
    anchor = len(series) - 1 if anchor_arg == "latest" else series.index_of_label(anchor_arg)
    fmt = args.format or "plain"

    scenarios = run_grid(series, anchor, grid)
    print(
        f"anchor {series.labels[anchor]} (index {anchor}), value {_format_value(series[anchor])}"
    )
    print()

    rows = [
        [
            str(s.k),
            s.sequence,
            format_level(s.horizon),
            _format_value(s.value) if s.ok else "NA",
            s.error or "ok",
        ]
        for s in scenarios
    ]
    _emit("scenario forecasts", ["k", "sequence", "horizon", "forecast", "status"], rows, fmt)

    average_rows = []
    for dimension, levels in (
        ("k", grid.k_values),
        ("sequence", grid.sequence_names),
        ("horizon", grid.horizons),
    ):
        for level in levels:
            n_cells = sum(1 for s in scenarios if s.ok and getattr(s, dimension) == level)
            try:
                avg = _format_value(fixed_dimension_average(scenarios, dimension, level))
            except ValueError:
                avg = "NA"
            average_rows.append([dimension, format_level(level), avg, str(n_cells)])
    _emit("fixed-dimension averages", ["dimension", "level", "average", "cells"], average_rows, fmt)

    for t in grid.horizons:
        title = f"entropy weights, horizon {format_level(t)}"
        try:
            weights = scenario_weights(series, anchor, grid.restrict_horizon(t))
        except ValueError as exc:
            _emit(title, ["note"], [[str(exc)]], fmt)
            continue
        weight_rows = [
            [
                str(k),
                name,
                f"{weights.multipliers[(k, name)]:.6g}",
                f"{weights.entries[(k, name)]:.6f}",
            ]
            for (k, name) in weights.entries
        ]
        _emit(title, ["k", "sequence", "multiplier", "weight"], weight_rows, fmt)
        best_k, best_seq = most_probable_scenario(weights)
        combined = weighted_forecast(scenarios, weights)
        print(f"  most probable scenario: k={best_k}, sequence {best_seq}")
        print(f"  weighted forecast: {_format_value(combined)}")
        if weights.excluded:
            print(f"  excluded cells: {len(weights.excluded)}")
        print()
    return 0


def cmd_backtest(args: argparse.Namespace) -> int:
    series = _load(args)
    grid = _parse_grid(args)
    fmt = args.format or "plain"
    default_start, default_end = default_anchor_range(series, grid)
    start = series.index_of_label(args.from_label) if args.from_label else default_start
    end = series.index_of_label(args.to_label) if args.to_label else default_end
    workers = int(args.workers) if args.workers else 1

    report = backtest(series, grid, start, end, workers=workers)
    out_dir = Path(args.out_dir or "reports")
    written = write_report_bundle(report, out_dir)
    if not args.no_figures:
        written += render_report_figures(report, out_dir)

    for dimension, rows in indicator_table_blocks(report):
        _emit(
            f"indicators by {dimension}",
            [dimension, "MAPE", "OKAPE", "%TrendOK"],
            rows,
            fmt,
        )
    print(f"backtested {len(report.days)} days, anchors {start}..{end}")
    for path in written:
        print(f"wrote {path}")
    missing = [path for path in written if not path.is_file()]
    return 1 if missing else 0


def cmd_sequences(args: argparse.Namespace) -> int:
    rows = [
        [name, ", ".join(str(o) for o in offsets)]
        for name, offsets in BUILTIN_SEQUENCES.items()
    ]
    _emit("built-in sequences", ["name", "offsets"], rows, args.format or "plain")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="delimited input file with a header row")
    parser.add_argument("--date-col", help="date column name or position ('none' to disable)")
    parser.add_argument("--value-col", help="value column name or position")
    parser.add_argument("--delimiter", help="input field delimiter (default ',')")
    parser.add_argument("--config", help="key = value config file; flags win")
    parser.add_argument("--k", help="comma-separated fit orders (default 3,4,5,6)")
    parser.add_argument("--sequences", help="comma-separated sequence names (default A,B,C)")
    parser.add_argument("--horizons", help="comma-separated horizons in (0,1] (default 0.1,0.3,0.5,0.7,1)")
    parser.add_argument("--format", choices=("plain", "delimited"), help="stdout table format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rgcast",
        description="Self-similar renormalization-group forecasting over scenario grids.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_forecast = commands.add_parser("forecast", help="forecast one anchor day over the grid")
    _add_common(p_forecast)
    p_forecast.add_argument("--anchor", help="anchor date label or 'latest' (default)")
    p_forecast.set_defaults(handler=cmd_forecast)

    p_backtest = commands.add_parser("backtest", help="rolling one-step backtest with reports")
    _add_common(p_backtest)
    p_backtest.add_argument("--from", dest="from_label", help="first anchor date label")
    p_backtest.add_argument("--to", dest="to_label", help="last anchor date label")
    p_backtest.add_argument("--out-dir", help="report output directory (default ./reports)")
    p_backtest.add_argument("--workers", help="parallel day evaluators (default 1)")
    p_backtest.add_argument(
        "--no-figures", action="store_true", help="skip rendering figures"
    )
    p_backtest.set_defaults(handler=cmd_backtest)

    p_sequences = commands.add_parser("sequences", help="print built-in sequence definitions")
    p_sequences.add_argument("--format", choices=("plain", "delimited"))
    p_sequences.set_defaults(handler=cmd_sequences)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _merge_config(args)
        return args.handler(args)
    except (SeriesError, InterpolationError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
