"""Rolling-forward one-step backtests and forecast-accuracy indicators.

Every anchor day in the range gets the full scenario grid refit from data
up to and including the anchor (rolling-forward training: nothing at or
beyond anchor+1 enters a prediction), and is scored against the next
close. Indicators:

* MAPE      mean of 100*|pred - actual| / actual;
* OKAPE     percent of days whose absolute percentage error is smaller
            than the realized one-day move 100*|actual - prev| / prev;
* %TrendOK  percent of non-flat days where the predicted direction of
            change matches the realized direction (flat days are excluded
            from the denominator and counted separately).

Indicator tables pin one input (k, sequence, or horizon) and score the
per-day mean over the free inputs; the combination table scores each grid
cell's own stream; the win-rate table counts, per day, which cell had the
smallest absolute percentage error and credits its three input levels.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .scenarios import ForecastScenario, GridSpec, fixed_dimension_average, run_grid
from .series import TimeSeries

DimensionLevel = tuple[str, int | str | float]


@dataclass(frozen=True)
class DayOutcome:
    """All predictions for one anchor day, scored against the next close."""

    anchor_index: int
    anchor_label: str
    previous: float
    actual_next: float
    predicted: float | None
    cells: tuple[ForecastScenario, ...]
    averages: dict[DimensionLevel, float | None]


@dataclass(frozen=True)
class IndicatorRow:
    dimension: str
    level: int | str | float
    mape: float | None
    okape: float | None
    trend_ok: float | None
    n_days: int
    trend_excluded: int


@dataclass(frozen=True)
class CombinationRow:
    k: int
    sequence: str
    horizon: float
    mape: float | None
    okape: float | None
    trend_ok: float | None
    n_days: int
    trend_excluded: int


@dataclass(frozen=True)
class WinRateTable:
    """Percent of days each input level belonged to the winning cell."""

    counts: dict[DimensionLevel, int]
    percents: dict[DimensionLevel, float]
    n_days: int


@dataclass(frozen=True)
class BacktestReport:
    grid: GridSpec
    start: int
    end: int
    days: tuple[DayOutcome, ...]


def mape(predictions: list[float], actuals: list[float]) -> float:
    """Mean absolute percentage error, in percent."""
    if len(predictions) != len(actuals):
        raise ValueError(f"length mismatch: {len(predictions)} vs {len(actuals)}")
    if not predictions:
        raise ValueError("mape of an empty stream")
    for actual in actuals:
        if not actual > 0.0:
            raise ValueError(f"actuals must be positive, got {actual}")
    return math.fsum(
        100.0 * abs(p - a) / a for p, a in zip(predictions, actuals)
    ) / len(predictions)


def okape(predictions: list[float], actuals: list[float], previous: list[float]) -> float:
    """Percent of days whose APE beats the realized one-day percentage move."""
    if not len(predictions) == len(actuals) == len(previous):
        raise ValueError("okape streams must have equal lengths")
    if not predictions:
        raise ValueError("okape of an empty stream")
    ok = 0
    for pred, actual, prev in zip(predictions, actuals, previous):
        ape = 100.0 * abs(pred - actual) / actual
        volatility = 100.0 * abs(actual - prev) / prev
        if ape < volatility:
            ok += 1
    return 100.0 * ok / len(predictions)


def trend_ok(predictions: list[float], actuals: list[float], previous: list[float]) -> float | None:
    """Percent of non-flat days with the predicted direction of change correct.

    Returns None when every day is flat (direction undefined).
    """
    if not len(predictions) == len(actuals) == len(previous):
        raise ValueError("trend streams must have equal lengths")
    ok = 0
    included = 0
    for pred, actual, prev in zip(predictions, actuals, previous):
        realized = actual - prev
        if realized == 0.0:
            continue
        included += 1
        if math.copysign(1.0, realized) == math.copysign(1.0, pred - prev) and pred != prev:
            ok += 1
    if included == 0:
        return None
    return 100.0 * ok / included


def default_anchor_range(series: TimeSeries, grid: GridSpec) -> tuple[int, int]:
    """Earliest anchor supporting the full grid, and the last with a next close."""
    start = grid.max_depth
    end = len(series) - 2
    if start > end:
        raise ValueError(
            f"series of length {len(series)} too short for grid depth {grid.max_depth}"
        )
    return start, end


def backtest(
    series: TimeSeries,
    grid: GridSpec,
    start: int,
    end: int,
    workers: int = 1,
) -> BacktestReport:
    """Run the grid at every anchor in [start, end] and score the next close.

    Days are independent; with workers > 1 they are evaluated concurrently
    and reassembled in anchor order, so reports are identical regardless of
    worker count.
    """
    if start > end:
        raise ValueError(f"empty backtest range [{start}, {end}]")
    if start < 0 or end > len(series) - 2:
        raise ValueError(
            f"range [{start}, {end}] needs anchors with a next value in a series of length {len(series)}"
        )

    levels: list[DimensionLevel] = (
        [("k", k) for k in grid.k_values]
        + [("sequence", name) for name in grid.sequence_names]
        + [("horizon", t) for t in grid.horizons]
    )

    def run_day(anchor: int) -> DayOutcome:
        scenarios = run_grid(series, anchor, grid)
        valid = [s.value for s in scenarios if s.ok]
        predicted = math.fsum(valid) / len(valid) if valid else None
        averages: dict[DimensionLevel, float | None] = {}
        for dimension, level in levels:
            try:
                averages[(dimension, level)] = fixed_dimension_average(scenarios, dimension, level)
            except ValueError:
                averages[(dimension, level)] = None
        return DayOutcome(
            anchor_index=anchor,
            anchor_label=series.labels[anchor],
            previous=series[anchor],
            actual_next=series[anchor + 1],
            predicted=predicted,
            cells=tuple(scenarios),
            averages=averages,
        )

    anchors = range(start, end + 1)
    if workers <= 1:
        days = [run_day(anchor) for anchor in anchors]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            days = list(pool.map(run_day, anchors))
    return BacktestReport(grid=grid, start=start, end=end, days=tuple(days))


def _score_stream(
    stream: list[tuple[float, float, float]],
) -> tuple[float | None, float | None, float | None, int, int]:
    """Indicators plus day/exclusion counts for (pred, actual, prev) triples."""
    if not stream:
        return None, None, None, 0, 0
    preds = [s[0] for s in stream]
    actuals = [s[1] for s in stream]
    prevs = [s[2] for s in stream]
    flat = sum(1 for a, p in zip(actuals, prevs) if a == p)
    return (
        mape(preds, actuals),
        okape(preds, actuals, prevs),
        trend_ok(preds, actuals, prevs),
        len(stream),
        flat,
    )


def indicator_tables(report: BacktestReport) -> list[IndicatorRow]:
    """Per-k, per-sequence, and per-horizon indicator rows, in that order.

    Each level is scored on its fixed-dimension-averaged prediction stream;
    days where every cell of the level errored drop out of that stream.
    """
    grid = report.grid
    levels: list[DimensionLevel] = (
        [("k", k) for k in grid.k_values]
        + [("sequence", name) for name in grid.sequence_names]
        + [("horizon", t) for t in grid.horizons]
    )
    rows = []
    for dimension, level in levels:
        stream = [
            (day.averages[(dimension, level)], day.actual_next, day.previous)
            for day in report.days
            if day.averages[(dimension, level)] is not None
        ]
        m, o, tr, n, flat = _score_stream(stream)
        rows.append(IndicatorRow(dimension, level, m, o, tr, n, flat))
    return rows


def combination_table(report: BacktestReport) -> list[CombinationRow]:
    """One indicator row per grid cell, scored on that cell's own stream."""
    streams: dict[tuple[int, str, float], list[tuple[float, float, float]]] = {
        (k, name, t): []
        for k in report.grid.k_values
        for name in report.grid.sequence_names
        for t in report.grid.horizons
    }
    for day in report.days:
        for cell in day.cells:
            if cell.ok:
                streams[(cell.k, cell.sequence, cell.horizon)].append(
                    (cell.value, day.actual_next, day.previous)
                )
    rows = []
    for (k, name, t), stream in streams.items():
        m, o, tr, n, flat = _score_stream(stream)
        rows.append(CombinationRow(k, name, t, m, o, tr, n, flat))
    return rows


def win_rate_table(report: BacktestReport) -> WinRateTable:
    """Percent of days each input level belonged to the minimum-APE cell.

    Ties go to the first cell in grid order; days without a single valid
    cell do not count.
    """
    grid = report.grid
    counts: dict[DimensionLevel, int] = {}
    for k in grid.k_values:
        counts[("k", k)] = 0
    for name in grid.sequence_names:
        counts[("sequence", name)] = 0
    for t in grid.horizons:
        counts[("horizon", t)] = 0

    n_days = 0
    for day in report.days:
        winner: ForecastScenario | None = None
        winner_ape = math.inf
        for cell in day.cells:
            if not cell.ok:
                continue
            ape = abs(cell.value - day.actual_next) / day.actual_next
            if ape < winner_ape:
                winner, winner_ape = cell, ape
        if winner is None:
            continue
        n_days += 1
        counts[("k", winner.k)] += 1
        counts[("sequence", winner.sequence)] += 1
        counts[("horizon", winner.horizon)] += 1

    if n_days == 0:
        raise ValueError("win rates need at least one day with a valid cell")
    percents = {key: 100.0 * count / n_days for key, count in counts.items()}
    return WinRateTable(counts=counts, percents=percents, n_days=n_days)
