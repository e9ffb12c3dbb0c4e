"""Scenario grid enumeration, fixed-dimension averages, and entropy weights.

One scenario is one (order k, sequence, horizon) input combination; the
default grid is k in {3..6} x sequences {A,B,C} x horizons
{0.1, 0.3, 0.5, 0.7, 1}, i.e. 60 forecasts per anchor day. Two combination
schemes are provided:

* fixed-dimension averages: pin one input, average the forecasts over the
  other two (15, 20, or 12 cells under the default grid);
* dynamical-entropy weights: per order k, weight each sequence j by the
  reciprocal of its multiplier m_k(j) = |df_k(j)| / |df_1(j)|, where
  df_k = f_k* - f_{k-1}* is the increment between successive-order
  forecasts (df_1 compares against the anchor value itself). Small
  increments mean a converged flow, hence high weight. The weights are
  normalized per k; the weighted forecast renormalizes across orders so it
  stays a convex combination of the participating forecasts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .extrapolation import (
    STATUS_DIVERGED,
    Forecast,
    ZeroCoefficientError,
    forecast,
)
from .interpolation import fit
from .series import HistoryError, SequenceSpec, TimeSeries, builtin_sequence, past_history

DEFAULT_K_VALUES = (3, 4, 5, 6)
DEFAULT_HORIZONS = (0.1, 0.3, 0.5, 0.7, 1.0)
DEFAULT_SEQUENCES = tuple(builtin_sequence(name) for name in ("A", "B", "C"))

# Error tags carried by excluded cells.
ERR_INSUFFICIENT_HISTORY = "insufficient_history"
ERR_ZERO_COEFFICIENT = "zero_coefficient"
ERR_DIVERGED = "diverged"

WEIGHT_NORMALIZATION_TOLERANCE = 1e-12

Cell = tuple[int, str]  # (k, sequence name) within one horizon


@dataclass(frozen=True)
class GridSpec:
    """The input grid: fit orders, offset sequences, and horizons."""

    k_values: tuple[int, ...] = DEFAULT_K_VALUES
    sequences: tuple[SequenceSpec, ...] = DEFAULT_SEQUENCES
    horizons: tuple[float, ...] = DEFAULT_HORIZONS

    def __post_init__(self) -> None:
        if not self.k_values or not self.sequences or not self.horizons:
            raise ValueError("grid requires at least one k, sequence, and horizon")
        if len(set(self.k_values)) != len(self.k_values):
            raise ValueError("duplicate k values in grid")
        names = [seq.name for seq in self.sequences]
        if len(set(names)) != len(names):
            raise ValueError("duplicate sequence names in grid")
        if len(set(self.horizons)) != len(self.horizons):
            raise ValueError("duplicate horizons in grid")
        for k in self.k_values:
            if k < 1:
                raise ValueError(f"fit order k must be >= 1, got {k}")
            for seq in self.sequences:
                if k > seq.max_order:
                    raise ValueError(
                        f"k={k} exceeds max order {seq.max_order} of sequence {seq.name}"
                    )
        for t in self.horizons:
            if not 0.0 < t <= 1.0:
                raise ValueError(f"horizon must lie in (0, 1], got {t}")

    @property
    def size(self) -> int:
        return len(self.k_values) * len(self.sequences) * len(self.horizons)

    @property
    def sequence_names(self) -> tuple[str, ...]:
        return tuple(seq.name for seq in self.sequences)

    @property
    def max_depth(self) -> int:
        """Prior days needed for the deepest (k, sequence) cell."""
        return max(-seq.offsets[k] for k in self.k_values for seq in self.sequences)

    def restrict_horizon(self, t: float) -> "GridSpec":
        return replace(self, horizons=(t,))


@dataclass(frozen=True)
class ForecastScenario:
    """One grid cell at one anchor: a forecast or the reason it is excluded."""

    k: int
    sequence: str
    horizon: float
    anchor_index: int
    forecast: Forecast | None
    error: str | None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def value(self) -> float:
        if not self.ok or self.forecast is None:
            raise ValueError(f"scenario (k={self.k}, {self.sequence}, t={self.horizon}) has no value")
        return self.forecast.value


@dataclass(frozen=True)
class ScenarioWeights:
    """Per-(k, sequence) probabilities at one horizon, plus their multipliers.

    entries hold p_k(j); multipliers hold |m_k(j)| (0 marks a perfectly
    converged cell, inf a cell whose first-order increment vanished);
    average_multipliers hold the per-k harmonic mean. Cells whose forecasts
    errored are listed in excluded and carry no weight.
    """

    horizon: float
    entries: dict[Cell, float]
    multipliers: dict[Cell, float]
    average_multipliers: dict[int, float]
    excluded: tuple[Cell, ...]


def run_grid(series: TimeSeries, anchor: int, grid: GridSpec) -> list[ForecastScenario]:
    """Forecast every grid cell at one anchor, in (k, sequence, horizon) order.

    Cells that cannot produce a usable forecast carry an error tag and are
    excluded downstream; only an anchor too early for every single cell is
    an error.
    """
    scenarios: list[ForecastScenario] = []
    n_insufficient = 0
    for k in grid.k_values:
        for seq in grid.sequences:
            try:
                history = past_history(series, anchor, seq, k)
            except HistoryError:
                n_insufficient += len(grid.horizons)
                scenarios.extend(
                    ForecastScenario(k, seq.name, t, anchor, None, ERR_INSUFFICIENT_HISTORY)
                    for t in grid.horizons
                )
                continue
            cell_fit = fit(history)
            for t in grid.horizons:
                try:
                    fc = forecast(cell_fit, t)
                except ZeroCoefficientError:
                    scenarios.append(
                        ForecastScenario(k, seq.name, t, anchor, None, ERR_ZERO_COEFFICIENT)
                    )
                    continue
                error = ERR_DIVERGED if fc.status == STATUS_DIVERGED else None
                scenarios.append(ForecastScenario(k, seq.name, t, anchor, fc, error))
    if n_insufficient == grid.size:
        raise HistoryError(f"anchor {anchor} lacks history for every cell of the grid")
    return scenarios


def fixed_dimension_average(
    scenarios: list[ForecastScenario], dimension: str, level: int | str | float
) -> float:
    """Mean forecast over all valid scenarios matching one level of one input."""
    if dimension not in ("k", "sequence", "horizon"):
        raise ValueError(f"unknown dimension {dimension!r}")
    selected = [s.value for s in scenarios if s.ok and getattr(s, dimension) == level]
    if not selected:
        raise ValueError(f"no valid scenarios with {dimension}={level}")
    return math.fsum(selected) / len(selected)


def weights_from_multipliers(multipliers: list[float]) -> list[float]:
    """Turn per-sequence multipliers |m| into probabilities m_bar / |m|.

    A zero multiplier (zero forecast increment) is a converged fixed point
    and absorbs the whole level in the limit; several zeros split it evenly.
    All-infinite multipliers degenerate to uniform weights, the equal-
    multiplier limit.
    """
    if not multipliers:
        raise ValueError("no multipliers to weight")
    zero_count = sum(1 for m in multipliers if m == 0.0)
    if zero_count:
        return [1.0 / zero_count if m == 0.0 else 0.0 for m in multipliers]
    inverses = [0.0 if math.isinf(m) else 1.0 / m for m in multipliers]
    total = math.fsum(inverses)
    if total == 0.0:
        return [1.0 / len(multipliers)] * len(multipliers)
    return [inv / total for inv in inverses]


def _order_value(
    series: TimeSeries, anchor: int, seq: SequenceSpec, order: int, t: float
) -> float | None:
    """Forecast value at one fit order, or None where the cell errors."""
    if order == 0:
        return series[anchor]
    try:
        fc = forecast(fit(past_history(series, anchor, seq, order)), t)
    except (HistoryError, ZeroCoefficientError):
        return None
    return fc.value if fc.ok else None


def scenario_weights(series: TimeSeries, anchor: int, grid: GridSpec) -> ScenarioWeights:
    """Entropy weights for a grid restricted to a single horizon.

    The multiplier of cell (k, j) compares its successive-order increment
    df_k = f_k*(j) - f_{k-1}*(j) against the first-order increment
    df_1 = f_1*(j) - f0 of the same sequence. Weights are normalized per k.
    """
    if len(grid.horizons) != 1:
        raise ValueError("scenario weights require a grid restricted to one horizon")
    t = grid.horizons[0]

    order_cache: dict[tuple[str, int], float | None] = {}

    def order_value(seq: SequenceSpec, order: int) -> float | None:
        key = (seq.name, order)
        if key not in order_cache:
            order_cache[key] = _order_value(series, anchor, seq, order, t)
        return order_cache[key]

    multipliers: dict[Cell, float] = {}
    excluded: list[Cell] = []
    f0 = series[anchor]
    for k in sorted(grid.k_values):
        for seq in grid.sequences:
            f_k = order_value(seq, k)
            f_km1 = order_value(seq, k - 1)
            f_1 = order_value(seq, 1)
            if f_k is None or f_km1 is None or f_1 is None:
                excluded.append((k, seq.name))
                continue
            delta_k = f_k - f_km1
            delta_1 = f_1 - f0
            if delta_k == 0.0:
                multipliers[(k, seq.name)] = 0.0
            elif delta_1 == 0.0:
                multipliers[(k, seq.name)] = math.inf
            else:
                multipliers[(k, seq.name)] = abs(delta_k / delta_1)

    if not multipliers:
        raise ValueError(f"no weightable cells at anchor {anchor}, horizon {t}")

    entries: dict[Cell, float] = {}
    average_multipliers: dict[int, float] = {}
    for k in sorted(grid.k_values):
        cells = [(k, name) for name in grid.sequence_names if (k, name) in multipliers]
        if not cells:
            continue
        level = [multipliers[cell] for cell in cells]
        probabilities = weights_from_multipliers(level)
        if any(m == 0.0 for m in level):
            average_multipliers[k] = 0.0
        else:
            inverse_sum = math.fsum(0.0 if math.isinf(m) else 1.0 / m for m in level)
            average_multipliers[k] = math.inf if inverse_sum == 0.0 else 1.0 / inverse_sum
        total = math.fsum(probabilities)
        if abs(total - 1.0) > WEIGHT_NORMALIZATION_TOLERANCE:
            raise ArithmeticError(f"weights at k={k} sum to {total!r}, not 1")
        for cell, p in zip(cells, probabilities):
            entries[cell] = p

    return ScenarioWeights(
        horizon=t,
        entries=entries,
        multipliers=multipliers,
        average_multipliers=average_multipliers,
        excluded=tuple(excluded),
    )


def weighted_forecast(scenarios: list[ForecastScenario], weights: ScenarioWeights) -> float:
    """Probability-weighted forecast over the weighted cells at one horizon.

    The per-k weights each sum to one, so the double sum is divided by the
    total weight to stay a convex combination across orders.
    """
    values: dict[Cell, float] = {
        (s.k, s.sequence): s.value
        for s in scenarios
        if s.ok and s.horizon == weights.horizon
    }
    terms: list[float] = []
    total: list[float] = []
    for cell, p in weights.entries.items():
        if cell not in values:
            raise ValueError(f"weighted cell {cell} missing from scenarios")
        terms.append(p * values[cell])
        total.append(p)
    denominator = math.fsum(total)
    if denominator == 0.0:
        raise ValueError("all weighted cells degenerate")
    return math.fsum(terms) / denominator


def most_probable_scenario(weights: ScenarioWeights) -> Cell:
    """The (k, sequence) cell with the largest weight.

    Ties resolve to the smaller k, then to earlier sequence order.
    """
    if not weights.entries:
        raise ValueError("no weighted cells")
    position = {cell: n for n, cell in enumerate(weights.entries)}
    best: Cell | None = None
    best_p = -math.inf
    for cell in sorted(weights.entries, key=lambda c: (c[0], position[c])):
        p = weights.entries[cell]
        if p > best_p:
            best, best_p = cell, p
    assert best is not None
    return best
