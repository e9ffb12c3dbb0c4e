import math

import numpy as np
import pytest

from rgcast import (
    Forecast,
    ForecastScenario,
    GridSpec,
    HistoryError,
    ScenarioWeights,
    TimeSeries,
    builtin_sequence,
    fixed_dimension_average,
    most_probable_scenario,
    run_grid,
    scenario_weights,
    weighted_forecast,
    weights_from_multipliers,
)
from rgcast.extrapolation import ForecastDiagnostics

from conftest import make_constant


def scaled(series: TimeSeries, lam: float) -> TimeSeries:
    return TimeSeries(labels=series.labels, values=tuple(lam * v for v in series.values))


def fake_scenario(k, sequence, horizon, value=None, error=None, anchor=0):
    fc = None
    if value is not None:
        diag = ForecastDiagnostics((), (), ())
        fc = Forecast(value=value, horizon=horizon, diagnostics=diag, status="ok")
    return ForecastScenario(k, sequence, horizon, anchor, fc, error)


# ── grid spec ────────────────────────────────────────────────────────────────

def test_default_grid_is_sixty_cells():
    grid = GridSpec()
    assert grid.size == 60
    assert grid.k_values == (3, 4, 5, 6)
    assert grid.sequence_names == ("A", "B", "C")
    assert grid.horizons == (0.1, 0.3, 0.5, 0.7, 1.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(k_values=())
    with pytest.raises(ValueError):
        GridSpec(k_values=(3, 3))
    with pytest.raises(ValueError):
        GridSpec(k_values=(7,))  # exceeds built-in sequence depth
    with pytest.raises(ValueError):
        GridSpec(horizons=(0.0,))
    with pytest.raises(ValueError):
        GridSpec(horizons=(1.2,))
    with pytest.raises(ValueError):
        GridSpec(k_values=(0,))


def test_grid_max_depth():
    assert GridSpec().max_depth == 13  # sequence B at k=6
    assert GridSpec(sequences=(builtin_sequence("A"),)).max_depth == 6


# ── run_grid ─────────────────────────────────────────────────────────────────

def test_run_grid_sixty_scenarios(grw_series):
    scenarios = run_grid(grw_series, 100, GridSpec())
    assert len(scenarios) == 60
    keys = [(s.k, s.sequence, s.horizon) for s in scenarios]
    assert len(set(keys)) == 60
    expected = [
        (k, name, t)
        for k in (3, 4, 5, 6)
        for name in ("A", "B", "C")
        for t in (0.1, 0.3, 0.5, 0.7, 1.0)
    ]
    assert keys == expected


def test_run_grid_singleton(grw_series):
    grid = GridSpec(k_values=(3,), sequences=(builtin_sequence("A"),), horizons=(1.0,))
    scenarios = run_grid(grw_series, 100, grid)
    assert len(scenarios) == 1
    assert scenarios[0].ok


def test_run_grid_constant_series(constant_series):
    scenarios = run_grid(constant_series, 30, GridSpec())
    assert len(scenarios) == 60
    assert all(s.ok for s in scenarios)
    assert all(s.value == 50.0 for s in scenarios)


def test_run_grid_partial_insufficiency(grw_series):
    # anchor 8 supports (6, A) but not (6, B) which needs 13 prior days
    scenarios = run_grid(grw_series, 8, GridSpec())
    by_cell = {(s.k, s.sequence): s.error for s in scenarios if s.horizon == 1.0}
    assert by_cell[(6, "A")] is None
    assert by_cell[(6, "B")] == "insufficient_history"
    assert by_cell[(5, "C")] == "insufficient_history"
    assert by_cell[(4, "C")] is None


def test_run_grid_all_insufficient(grw_series):
    with pytest.raises(HistoryError):
        run_grid(grw_series, 2, GridSpec())


def test_run_grid_no_lookahead(grw_series):
    anchor = 120
    truncated = TimeSeries(
        labels=grw_series.labels[: anchor + 1], values=grw_series.values[: anchor + 1]
    )
    full = run_grid(grw_series, anchor, GridSpec())
    trunc = run_grid(truncated, anchor, GridSpec())
    for a, b in zip(full, trunc):
        assert a.error == b.error
        if a.ok:
            assert a.value == b.value  # bit-identical


# ── fixed-dimension averages ─────────────────────────────────────────────────

def test_fixed_dimension_average_of_constants(constant_series):
    scenarios = run_grid(constant_series, 30, GridSpec())
    assert fixed_dimension_average(scenarios, "k", 3) == 50.0


def test_fixed_dimension_average_counts(grw_series):
    scenarios = run_grid(grw_series, 100, GridSpec())
    assert sum(1 for s in scenarios if s.ok and s.k == 3) == 15
    assert sum(1 for s in scenarios if s.ok and s.sequence == "A") == 20
    assert sum(1 for s in scenarios if s.ok and s.horizon == 0.5) == 12
    expected = math.fsum(s.value for s in scenarios if s.k == 3) / 15
    assert fixed_dimension_average(scenarios, "k", 3) == expected


def test_fixed_dimension_average_with_exclusions():
    scenarios = [
        fake_scenario(3, "A", 1.0, value=10.0),
        fake_scenario(3, "B", 1.0, value=12.0),
        fake_scenario(3, "C", 1.0, error="zero_coefficient"),
    ]
    assert fixed_dimension_average(scenarios, "k", 3) == 11.0


def test_fixed_dimension_average_empty_selection():
    scenarios = [fake_scenario(3, "A", 1.0, error="diverged")]
    with pytest.raises(ValueError):
        fixed_dimension_average(scenarios, "k", 3)
    with pytest.raises(ValueError):
        fixed_dimension_average(scenarios, "bogus", 3)


# ── multipliers → weights ────────────────────────────────────────────────────

def test_weights_equal_multipliers_split_evenly():
    assert weights_from_multipliers([2.0, 2.0]) == [0.5, 0.5]


def test_weights_example_one_three():
    p = weights_from_multipliers([1.0, 3.0])
    assert p[0] == pytest.approx(0.75, rel=1e-12)
    assert p[1] == pytest.approx(0.25, rel=1e-12)


def test_weights_single_scenario():
    assert weights_from_multipliers([4.2]) == [1.0]


def test_weights_zero_multiplier_takes_all():
    assert weights_from_multipliers([0.0, 1.0]) == [1.0, 0.0]
    assert weights_from_multipliers([0.0, 0.0, 2.0]) == [0.5, 0.5, 0.0]


def test_weights_all_infinite_degenerate_to_uniform():
    p = weights_from_multipliers([math.inf, math.inf])
    assert p == [0.5, 0.5]


# ── scenario weights over a series ───────────────────────────────────────────

def test_scenario_weights_requires_single_horizon(grw_series):
    with pytest.raises(ValueError):
        scenario_weights(grw_series, 100, GridSpec())


def test_scenario_weights_normalized_per_k(grw_series):
    grid = GridSpec().restrict_horizon(1.0)
    weights = scenario_weights(grw_series, 100, grid)
    for k in (3, 4, 5, 6):
        total = math.fsum(p for (kk, _), p in weights.entries.items() if kk == k)
        assert abs(total - 1.0) <= 1e-12
    assert all(p >= 0.0 for p in weights.entries.values())


def test_scenario_weights_constant_series_uniform(constant_series):
    grid = GridSpec().restrict_horizon(0.5)
    weights = scenario_weights(constant_series, 30, grid)
    # every increment is zero: multipliers all 0, weights uniform per k
    for (k, name), p in weights.entries.items():
        assert p == pytest.approx(1.0 / 3.0, rel=1e-12)
        assert weights.multipliers[(k, name)] == 0.0


def test_scenario_weights_scale_invariance(grw_series):
    grid = GridSpec().restrict_horizon(1.0)
    base = scenario_weights(grw_series, 150, grid)
    for lam in (1e-3, 1e3):
        other = scenario_weights(scaled(grw_series, lam), 150, grid)
        assert set(other.entries) == set(base.entries)
        for cell, p in base.entries.items():
            assert other.entries[cell] == pytest.approx(p, rel=1e-9, abs=1e-12)
        assert most_probable_scenario(other) == most_probable_scenario(base)


# ── weighted forecast ────────────────────────────────────────────────────────

def manual_weights(horizon, entries):
    return ScenarioWeights(
        horizon=horizon,
        entries=dict(entries),
        multipliers={cell: 1.0 for cell in entries},
        average_multipliers={},
        excluded=(),
    )


def test_weighted_forecast_equal_values(constant_series):
    grid = GridSpec().restrict_horizon(1.0)
    scenarios = run_grid(constant_series, 30, grid)
    weights = scenario_weights(constant_series, 30, grid)
    assert weighted_forecast(scenarios, weights) == pytest.approx(50.0, rel=1e-12)


def test_weighted_forecast_two_levels_single_sequence():
    scenarios = [
        fake_scenario(3, "A", 1.0, value=10.0),
        fake_scenario(4, "A", 1.0, value=20.0),
    ]
    weights = manual_weights(1.0, {(3, "A"): 1.0, (4, "A"): 1.0})
    assert weighted_forecast(scenarios, weights) == pytest.approx(15.0, rel=1e-12)


def test_weighted_forecast_weighted_single_level():
    scenarios = [
        fake_scenario(3, "A", 1.0, value=8.0),
        fake_scenario(3, "B", 1.0, value=16.0),
    ]
    weights = manual_weights(1.0, {(3, "A"): 0.75, (3, "B"): 0.25})
    assert weighted_forecast(scenarios, weights) == pytest.approx(10.0, rel=1e-12)


def test_weighted_forecast_is_convex_combination(grw_series):
    grid = GridSpec().restrict_horizon(1.0)
    scenarios = run_grid(grw_series, 200, grid)
    weights = scenario_weights(grw_series, 200, grid)
    combined = weighted_forecast(scenarios, weights)
    values = [s.value for s in scenarios if s.ok and (s.k, s.sequence) in weights.entries]
    assert min(values) <= combined <= max(values)


def test_weighted_forecast_missing_cell_is_an_error():
    weights = manual_weights(1.0, {(3, "A"): 1.0})
    with pytest.raises(ValueError):
        weighted_forecast([], weights)


# ── most probable scenario ───────────────────────────────────────────────────

def test_most_probable_unique_max():
    weights = manual_weights(1.0, {(3, "A"): 0.7, (3, "B"): 0.3})
    assert most_probable_scenario(weights) == (3, "A")


def test_most_probable_tie_break():
    weights = manual_weights(1.0, {(3, "A"): 0.5, (3, "B"): 0.5})
    assert most_probable_scenario(weights) == (3, "A")
    weights = manual_weights(1.0, {(4, "A"): 0.5, (3, "B"): 0.5})
    assert most_probable_scenario(weights) == (3, "B")


def test_most_probable_prefers_smaller_multiplier():
    p = weights_from_multipliers([1.0, 3.0])
    weights = manual_weights(1.0, {(3, "A"): p[0], (3, "B"): p[1]})
    assert most_probable_scenario(weights) == (3, "A")
