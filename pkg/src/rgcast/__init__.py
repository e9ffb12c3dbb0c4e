"""Self-similar renormalization-group forecasting for daily time series.

One-step-ahead forecasts from nested-exponential extrapolation of exactly
interpolated past histories, evaluated over a grid of fit orders, past-time
sequences, and horizons, with entropy-based scenario weighting and a
rolling-forward backtest harness.
"""

from .backtest import (
    BacktestReport,
    CombinationRow,
    DayOutcome,
    IndicatorRow,
    WinRateTable,
    backtest,
    combination_table,
    default_anchor_range,
    indicator_tables,
    mape,
    okape,
    trend_ok,
    win_rate_table,
)
from .extrapolation import (
    Forecast,
    ForecastDiagnostics,
    ZeroCoefficientError,
    cost_functional,
    effective_time,
    forecast,
)
from .interpolation import InterpolationError, PolynomialFit, evaluate, fit
from .scenarios import (
    DEFAULT_HORIZONS,
    DEFAULT_K_VALUES,
    DEFAULT_SEQUENCES,
    ForecastScenario,
    GridSpec,
    ScenarioWeights,
    fixed_dimension_average,
    most_probable_scenario,
    run_grid,
    scenario_weights,
    weighted_forecast,
    weights_from_multipliers,
)
from .series import (
    BUILTIN_SEQUENCES,
    HistoryError,
    PastHistory,
    SequenceSpec,
    SeriesError,
    TimeSeries,
    builtin_sequence,
    load_series,
    past_history,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SEQUENCES",
    "BacktestReport",
    "CombinationRow",
    "DEFAULT_HORIZONS",
    "DEFAULT_K_VALUES",
    "DEFAULT_SEQUENCES",
    "DayOutcome",
    "Forecast",
    "ForecastDiagnostics",
    "ForecastScenario",
    "GridSpec",
    "HistoryError",
    "IndicatorRow",
    "InterpolationError",
    "PastHistory",
    "PolynomialFit",
    "ScenarioWeights",
    "SequenceSpec",
    "SeriesError",
    "TimeSeries",
    "WinRateTable",
    "ZeroCoefficientError",
    "backtest",
    "builtin_sequence",
    "combination_table",
    "cost_functional",
    "default_anchor_range",
    "effective_time",
    "evaluate",
    "fit",
    "fixed_dimension_average",
    "forecast",
    "indicator_tables",
    "load_series",
    "mape",
    "most_probable_scenario",
    "okape",
    "past_history",
    "run_grid",
    "scenario_weights",
    "trend_ok",
    "weighted_forecast",
    "weights_from_multipliers",
    "win_rate_table",
]
