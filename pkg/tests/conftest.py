import csv
import math
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from rgcast import TimeSeries, builtin_sequence, past_history

START_DATE = date(2007, 1, 3)


def make_random_walk(
    n: int = 300,
    seed: int = 7,
    start: float = 100.0,
    drift: float = 0.0002,
    vol: float = 0.012,
) -> TimeSeries:
    """Geometric random walk with ISO date labels; strictly positive."""
    rng = np.random.default_rng(seed)
    log_values = math.log(start) + np.concatenate(
        [[0.0], np.cumsum(rng.normal(drift, vol, size=n - 1))]
    )
    labels = tuple((START_DATE + timedelta(days=i)).isoformat() for i in range(n))
    return TimeSeries(labels=labels, values=tuple(float(v) for v in np.exp(log_values)))


def make_constant(n: int = 60, value: float = 50.0) -> TimeSeries:
    labels = tuple((START_DATE + timedelta(days=i)).isoformat() for i in range(n))
    return TimeSeries(labels=labels, values=(value,) * n)


def random_history(rng: np.random.Generator, k: int, sequence_name: str = "A"):
    """A k+1-point history on a built-in sequence with lognormal values."""
    seq = builtin_sequence(sequence_name)
    values = 100.0 * np.exp(rng.normal(0.0, 0.05, size=20))
    series = TimeSeries(
        labels=tuple(str(i) for i in range(20)),
        values=tuple(float(v) for v in values),
    )
    return past_history(series, 19, seq, k)


def write_series_csv(path: Path, series: TimeSeries) -> Path:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date", "close"])
        for label, value in zip(series.labels, series.values):
            writer.writerow([label, repr(value)])
    return path


@pytest.fixture(scope="session")
def grw_series() -> TimeSeries:
    return make_random_walk()


@pytest.fixture(scope="session")
def constant_series() -> TimeSeries:
    return make_constant()
