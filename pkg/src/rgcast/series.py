"""Daily series ingestion and backward-recursion past histories.

A series is a chronologically ordered list of strictly positive daily
values indexed by trading-day position: position i is exactly one trading
day after position i-1, whatever the calendar gap between their labels.
All downstream math (ratios of polynomial coefficients, velocities scaled
by the anchor value) requires every value to be > 0, so non-positive
inputs are rejected at the door.

A past history is the backward-recursion snapshot used for fitting: the
anchor day sits at time 0 and earlier observations at strictly decreasing
negative offsets drawn from a sequence pattern (consecutive days,
Fibonacci spacing, or even two-day spacing for the built-ins).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path


class SeriesError(ValueError):
    """Input data violates the series contract (parse, sign, or ordering)."""


class HistoryError(ValueError):
    """An anchor lacks the depth required by a sequence/order combination."""


# Offset patterns selectable by name. Each supports orders up to 6
# (seven entries including the anchor at 0).
BUILTIN_SEQUENCES: dict[str, tuple[int, ...]] = {
    "A": (0, -1, -2, -3, -4, -5, -6),
    "B": (0, -1, -2, -3, -5, -8, -13),
    "C": (0, -2, -4, -6, -8, -10, -12),
}

# Date layouts accepted in the date column, tried in order on the first
# data row; the matching layout is then required of every row.
_DATE_FORMATS = ("%Y-%m-%d", "%Y/%m/%d", "%Y%m%d", "%m/%d/%Y", "%d.%m.%Y")


@dataclass(frozen=True)
class TimeSeries:
    """Ordered daily observations of a strictly positive quantity.

    labels are opaque identifiers (normally calendar dates) resolved only
    by exact match; chronological ordering is established at load time.
    """

    labels: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise SeriesError("series must contain at least one observation")
        if len(self.labels) != len(self.values):
            raise SeriesError("labels and values must have equal length")
        for label, value in zip(self.labels, self.values):
            if not (0.0 < value < float("inf")):
                raise SeriesError(f"non-positive value {value!r} at {label!r}")
        if len(set(self.labels)) != len(self.labels):
            raise SeriesError("duplicate labels in series")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def index_of_label(self, label: str) -> int:
        """Resolve a label to its position by exact match only."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise SeriesError(f"no observation labelled {label!r}") from None


@dataclass(frozen=True)
class SequenceSpec:
    """A past-time offset pattern: 0 first, then strictly decreasing offsets."""

    name: str
    offsets: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.offsets) < 2:
            raise SeriesError("sequence needs at least two offsets")
        if self.offsets[0] != 0:
            raise SeriesError(f"sequence {self.name}: first offset must be 0")
        for earlier, later in zip(self.offsets[1:], self.offsets[:-1]):
            if earlier >= later:
                raise SeriesError(f"sequence {self.name}: offsets must be strictly decreasing")

    @property
    def max_order(self) -> int:
        """Largest fit order k this sequence supports."""
        return len(self.offsets) - 1


@dataclass(frozen=True)
class PastHistory:
    """Backward-recursion snapshot: (time, value) pairs with the anchor at t=0.

    times are trading-day offsets (0 first, strictly decreasing), values the
    matching observations. order == number of points - 1.
    """

    times: tuple[float, ...]
    values: tuple[float, ...]
    anchor_index: int

    def __post_init__(self) -> None:
        if len(self.times) != len(self.values) or len(self.times) < 1:
            raise SeriesError("history times and values must align and be non-empty")
        if self.times[0] != 0.0:
            raise SeriesError("history must start at time 0")
        for earlier, later in zip(self.times[1:], self.times[:-1]):
            if earlier >= later:
                raise SeriesError("history times must be strictly decreasing")
        for value in self.values:
            if not (0.0 < value < float("inf")):
                raise SeriesError(f"non-positive history value {value!r}")

    @property
    def order(self) -> int:
        return len(self.times) - 1

    @property
    def points(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.times, self.values))


def builtin_sequence(name: str) -> SequenceSpec:
    """Return one of the built-in offset patterns A, B, or C."""
    try:
        return SequenceSpec(name, BUILTIN_SEQUENCES[name])
    except KeyError:
        raise SeriesError(
            f"unknown sequence {name!r} (built-ins: {', '.join(sorted(BUILTIN_SEQUENCES))})"
        ) from None


def past_history(series: TimeSeries, anchor: int, seq: SequenceSpec, k: int) -> PastHistory:
    """Materialize the k+1-point past history at an anchor position.

    Values are exact copies of series entries; offsets count trading days,
    so weekend/holiday gaps are one unit like any other step.
    """
    if not 1 <= k <= seq.max_order:
        raise ValueError(f"order k={k} outside 1..{seq.max_order} for sequence {seq.name}")
    if not 0 <= anchor < len(series):
        raise ValueError(f"anchor {anchor} outside series of length {len(series)}")
    deepest = anchor + seq.offsets[k]
    if deepest < 0:
        raise HistoryError(
            f"anchor {anchor} needs {-seq.offsets[k]} prior days for sequence {seq.name}, k={k}"
        )
    times = tuple(float(seq.offsets[n]) for n in range(k + 1))
    values = tuple(series[anchor + seq.offsets[n]] for n in range(k + 1))
    return PastHistory(times=times, values=values, anchor_index=anchor)


def _parse_value(token: str, row_number: int) -> float:
    cleaned = token.strip()
    # Plain decimal reals only; grouping marks would silently corrupt prices.
    if any(ch not in "0123456789+-.eE" for ch in cleaned):
        raise SeriesError(f"row {row_number}: unparsable value {token!r} (thousands separators rejected)")
    try:
        value = float(cleaned)
    except ValueError:
        raise SeriesError(f"row {row_number}: unparsable value {token!r}") from None
    if not (0.0 < value < float("inf")):
        raise SeriesError(f"row {row_number}: non-positive value {token!r}")
    return value


def _detect_date_format(token: str) -> str:
    for fmt in _DATE_FORMATS:
        try:
            datetime.strptime(token, fmt)
            return fmt
        except ValueError:
            continue
    raise SeriesError(f"unrecognized date {token!r}")


def _resolve_column(spec: int | str | None, header: list[str], what: str) -> int:
    if spec is None:
        raise SeriesError(f"no {what} column specified")
    if isinstance(spec, int):
        position = spec
    elif spec in header:
        position = header.index(spec)
    elif spec.lstrip("-").isdigit():
        position = int(spec)
    else:
        raise SeriesError(f"{what} column {spec!r} not in header {header}")
    if not 0 <= position < len(header):
        raise SeriesError(f"{what} column position {position} outside header of width {len(header)}")
    return position


def load_series(
    path: str | Path,
    value_col: int | str | None = None,
    date_col: int | str | None = "auto",
    delimiter: str = ",",
) -> TimeSeries:
    """Load a delimited text file (header row required) into a TimeSeries.

    Columns are selected by header name or zero-based position. Defaults:
    with two or more columns, column 0 is the date and column 1 the value;
    with a single column, it is the value and labels are auto-generated.
    Pass date_col=None to force auto-generated labels. Rows with an empty
    value cell are skipped; non-positive or malformed values are fatal.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SeriesError(f"cannot read {path}: {exc}") from exc

    reader = csv.reader(text.splitlines(), delimiter=delimiter)
    rows = [row for row in reader if any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise SeriesError(f"{path}: no data rows below the header")
    header, data = [cell.strip() for cell in rows[0]], rows[1:]

    if value_col is None:
        value_col = 1 if len(header) >= 2 else 0
    value_pos = _resolve_column(value_col, header, "value")
    if date_col == "auto":
        date_col = 0 if len(header) >= 2 and value_pos != 0 else None
    date_pos = None if date_col is None else _resolve_column(date_col, header, "date")
    if date_pos is not None and date_pos == value_pos:
        raise SeriesError("date and value columns coincide")

    date_format: str | None = None
    records: list[tuple[date, str, float]] = []
    for row_number, row in enumerate(data, start=2):
        value_token = row[value_pos] if value_pos < len(row) else ""
        if not value_token.strip():
            continue  # missing value: row rejected, not fatal
        value = _parse_value(value_token, row_number)
        if date_pos is None:
            records.append((date.min, str(len(records)), value))
            continue
        label = row[date_pos].strip() if date_pos < len(row) else ""
        if not label:
            continue
        if date_format is None:
            date_format = _detect_date_format(label)
        try:
            when = datetime.strptime(label, date_format).date()
        except ValueError:
            raise SeriesError(
                f"row {row_number}: date {label!r} does not match layout {date_format!r}"
            ) from None
        records.append((when, label, value))

    if not records:
        raise SeriesError(f"{path}: no parsable rows")
    if date_pos is not None:
        records.sort(key=lambda rec: rec[0])
        for left, right in zip(records, records[1:]):
            if left[0] == right[0]:
                raise SeriesError(f"duplicate date {left[1]!r}")
    return TimeSeries(
        labels=tuple(rec[1] for rec in records),
        values=tuple(rec[2] for rec in records),
    )
