"""Uniformly sampled time series, CSV ingestion and elementary transforms."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, ParseError, SizeError, SpacingError

GrowthMode = Literal["absolute-difference", "percent-growth"]

_SPACING_RTOL = 1e-9


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Level series on a uniform time grid.

    The time axis is stored as ``start_time`` plus a constant ``step`` (years);
    sample ``k`` sits at ``start_time + k * step``.
    """

    start_time: float
    step: float
    values: np.ndarray
    label: str = ""
    units: str = ""

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1:
            raise SizeError("values must be one-dimensional")
        if len(values) < 2:
            raise SizeError(f"a series needs at least 2 samples, got {len(values)}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise DomainError(f"step must be a positive finite number, got {self.step}")
        if not math.isfinite(self.start_time):
            raise DomainError("start_time must be finite")
        if not np.all(np.isfinite(values)):
            raise DomainError("series values must be finite (no NaN or inf)")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "start_time", float(self.start_time))
        object.__setattr__(self, "step", float(self.step))

    def __len__(self):
        return len(self.values)

    @property
    def times(self) -> np.ndarray:
        return self.start_time + self.step * np.arange(len(self.values))

    @property
    def end_time(self) -> float:
        return self.start_time + self.step * (len(self.values) - 1)

    def with_values(self, values, start_time=None, label=None) -> "TimeSeries":
        """Return a series sharing this one's step and metadata."""
        return TimeSeries(
            start_time=self.start_time if start_time is None else start_time,
            step=self.step,
            values=values,
            label=self.label if label is None else label,
            units=self.units,
        )


@dataclass(frozen=True, eq=False)
class GrowthSeries:
    """First differences (or percent growth) of a :class:`TimeSeries`.

    ``start_time`` is the time of the *second* source sample: value ``i`` is
    the change from source sample ``i`` to sample ``i + 1``.
    """

    start_time: float
    step: float
    values: np.ndarray
    mode: str = "absolute-difference"
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.mode not in ("absolute-difference", "percent-growth"):
            raise DomainError(f"unknown growth mode {self.mode!r}")

    def __len__(self):
        return len(self.values)

    @property
    def times(self) -> np.ndarray:
        return self.start_time + self.step * np.arange(len(self.values))

    def as_series(self) -> TimeSeries:
        units = "%" if self.mode == "percent-growth" else ""
        return TimeSeries(self.start_time, self.step, self.values, self.label, units)


def _parse_float(cell: str, row: int) -> float:
    try:
        value = float(cell.strip())
    except ValueError:
        raise ParseError(f"non-numeric cell {cell!r}", row=row) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite cell {cell!r}", row=row)
    return value


def _looks_numeric(cell: str) -> bool:
    try:
        float(cell.strip())
    except ValueError:
        return False
    return True


def load_csv(source, time_column=0, value_column=1, label="", units="") -> TimeSeries:
    """Read a ``time,value`` CSV into a :class:`TimeSeries`.

    Parameters
    ----------
    source : bytes, path-like, or binary/text stream
        UTF-8 CSV content (bytes or stream) or a path to it. A single header
        row is detected automatically when the first row's time cell is not
        numeric.
    time_column, value_column : int or str
        Column indices, or header names when the file has a header.

    Returns
    -------
    TimeSeries
        The step is the first time gap; every other gap must agree with it to
        a relative tolerance of 1e-9.

    Raises
    ------
    ParseError
        For a non-numeric cell; the message carries the 1-based row number.
    SpacingError
        When times are not strictly increasing or not uniformly spaced.
    SizeError
        When fewer than two data rows are present.
    """
    text = _read_text(source)
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise SizeError("CSV contains no rows")

    first_data = 0
    header = None
    if not _looks_numeric(rows[0][0]):
        header = [c.strip() for c in rows[0]]
        first_data = 1
    t_idx = _column_index(time_column, header)
    v_idx = _column_index(value_column, header)

    times, values = [], []
    for offset, row in enumerate(rows[first_data:]):
        rownum = first_data + offset + 1
        if len(row) <= max(t_idx, v_idx):
            raise ParseError("missing column", row=rownum)
        times.append(_parse_float(row[t_idx], rownum))
        values.append(_parse_float(row[v_idx], rownum))

    if len(values) < 2:
        raise SizeError(f"need at least 2 data rows, got {len(values)}")
    step = times[1] - times[0]
    if step <= 0:
        raise SpacingError("times must be strictly increasing")
    for k in range(1, len(times)):
        gap = times[k] - times[k - 1]
        if gap <= 0:
            raise SpacingError(f"times must be strictly increasing (row {first_data + k + 1})")
        if abs(gap - step) > _SPACING_RTOL * abs(step):
            raise SpacingError(
                f"non-uniform spacing at row {first_data + k + 1}: gap {gap!r} vs step {step!r}"
            )
    return TimeSeries(times[0], step, values, label=label, units=units)


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _column_index(column, header) -> int:
    if isinstance(column, int):
        return column
    if header is None or column not in header:
        raise ParseError(f"column {column!r} not found in header")
    return header.index(column)


def growth(series: TimeSeries, mode: GrowthMode = "absolute-difference") -> GrowthSeries:
    """Per-period change ``y[i+1] - y[i]``, or ``100 * (y[i+1]/y[i] - 1)`` in percent mode."""
    y = series.values
    if mode == "absolute-difference":
        values = np.diff(y)
    elif mode == "percent-growth":
        if np.any(y <= 0):
            raise DomainError("percent growth requires strictly positive values")
        values = 100.0 * (y[1:] / y[:-1] - 1.0)
    else:
        raise DomainError(f"unknown growth mode {mode!r}")
    return GrowthSeries(
        start_time=series.start_time + series.step,
        step=series.step,
        values=values,
        mode=mode,
        label=series.label,
    )


def log_transform(series: TimeSeries) -> TimeSeries:
    if np.any(series.values <= 0):
        raise DomainError("log transform requires strictly positive values")
    return series.with_values(np.log(series.values))
