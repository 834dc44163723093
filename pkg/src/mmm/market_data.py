"""Ingest raw index/short-rate series and build discounted-NP data.

The raw input is a CSV with header ``date,index,rate`` (``rate`` optional,
annualized, defaults to 0 with a warning flag), ISO-8601 dates, strictly
increasing, positive index levels.  From it we build

* the savings account, compounded piecewise-exponentially between
  observations from the left-endpoint short rate, starting at 1;
* the discounted NP series nbar = index / savings, optionally rescaled so
  the first value hits a target level;
* the running quadratic variation of sqrt(nbar), the empirical estimate of
  the model clock rho(t) used by calibration.

Year fractions use ACT/365.25 from the first observation date.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RawSeries",
    "DiscountedSeries",
    "QuadraticVariationCurve",
    "load_raw",
    "build_discounted",
    "quadratic_variation",
    "write_discounted_csv",
    "write_qv_csv",
]

DAYS_PER_YEAR = 365.25


@dataclass(frozen=True)
class RawSeries:
    """Validated raw observations: calendar dates, index levels, short rates."""

    dates: tuple[dt.date, ...]
    index_level: np.ndarray
    short_rate: np.ndarray
    rate_defaulted: bool = False

    def __post_init__(self) -> None:
        n = len(self.dates)
        if len(self.index_level) != n or len(self.short_rate) != n:
            raise ValueError("dates, index levels and rates must have equal length")
        if n == 0:
            raise ValueError("series is empty")
        for i, level in enumerate(self.index_level):
            if not level > 0.0:
                raise ValueError(f"row {i + 1}: index level must be positive, got {level!r}")
        for i in range(1, n):
            if self.dates[i] <= self.dates[i - 1]:
                raise ValueError(
                    f"row {i + 1}: date {self.dates[i].isoformat()} does not increase over "
                    f"{self.dates[i - 1].isoformat()}"
                )

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class DiscountedSeries:
    """Discounted NP values and the savings account on a year-fraction grid."""

    t: np.ndarray
    nbar: np.ndarray
    savings: np.ndarray

    def __post_init__(self) -> None:
        if not (len(self.t) == len(self.nbar) == len(self.savings)):
            raise ValueError("t, nbar and savings must have equal length")
        if len(self.t) < 2:
            raise ValueError("discounted series needs at least two observations")
        if np.any(self.nbar <= 0.0):
            raise ValueError("discounted NP values must be positive")
        if np.any(self.savings <= 0.0):
            raise ValueError("savings account values must be positive")

    def __len__(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class QuadraticVariationCurve:
    """Running quadratic variation of sqrt(nbar); starts at 0, nondecreasing."""

    t: np.ndarray
    qv: np.ndarray

    def __post_init__(self) -> None:
        if len(self.t) != len(self.qv):
            raise ValueError("t and qv must have equal length")
        if len(self.qv) and self.qv[0] != 0.0:
            raise ValueError("quadratic variation must start at 0")
        if np.any(np.diff(self.qv) < 0.0):
            raise ValueError("quadratic variation must be nondecreasing")

    def __len__(self) -> int:
        return len(self.t)


def load_raw(path) -> RawSeries:
    """Parse a ``date,index[,rate]`` CSV into a RawSeries.

    Errors carry the offending file line number.  A missing ``rate`` column
    yields zero rates and sets ``rate_defaulted`` on the result.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        header = [h.strip().lower() for h in header]
        if len(header) < 2 or header[0] != "date" or header[1] != "index":
            raise ValueError(f"{path}: line 1: expected header 'date,index[,rate]', got {header!r}")
        has_rate = len(header) >= 3 and header[2] == "rate"

        dates: list[dt.date] = []
        levels: list[float] = []
        rates: list[float] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}: line {lineno}: expected at least 2 columns, got {len(row)}")
            try:
                day = dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad ISO date {row[0]!r}") from None
            try:
                level = float(row[1])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad index level {row[1]!r}") from None
            rate = 0.0
            if has_rate and len(row) >= 3 and row[2].strip():
                try:
                    rate = float(row[2])
                except ValueError:
                    raise ValueError(f"{path}: line {lineno}: bad rate {row[2]!r}") from None
            if not level > 0.0:
                raise ValueError(f"{path}: line {lineno}: index level must be positive, got {level}")
            if dates and day <= dates[-1]:
                raise ValueError(
                    f"{path}: line {lineno}: date {day.isoformat()} does not increase over "
                    f"{dates[-1].isoformat()}"
                )
            dates.append(day)
            levels.append(level)
            rates.append(rate)

    if not dates:
        raise ValueError(f"{path}: no data rows")
    return RawSeries(
        dates=tuple(dates),
        index_level=np.asarray(levels, dtype=float),
        short_rate=np.asarray(rates, dtype=float),
        rate_defaulted=not has_rate,
    )


def build_discounted(raw: RawSeries, normalize_to: float | None = None) -> DiscountedSeries:
    """Build the savings account and the discounted NP series from raw data.

    savings[0] = 1 and savings[i+1] = savings[i] * exp(rate_i * dt_i) with
    the left-endpoint rate (a rolled-over short bond between observations).
    When ``normalize_to`` is given, nbar is rescaled so nbar[0] equals it
    exactly.
    """
    if normalize_to is not None and not normalize_to > 0.0:
        raise ValueError("normalize_to must be positive")
    d0 = raw.dates[0]
    t = np.array([(d - d0).days for d in raw.dates], dtype=float) / DAYS_PER_YEAR
    log_savings = np.concatenate(([0.0], np.cumsum(raw.short_rate[:-1] * np.diff(t))))
    savings = np.exp(log_savings)
    nbar = raw.index_level / savings
    if normalize_to is not None:
        nbar = normalize_to * (nbar / nbar[0])
    return DiscountedSeries(t=t, nbar=nbar, savings=savings)


def quadratic_variation(series: DiscountedSeries) -> QuadraticVariationCurve:
    """Running sum of squared increments of sqrt(nbar); qv[0] = 0."""
    steps = np.diff(np.sqrt(series.nbar)) ** 2
    qv = np.concatenate(([0.0], np.cumsum(steps)))
    return QuadraticVariationCurve(t=series.t.copy(), qv=qv)


def _write_rows(path, header: str, columns) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(header + "\n")
        for values in zip(*columns):
            handle.write(",".join(repr(float(v)) for v in values) + "\n")


def write_discounted_csv(path, series: DiscountedSeries) -> None:
    """Dump a DiscountedSeries as ``t,nbar,savings``."""
    _write_rows(path, "t,nbar,savings", (series.t, series.nbar, series.savings))


def write_qv_csv(path, curve: QuadraticVariationCurve) -> None:
    """Dump a QuadraticVariationCurve as ``t,qv``."""
    _write_rows(path, "t,qv", (curve.t, curve.qv))
