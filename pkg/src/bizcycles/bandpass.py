"""Cycle bands and the Baxter-King approximate band-pass filter."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, NyquistError, SizeError
from .series import TimeSeries

INF = math.inf


@dataclass(frozen=True)
class CycleBand:
    """Half-open period interval ``[period_min, period_max)`` in years."""

    name: str
    period_min: float
    period_max: float = INF

    def __post_init__(self):
        if not (0 < self.period_min < self.period_max):
            raise DomainError(
                f"band {self.name!r}: need 0 < period_min < period_max, "
                f"got [{self.period_min}, {self.period_max})"
            )

    def contains(self, period: float) -> bool:
        return self.period_min <= period < self.period_max

    def overlaps(self, other: "CycleBand") -> bool:
        return self.period_min < other.period_max and other.period_min < self.period_max


KITCHIN = CycleBand("Kitchin", 3.0, 7.0)
JUGLAR = CycleBand("Juglar", 7.0, 11.0)
KUZNETS = CycleBand("Kuznets", 15.0, 25.0)
KONDRATIEFF = CycleBand("Kondratieff", 45.0, 60.0)
GRAND_SUPERCYCLE = CycleBand("GrandSupercycle", 70.0, INF)

CANONICAL_BANDS = (KITCHIN, JUGLAR, KUZNETS, KONDRATIEFF, GRAND_SUPERCYCLE)
UNCLASSIFIED = "Unclassified"


def band_by_name(name: str, bands=CANONICAL_BANDS) -> CycleBand:
    for band in bands:
        if band.name.lower() == name.lower():
            return band
    raise ConfigError(f"unknown band {name!r}; known: {', '.join(b.name for b in bands)}")


def check_disjoint(bands) -> None:
    bands = list(bands)
    for i, a in enumerate(bands):
        for b in bands[i + 1 :]:
            if a.overlaps(b):
                raise ConfigError(f"bands {a.name!r} and {b.name!r} overlap")


def with_overrides(overrides, bands=CANONICAL_BANDS) -> tuple[CycleBand, ...]:
    """Replace canonical bands by name, e.g. ``{"Kitchin": (3, 5)}``; checks disjointness."""
    out = []
    for band in bands:
        if band.name in overrides:
            lo, hi = overrides[band.name]
            out.append(CycleBand(band.name, lo, hi))
        else:
            out.append(band)
    known = {b.name for b in bands}
    for name, (lo, hi) in overrides.items():
        if name not in known:
            out.append(CycleBand(name, lo, hi))
    check_disjoint(out)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class FilterWeights:
    """Symmetric moving-average weights for lags ``-K..K``."""

    weights: np.ndarray
    band: CycleBand
    step: float

    @property
    def truncation(self) -> int:
        return (len(self.weights) - 1) // 2

    @property
    def lags(self) -> np.ndarray:
        K = self.truncation
        return np.arange(-K, K + 1)

    def gain(self, frequency) -> np.ndarray:
        """|frequency response| at ``frequency`` in cycles per year."""
        f = np.atleast_1d(np.asarray(frequency, dtype=float))
        phase = -2j * np.pi * np.outer(f * self.step, self.lags)
        return np.abs(np.exp(phase) @ self.weights)


def bandpass_weights(band: CycleBand, step: float, truncation: int) -> FilterWeights:
    """Truncated ideal band-pass weights, shifted to sum to zero.

    With ``w_lo = 2 pi step / period_max`` and ``w_hi = 2 pi step / period_min``
    the ideal weights are ``b_0 = (w_hi - w_lo) / pi`` and
    ``b_j = (sin(w_hi j) - sin(w_lo j)) / (pi j)``. After truncation at
    ``|j| <= K`` the same constant is added to every weight so that the filter
    has zero gain at frequency zero.
    """
    if truncation < 1 or int(truncation) != truncation:
        raise DomainError(f"truncation must be a positive integer, got {truncation!r}")
    if step <= 0:
        raise DomainError("step must be positive")
    if band.period_min < 2 * step:
        raise NyquistError(
            f"band {band.name!r} minimum period {band.period_min} is below the Nyquist "
            f"limit 2*step = {2 * step}"
        )
    K = int(truncation)
    w_hi = 2 * np.pi * step / band.period_min
    w_lo = 0.0 if math.isinf(band.period_max) else 2 * np.pi * step / band.period_max
    j = np.arange(1, K + 1)
    one_side = (np.sin(w_hi * j) - np.sin(w_lo * j)) / (np.pi * j)
    weights = np.concatenate([one_side[::-1], [(w_hi - w_lo) / np.pi], one_side])
    weights -= weights.sum() / len(weights)
    return FilterWeights(weights=weights, band=band, step=step)


def apply_bandpass(series: TimeSeries, band: CycleBand, truncation: int) -> TimeSeries:
    """Filter ``series``; ``truncation`` samples are lost at each end."""
    K = int(truncation)
    if len(series) <= 2 * K + 1:
        raise SizeError(
            f"series of length {len(series)} too short for truncation {K} (need > {2 * K + 1})"
        )
    fw = bandpass_weights(band, series.step, K)
    # symmetric weights: correlation and convolution coincide
    out = np.convolve(series.values, fw.weights, mode="valid")
    return series.with_values(
        out,
        start_time=series.start_time + K * series.step,
        label=f"{series.label} {band.name} band".strip(),
    )
