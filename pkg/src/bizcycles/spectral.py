"""Periodogram estimation, peak picking and cycle-band classification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import peak_prominences

from .bandpass import CANONICAL_BANDS, UNCLASSIFIED, CycleBand, check_disjoint
from .errors import DomainError, SizeError
from .hpfilter import default_lambda, hp_filter
from .series import TimeSeries

DETRENDS = ("none", "mean", "linear", "hp")
TAPERS = ("none", "hann")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided power spectral density on ``k / (M * step)``, ``k = 0..M//2``.

    ``power`` is scaled so that ``sum(power) * df`` is the mean square of the
    (detrended) input, i.e. its variance whenever the detrend removed the mean.
    """

    frequencies: np.ndarray
    power: np.ndarray
    step: float
    method: dict = field(default_factory=dict)

    @property
    def df(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    @property
    def total_power(self) -> float:
        return float(self.power.sum() * self.df)

    def amplitude(self, index: int) -> float:
        """Sinusoid amplitude implied by a single bin (exact for on-bin tones)."""
        if index == 0:
            return float(np.sqrt(self.power[0] * self.df))
        return float(np.sqrt(2.0 * self.power[index] * self.df))

    def nearest_bin(self, frequency: float) -> int:
        return int(np.argmin(np.abs(self.frequencies - frequency)))


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float
    period: float
    power: float
    prominence: float
    index: int

    def as_dict(self) -> dict:
        return {
            "frequency": self.frequency,
            "period": self.period,
            "power": self.power,
            "prominence": self.prominence,
        }


@dataclass(frozen=True)
class PeakClassification:
    peak: SpectralPeak
    band: str


@dataclass(frozen=True)
class HarmonicTest:
    ratio: float
    passed: bool
    n: int
    tol: float


def detrend_values(series: TimeSeries, detrend: str = "hp", lam: float | None = None) -> np.ndarray:
    y = series.values
    if detrend == "none":
        return y.copy()
    if detrend == "mean":
        return y - y.mean()
    if detrend == "linear":
        t = np.arange(len(y), dtype=float)
        slope, intercept = np.polyfit(t, y, 1)
        return y - (intercept + slope * t)
    if detrend == "hp":
        if lam is None:
            lam = default_lambda(series.step)
        return hp_filter(series, lam).cycle.values.copy()
    raise DomainError(f"unknown detrend {detrend!r}; choose from {DETRENDS}")


def _one_sided(x: np.ndarray, step: float, taper: str, pad: int) -> tuple[np.ndarray, np.ndarray]:
    n = len(x)
    if taper == "hann":
        w = np.hanning(n + 2)[1:-1]  # strictly positive, symmetric
    elif taper == "none":
        w = np.ones(n)
    else:
        raise DomainError(f"unknown taper {taper!r}; choose from {TAPERS}")
    m = n * pad
    spec = np.fft.rfft(x * w, n=m)
    scale = np.full(len(spec), 2.0)
    scale[0] = 1.0
    if m % 2 == 0:
        scale[-1] = 1.0
    power = scale * np.abs(spec) ** 2 * step / (n * np.mean(w**2))
    freqs = np.arange(len(spec)) / (m * step)
    return freqs, power


def periodogram(
    series: TimeSeries,
    detrend: str = "hp",
    taper: str = "none",
    lam: float | None = None,
    segments: int = 1,
    pad: int = 1,
) -> Spectrum:
    """Periodogram of a series after detrending and optional tapering.

    Parameters
    ----------
    series : TimeSeries
        At least 8 samples.
    detrend : {"none", "mean", "linear", "hp"}
        ``"hp"`` keeps the HP cyclical component (``lam`` defaults by step).
    taper : {"none", "hann"}
        Hann-tapered power is divided by the mean squared window, so the
        integral stays comparable to the untapered variance.
    segments : int
        Number of non-overlapping segments to average (Welch-style).
        1 gives the plain periodogram.
    pad : int
        Zero-padding factor, for display only; it adds interpolated bins,
        not resolution.
    """
    if len(series) < 8:
        raise SizeError(f"periodogram needs at least 8 samples, got {len(series)}")
    if segments < 1 or pad < 1:
        raise DomainError("segments and pad must be positive integers")
    x = detrend_values(series, detrend, lam)
    seg_len = len(x) // segments
    if seg_len < 8:
        raise SizeError(f"segments of length {seg_len} are too short (need 8)")

    freqs, acc = None, None
    for s in range(segments):
        f, p = _one_sided(x[s * seg_len : (s + 1) * seg_len], series.step, taper, pad)
        freqs = f
        acc = p if acc is None else acc + p
    method = {"detrend": detrend, "taper": taper, "segments": segments, "pad": pad}
    if detrend == "hp":
        method["lambda"] = float(default_lambda(series.step) if lam is None else lam)
    return Spectrum(frequencies=freqs, power=acc / segments, step=series.step, method=method)


def find_peaks(
    spectrum: Spectrum, min_prominence_ratio: float = 5.0, min_relative_power: float = 0.0
) -> list[SpectralPeak]:
    """Strict local maxima whose prominence is at least ``ratio * median(power)``.

    Bin 0 and the last bin are never peaks (they lack a neighbour on one side).
    Results are sorted by descending power.

    ``min_relative_power`` additionally drops peaks below that fraction of the
    largest bin. Noise-free simulated spectra need it: their median sits at the
    rounding floor, so the median-relative rule alone accepts rounding ripples.
    """
    if min_prominence_ratio < 0:
        raise DomainError("min_prominence_ratio must be non-negative")
    if not 0 <= min_relative_power <= 1:
        raise DomainError("min_relative_power must lie in [0, 1]")
    p = spectrum.power
    if len(p) < 3:
        return []
    interior = np.arange(1, len(p) - 1)
    is_max = (p[interior] > p[interior - 1]) & (p[interior] > p[interior + 1])
    idx = interior[is_max]
    if len(idx) == 0:
        return []
    prominences = peak_prominences(p, idx)[0]
    threshold = min_prominence_ratio * float(np.median(p))
    floor = min_relative_power * float(p.max())
    peaks = [
        SpectralPeak(
            frequency=float(spectrum.frequencies[k]),
            period=1.0 / float(spectrum.frequencies[k]),
            power=float(p[k]),
            prominence=float(prom),
            index=int(k),
        )
        for k, prom in zip(idx, prominences)
        if prom >= threshold and p[k] >= floor
    ]
    peaks.sort(key=lambda pk: (-pk.power, pk.frequency))
    return peaks


def classify_period(period: float, bands=CANONICAL_BANDS) -> str:
    for band in bands:
        if band.contains(period):
            return band.name
    return UNCLASSIFIED


def classify_peaks(peaks, bands=CANONICAL_BANDS) -> list[PeakClassification]:
    bands = tuple(bands)
    check_disjoint(bands)
    return [PeakClassification(pk, classify_period(pk.period, bands)) for pk in peaks]


def harmonic_ratio_test(f_low: float, f_high: float, n: int = 3, tol: float = 0.05) -> HarmonicTest:
    """Is ``f_high`` the ``n``-th harmonic of ``f_low`` to relative tolerance ``tol``?"""
    if f_low <= 0 or f_high <= 0:
        raise DomainError("frequencies must be positive")
    if f_high < f_low:
        raise DomainError("f_high must not be below f_low")
    if n < 1 or int(n) != n:
        raise DomainError("harmonic number must be a positive integer")
    if tol < 0:
        raise DomainError("tolerance must be non-negative")
    ratio = f_high / f_low
    return HarmonicTest(ratio=ratio, passed=abs(ratio - n) <= tol * n, n=int(n), tol=tol)


def band_power(spectrum: Spectrum, f_lo: float, f_hi: float) -> float:
    """Integrated power over ``f_lo <= f <= f_hi``."""
    sel = (spectrum.frequencies >= f_lo) & (spectrum.frequencies <= f_hi)
    return float(spectrum.power[sel].sum() * spectrum.df)


# --- white-noise calibration of the prominence threshold -----------------------


def max_noise_prominence_ratio(n: int, seed: int) -> float:
    """Largest peak prominence, in units of the median power, for one white-noise draw."""
    x = np.random.default_rng(seed).standard_normal(n)
    spec = periodogram(TimeSeries(0.0, 1.0, x), detrend="mean")
    peaks = find_peaks(spec, 0.0)
    if not peaks:
        return 0.0
    return max(pk.prominence for pk in peaks) / float(np.median(spec.power))


def calibrate_prominence_threshold(n: int, seeds=range(1000, 3000), quantile: float = 0.99) -> float:
    """Monte-Carlo quantile of :func:`max_noise_prominence_ratio` over ``seeds``."""
    ratios = [max_noise_prominence_ratio(n, s) for s in seeds]
    return float(np.quantile(ratios, quantile))


def interpolate_threshold(n: int, table: dict) -> float:
    """Threshold for series length ``n`` from a ``{length: ratio}`` table, linear in log2(n)."""
    lengths = np.array(sorted(int(k) for k in table), dtype=float)
    values = np.array([table[str(int(k))] if str(int(k)) in table else table[int(k)] for k in lengths])
    x = np.log2(max(n, 2))
    lx = np.log2(lengths)
    if x <= lx[0]:
        return float(values[0])
    if x >= lx[-1]:
        slope = (values[-1] - values[-2]) / (lx[-1] - lx[-2])
        return float(values[-1] + slope * (x - lx[-1]))
    return float(np.interp(x, lx, values))
