"""Business-cycle tones passing through a nonlinear economic medium.

The medium is memoryless: ``y = a1 x + a2 x**2 + a3 x**3``. Alongside the
polynomial response this module models Kerr-type phase modulation (SPM/XPM),
Raman-like power transfer from the faster to the slower cycle, and a
Brillouin-like Doppler-shifted reflection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NyquistError, SizeError
from .series import TimeSeries
from .spectral import Spectrum

TWO_PI = 2.0 * math.pi

KINDS = (
    "DC",
    "Fundamental",
    "Harmonic2",
    "Harmonic3",
    "IMD_sum",
    "IMD_diff",
    "FWM_low",
    "FWM_high",
    "IMD3_sum",
    "FWM_triple",
)


@dataclass(frozen=True)
class Tone:
    amplitude: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise DomainError(f"tone amplitude must be >= 0, got {self.amplitude}")
        if not self.frequency > 0:
            raise DomainError(f"tone frequency must be > 0, got {self.frequency}")
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)

    @property
    def power(self) -> float:
        return 0.5 * self.amplitude**2


class ToneSet(tuple):
    """Ordered tones with pairwise distinct frequencies."""

    def __new__(cls, tones=()):
        tones = tuple(t if isinstance(t, Tone) else Tone(*t) for t in tones)
        for a, b in itertools.combinations(tones, 2):
            if abs(a.frequency - b.frequency) <= 1e-12 * max(a.frequency, b.frequency):
                raise DomainError(f"duplicate tone frequency {a.frequency}")
        return super().__new__(cls, tones)

    @property
    def max_frequency(self) -> float:
        return max((t.frequency for t in self), default=0.0)


@dataclass(frozen=True)
class NonlinearMedium:
    a1: float = 1.0
    a2: float = 0.0
    a3: float = 0.0
    kerr_kappa: float = 0.0
    raman_gain: float = 0.0
    sbs_reflectivity: float = 0.0
    sbs_doppler_shift: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.sbs_reflectivity <= 1.0:
            raise DomainError("sbs_reflectivity must lie in [0, 1]")
        if self.sbs_doppler_shift < 0:
            raise DomainError("sbs_doppler_shift must be >= 0")
        if self.kerr_kappa < 0:
            raise DomainError("kerr_kappa must be >= 0")
        if self.raman_gain < 0:
            raise DomainError("raman_gain must be >= 0")

    @property
    def is_linear(self) -> bool:
        return self.a2 == 0 and self.a3 == 0


@dataclass(frozen=True)
class MixingProduct:
    """One real sinusoid ``amplitude * cos(2 pi frequency t + phase)`` at the output.

    ``combination`` holds the integer multiple of each input tone's frequency
    that produced it; ``parents`` lists the tones involved.
    """

    kind: str
    frequency: float
    amplitude: float
    parents: tuple
    combination: tuple = ()
    phase: float = 0.0

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "frequency": self.frequency,
            "amplitude": self.amplitude,
            "parents": list(self.parents),
        }


# --- synthesis and the polynomial medium -------------------------------------


def synthesize(tones, t0: float, t1: float, dt: float) -> TimeSeries:
    """Sum of cosines sampled at ``t0 + k dt`` for ``t0 + k dt < t1``."""
    tones = ToneSet(tones)
    if not t1 > t0:
        raise DomainError("t1 must exceed t0")
    if not dt > 0:
        raise DomainError("dt must be positive")
    if tones and dt > 1.0 / (2.0 * tones.max_frequency):
        raise NyquistError(
            f"dt={dt} cannot represent {tones.max_frequency} cycles/year "
            f"(need dt <= {1.0 / (2.0 * tones.max_frequency)})"
        )
    n = int(math.ceil((t1 - t0) / dt - 1e-9))
    if n < 2:
        raise SizeError("window holds fewer than 2 samples")
    t = t0 + dt * np.arange(n)
    values = np.zeros(n)
    for tone in tones:
        values += tone.amplitude * np.cos(TWO_PI * tone.frequency * t + tone.phase)
    return TimeSeries(t0, dt, values, label="synthesized tones")


def apply_polynomial(series: TimeSeries, medium: NonlinearMedium) -> TimeSeries:
    x = series.values
    return series.with_values(medium.a1 * x + medium.a2 * x**2 + medium.a3 * x**3)


def _kind(combination, tones) -> str:
    nz = [(i, c) for i, c in enumerate(combination) if c != 0]
    if not nz:
        return "DC"
    if len(nz) == 1:
        return ("Fundamental", "Harmonic2", "Harmonic3")[abs(nz[0][1]) - 1]
    if len(nz) == 2:
        (i, ci), (j, cj) = sorted(nz, key=lambda ic: tones[ic[0]].frequency)
        same_sign = (ci > 0) == (cj > 0)
        if abs(ci) == abs(cj) == 1:
            return "IMD_sum" if same_sign else "IMD_diff"
        if same_sign:
            return "IMD3_sum"
        return "FWM_low" if abs(ci) == 2 else "FWM_high"
    return "IMD3_sum" if len({c > 0 for _, c in nz}) == 1 else "FWM_triple"


def _canonical(combination, tones):
    """Representative of ``{v, -v}`` with non-negative frequency."""
    freq = sum(c * t.frequency for c, t in zip(combination, tones))
    if freq < 0 or (freq == 0 and next((c for c in combination if c), 0) < 0):
        return tuple(-c for c in combination), -freq
    return tuple(combination), freq


def predict_products(tones, medium: NonlinearMedium, max_order: int = 3) -> list[MixingProduct]:
    """Closed-form output components of the polynomial medium for a tone set.

    Writes each tone as ``(A/2)(e^{i theta} + e^{-i theta})`` and expands
    ``a_n x**n`` term by term, so every amplitude is exact: e.g. two tones
    through ``a3 x**3`` give ``3/4 a3 A1**2 A2`` at ``2 f1 - f2`` and
    ``3/4 a3 A2**2 A1`` at ``2 f2 - f1``. Products with identical frequency
    but different tone combinations are kept as separate entries. Negative
    frequencies are folded onto ``|f|``. Products whose coefficient vanishes
    (e.g. all of them for ``a2 = a3 = 0`` except the fundamentals) are omitted.
    """
    tones = ToneSet(tones)
    if max_order not in (2, 3):
        raise DomainError(f"max_order must be 2 or 3, got {max_order!r}")
    if not tones:
        raise SizeError("at least one tone is required")
    m = len(tones)
    coeffs = {1: medium.a1, 2: medium.a2, 3: medium.a3 if max_order == 3 else 0.0}
    half = [0.5 * t.amplitude * np.exp(1j * t.phase) for t in tones]

    acc: dict[tuple, complex] = {}
    for order, a in coeffs.items():
        if a == 0:
            continue
        for picks in itertools.product(range(2 * m), repeat=order):
            vec = [0] * m
            term = complex(a)
            for p in picks:
                i, sign = divmod(p, 2)
                if sign == 0:
                    vec[i] += 1
                    term *= half[i]
                else:
                    vec[i] -= 1
                    term *= np.conj(half[i])
            key = tuple(vec)
            acc[key] = acc.get(key, 0j) + term

    products = []
    seen = set()
    for vec, coef in acc.items():
        canon, freq = _canonical(vec, tones)
        if canon in seen:
            continue
        seen.add(canon)
        coef = acc[canon]
        if any(canon):
            amp = 2.0 * abs(coef)
            phase = float(np.angle(coef)) % TWO_PI
        else:
            amp = abs(coef.real)
            phase = 0.0 if coef.real >= 0 else math.pi
        if amp == 0.0:
            continue
        products.append(
            MixingProduct(
                kind=_kind(canon, tones),
                frequency=abs(freq),
                amplitude=float(amp),
                parents=tuple(i for i, c in enumerate(canon) if c),
                combination=canon,
                phase=phase,
            )
        )
    products.sort(key=lambda p: (p.frequency, KINDS.index(p.kind), p.combination))
    return products


# --- Kerr phase modulation ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class KerrResult:
    """Output of :func:`kerr_phase_modulation`.

    ``spectrum`` is the folded periodogram of the summed complex envelopes;
    ``input_spectrum`` the same quantity with ``kappa = 0``. ``tone_powers``
    holds each tone's mean power ``|E_i|**2 / 2`` after modulation.
    """

    spectrum: Spectrum
    input_spectrum: Spectrum
    tone_powers: np.ndarray
    envelopes: np.ndarray = field(repr=False)


def _envelope_spectrum(z: np.ndarray, dt: float) -> Spectrum:
    """One-sided spectrum of a complex signal, negative frequencies folded onto |f|.

    Normalised so that ``sum(power) * df == mean(|z|**2) / 2``, which equals
    the mean square of ``Re z`` for unmodulated tones.
    """
    n = len(z)
    Z = np.fft.fft(z)
    k = np.arange(n // 2 + 1)
    power = np.abs(Z[k]) ** 2
    neg = (-k) % n
    fold = (k > 0) & (neg != k)
    power[fold] += np.abs(Z[neg[fold]]) ** 2
    power *= dt / (2.0 * n)
    return Spectrum(frequencies=k / (n * dt), power=power, step=dt, method={"kind": "complex-envelope"})


def kerr_phase_modulation(tones, kappa: float, mode: str, t0: float, t1: float, dt: float) -> KerrResult:
    """Carrier-induced phase modulation of a set of tones.

    Each tone is carried as a complex envelope ``E_i = A_i exp(i theta_i(t))``.
    The modulating power is the instantaneous power of the real oscillation,
    ``P_j(t) = (A_j cos theta_j(t))**2``. SPM multiplies ``E_i`` by
    ``exp(i kappa P_i)``; XPM by ``exp(i kappa sum_{j != i} P_j)``. Phase
    modulation leaves ``|E_i|`` untouched, so each tone's power, and the total,
    are conserved while the spectrum spreads into sidebands at
    ``f_i + 2 n f_j``.
    """
    tones = ToneSet(tones)
    if kappa < 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    mode = mode.upper()
    if mode not in ("SPM", "XPM"):
        raise DomainError(f"mode must be SPM or XPM, got {mode!r}")
    if not tones:
        raise SizeError("at least one tone is required")
    if not t1 > t0 or not dt > 0:
        raise DomainError("need t1 > t0 and dt > 0")
    guard = 4.0
    if dt > 1.0 / (2.0 * guard * tones.max_frequency):
        raise NyquistError(
            f"dt={dt} leaves no broadening margin for {tones.max_frequency} cycles/year "
            f"(need dt <= {1.0 / (2.0 * guard * tones.max_frequency)})"
        )
    n = int(math.ceil((t1 - t0) / dt - 1e-9))
    if n < 8:
        raise SizeError("window holds fewer than 8 samples")
    t = t0 + dt * np.arange(n)
    theta = np.array([TWO_PI * tn.frequency * t + tn.phase for tn in tones])
    amps = np.array([tn.amplitude for tn in tones])[:, None]
    carriers = amps * np.exp(1j * theta)
    inst_power = (amps * np.cos(theta)) ** 2

    if mode == "SPM":
        drive = inst_power
    else:
        drive = inst_power.sum(axis=0)[None, :] - inst_power
    envelopes = carriers * np.exp(1j * kappa * drive)

    return KerrResult(
        spectrum=_envelope_spectrum(envelopes.sum(axis=0), dt),
        input_spectrum=_envelope_spectrum(carriers.sum(axis=0), dt),
        tone_powers=0.5 * np.mean(np.abs(envelopes) ** 2, axis=1),
        envelopes=envelopes,
    )


def bandwidth_db(spectrum: Spectrum, level_db: float = -20.0) -> float:
    """Span of frequencies whose power is within ``level_db`` of the peak, plus one bin.

    A single isolated line therefore has bandwidth ``df``.
    """
    p = spectrum.power
    keep = np.nonzero(p >= p.max() * 10.0 ** (level_db / 10.0))[0]
    return float(spectrum.frequencies[keep[-1]] - spectrum.frequencies[keep[0]] + spectrum.df)


# --- Raman-like power transfer ------------------------------------------------


@dataclass(frozen=True, eq=False)
class RamanTrajectory:
    t: np.ndarray
    p_high: np.ndarray
    p_low: np.ndarray
    max_relative_step: float

    @property
    def total(self) -> np.ndarray:
        return self.p_high + self.p_low


def raman_transfer(p_high: float, p_low: float, gain: float, duration: float, dt: float) -> RamanTrajectory:
    """Integrate ``P_h' = -g P_h P_l``, ``P_l' = g P_h P_l`` with classical RK4.

    Power flows from the higher-frequency (shorter) cycle to the lower one.
    RK4 preserves the linear invariant ``P_h + P_l`` up to rounding.
    ``max_relative_step`` is the largest per-step change of either power
    relative to the total; values approaching 1 flag an unstable step size.
    """
    for name, v in (("p_high", p_high), ("p_low", p_low), ("gain", gain)):
        if not v >= 0:
            raise DomainError(f"{name} must be >= 0, got {v}")
    if not dt > 0:
        raise DomainError("dt must be positive")
    if not duration >= 0:
        raise DomainError("duration must be >= 0")
    steps = int(round(duration / dt))
    if abs(steps * dt - duration) > 1e-9 * max(duration, dt):
        raise DomainError("duration must be an integer multiple of dt")

    def rate(h, l):
        r = gain * h * l
        return -r, r

    ph = np.empty(steps + 1)
    pl = np.empty(steps + 1)
    ph[0], pl[0] = float(p_high), float(p_low)
    total0 = ph[0] + pl[0]
    worst = 0.0
    h, l = ph[0], pl[0]
    for k in range(steps):
        k1h, k1l = rate(h, l)
        k2h, k2l = rate(h + 0.5 * dt * k1h, l + 0.5 * dt * k1l)
        k3h, k3l = rate(h + 0.5 * dt * k2h, l + 0.5 * dt * k2l)
        k4h, k4l = rate(h + dt * k3h, l + dt * k3l)
        dh = dt / 6.0 * (k1h + 2 * k2h + 2 * k3h + k4h)
        dl = dt / 6.0 * (k1l + 2 * k2l + 2 * k3l + k4l)
        if total0 > 0:
            worst = max(worst, abs(dh) / total0, abs(dl) / total0)
        h, l = h + dh, l + dl
        ph[k + 1], pl[k + 1] = h, l
    return RamanTrajectory(t=dt * np.arange(steps + 1), p_high=ph, p_low=pl, max_relative_step=worst)


# --- Brillouin-like reflection ------------------------------------------------


def brillouin_reflect(tone: Tone, medium: NonlinearMedium) -> Tone:
    """Reflected tone: amplitude scaled by the reflectivity, frequency shifted down."""
    shift = medium.sbs_doppler_shift
    if shift >= tone.frequency:
        raise DomainError(
            f"Doppler shift {shift} must be below the tone frequency {tone.frequency}"
        )
    return Tone(
        amplitude=medium.sbs_reflectivity * tone.amplitude,
        frequency=tone.frequency - shift,
        phase=tone.phase,
    )
