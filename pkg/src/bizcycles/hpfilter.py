"""Hodrick-Prescott trend/cycle decomposition.

The trend ``g`` minimises::

    sum_t (y_t - g_t)**2 + lam * sum_{t=2}^{T-1} ((g_{t+1} - g_t) - (g_t - g_{t-1}))**2

whose normal equations are ``(I + lam * K'K) g = y`` with ``K`` the
``(T-2) x T`` second-difference operator. ``I + lam * K'K`` is symmetric
positive definite with bandwidth 2, so it is factorised in banded form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solveh_banded

from .errors import DomainError, SizeError
from .series import TimeSeries

# quarterly value from Hodrick & Prescott; the annual one is a convention
DEFAULT_LAMBDA_BY_STEP = {0.25: 1600.0, 1.0: 100.0}


@dataclass(frozen=True, eq=False)
class TrendCycleDecomposition:
    source: TimeSeries
    trend: TimeSeries
    cycle: TimeSeries
    lam: float

    @property
    def objective(self) -> float:
        return hp_objective(self.source, self.trend, self.lam)

    def cycle_difference(self, reference: TimeSeries) -> TimeSeries:
        """Cycle minus a user-supplied reference cycle on the same time axis."""
        if len(reference) != len(self.cycle) or not np.allclose(
            reference.times, self.cycle.times, rtol=0, atol=1e-9 * max(1.0, abs(self.cycle.step))
        ):
            raise SizeError("reference cycle must share the decomposition's time axis")
        return self.cycle.with_values(self.cycle.values - reference.values, label="cycle-minus-reference")


def default_lambda(step: float) -> float:
    """Smoothing parameter used when the caller does not give one.

    Only quarterly (1600) and annual (100) steps have a default; any other
    step raises :class:`DomainError` so the choice is never made silently.
    """
    for known, lam in DEFAULT_LAMBDA_BY_STEP.items():
        if abs(step - known) <= 1e-9 * known:
            return lam
    raise DomainError(f"no default lambda for step {step!r} years; pass lambda explicitly")


def second_difference(x: np.ndarray) -> np.ndarray:
    return x[2:] - 2.0 * x[1:-1] + x[:-2]


def _second_difference_adjoint(d: np.ndarray) -> np.ndarray:
    """Apply K' to a length T-2 vector."""
    out = np.zeros(len(d) + 2)
    out[2:] += d
    out[1:-1] -= 2.0 * d
    out[:-2] += d
    return out


def hp_banded_matrix(n: int, lam: float) -> np.ndarray:
    """Upper banded storage (3 x n) of ``I + lam * K'K`` for :func:`scipy.linalg.solveh_banded`."""
    diag = np.full(n, 6.0)
    diag[[0, -1]] = 1.0
    diag[[1, -2]] = 5.0
    off1 = np.full(n - 1, -4.0)
    off1[[0, -1]] = -2.0
    ab = np.zeros((3, n))
    ab[0, 2:] = lam
    ab[1, 1:] = lam * off1
    ab[2] = 1.0 + lam * diag
    if n == 3:
        # K'K for T=3 is the outer product of (1, -2, 1)
        ab[2] = 1.0 + lam * np.array([1.0, 4.0, 1.0])
        ab[1, 1:] = lam * np.array([-2.0, -2.0])
    return ab


def hp_filter(series: TimeSeries, lam: float) -> TrendCycleDecomposition:
    """Split ``series`` into trend and cycle with smoothing parameter ``lam``.

    The cycle is solved for first, from ``(I + lam K'K) c = lam K'K y``, and
    the trend is ``y - c``. This is algebraically the same as solving for
    ``g`` directly but stays accurate for very large ``lam``: a series with
    zero curvature gives a zero right-hand side.
    """
    y = series.values
    n = len(y)
    if n < 3:
        raise SizeError(f"HP filter needs at least 3 samples, got {n}")
    lam = float(lam)
    if not np.isfinite(lam) or lam < 0:
        raise DomainError(f"lambda must be a non-negative finite number, got {lam!r}")

    if lam == 0.0:
        cycle = np.zeros(n)
    else:
        rhs = lam * _second_difference_adjoint(second_difference(y))
        cycle = solveh_banded(hp_banded_matrix(n, lam), rhs, check_finite=False)
    trend = y - cycle
    return TrendCycleDecomposition(
        source=series,
        trend=series.with_values(trend, label=f"{series.label} trend".strip()),
        cycle=series.with_values(cycle, label=f"{series.label} cycle".strip()),
        lam=lam,
    )


def hp_objective(y: TimeSeries | np.ndarray, g: TimeSeries | np.ndarray, lam: float) -> float:
    yv = y.values if isinstance(y, TimeSeries) else np.asarray(y, dtype=float)
    gv = g.values if isinstance(g, TimeSeries) else np.asarray(g, dtype=float)
    if len(yv) != len(gv):
        raise SizeError(f"length mismatch: {len(yv)} vs {len(gv)}")
    if len(yv) < 3:
        raise SizeError("objective needs at least 3 samples")
    if lam < 0:
        raise DomainError("lambda must be non-negative")
    resid = yv - gv
    curv = second_difference(gv)
    return float(resid @ resid + lam * (curv @ curv))

