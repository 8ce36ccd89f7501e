"""Reference computations used to check the production code.

Each oracle reaches its answer by a different route than the code under test:
dense elimination instead of a banded Cholesky solve, an explicit sum instead of
a convolution, a multinomial expansion with exact fractions instead of signed
enumeration in floating point, and so on.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def dense_hp_trend(y, lam):
    """Solve (I + lam K'K) g = y with a dense LU solve."""
    y = np.asarray(y, dtype=float)
    T = len(y)
    K = np.zeros((T - 2, T))
    for i in range(T - 2):
        K[i, i : i + 3] = (1.0, -2.0, 1.0)
    A = np.eye(T) + lam * K.T @ K
    return np.linalg.solve(A, y)


def ideal_bandpass_weights(period_min, period_max, step, K):
    """Truncated ideal weights plus the zero-sum shift, written out term by term."""
    wl = 2 * math.pi * step / period_max if math.isfinite(period_max) else 0.0
    wh = 2 * math.pi * step / period_min
    b = []
    for j in range(-K, K + 1):
        if j == 0:
            b.append((wh - wl) / math.pi)
        else:
            b.append((math.sin(wh * j) - math.sin(wl * j)) / (math.pi * j))
    shift = -sum(b) / (2 * K + 1)
    return [v + shift for v in b]


def frequency_response(weights, f, step=1.0):
    """|sum_j w_j exp(-i 2 pi f j step)| by explicit summation."""
    K = (len(weights) - 1) // 2
    acc = 0j
    for j, w in zip(range(-K, K + 1), weights):
        acc += w * complex(math.cos(2 * math.pi * f * j * step), -math.sin(2 * math.pi * f * j * step))
    return abs(acc)


def sinusoid_amplitude(t, x, f):
    """Least-squares amplitude of the cos/sin pair at frequency ``f`` (plus a constant)."""
    t = np.asarray(t, dtype=float)
    X = np.column_stack([np.cos(2 * np.pi * f * t), np.sin(2 * np.pi * f * t), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(X, np.asarray(x, dtype=float), rcond=None)
    return float(math.hypot(coef[0], coef[1]))


def symmetric_logistic(t):
    """P_low(t) for P_h(0) = P_l(0) = 1, gain 1."""
    return 2.0 / (1.0 + math.exp(-2.0 * t))


def trig_expansion(amplitudes, coeffs):
    """Exact output components of sum_n a_n x**n for x = sum_i A_i cos(theta_i).

    Uses the multinomial theorem on ``(A_i/2)(z_i + 1/z_i)`` with rational
    arithmetic. Returns ``{combination: amplitude}`` where ``combination`` is the
    integer multiple of each theta (first non-zero entry positive) and the
    amplitude is that of the real cosine at that combination (all phases zero).
    """
    A = [Fraction(a) for a in amplitudes]
    m = len(A)
    acc: dict[tuple, Fraction] = {}
    for n, a in coeffs.items():
        a = Fraction(a)
        if a == 0:
            continue
        # distribute n factors over 2m symbols (z_i and 1/z_i)
        for counts in _compositions(n, 2 * m):
            mult = Fraction(math.factorial(n))
            term = a
            vec = []
            for i in range(m):
                p, q = counts[2 * i], counts[2 * i + 1]
                mult /= math.factorial(p) * math.factorial(q)
                term *= (A[i] / 2) ** (p + q)
                vec.append(p - q)
            key = tuple(vec)
            acc[key] = acc.get(key, Fraction(0)) + mult * term
    out = {}
    for vec, c in acc.items():
        if c == 0:
            continue
        first = next((v for v in vec if v), 0)
        if first < 0:
            continue
        out[vec] = c if first == 0 else 2 * c
    return out


def _compositions(n, parts):
    for cut in itertools.combinations(range(n + parts - 1), parts - 1):
        prev, counts = -1, []
        for c in cut:
            counts.append(c - prev - 1)
            prev = c
        counts.append(n + parts - 1 - prev - 1)
        yield counts
