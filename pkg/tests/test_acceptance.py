"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or ``python tests/test_acceptance.py`` for the lines alone.
"""

import math
import time

import numpy as np
import pytest

from bizcycles import (
    JUGLAR,
    NonlinearMedium,
    TimeSeries,
    Tone,
    apply_bandpass,
    apply_polynomial,
    bandpass_weights,
    brillouin_reflect,
    builtin_chronology,
    builtin_phase_growth,
    classify_peaks,
    classify_period,
    find_peaks,
    harmonic_ratio_test,
    hp_filter,
    kerr_phase_modulation,
    periodogram,
    predict_products,
    raman_transfer,
    synthesize,
)
from bizcycles.chronology import Chronology, growth_table_from_json, growth_table_json
from bizcycles.cli import main as cli_main
from bizcycles.spectral import detrend_values
from oracles import dense_hp_trend, frequency_response, sinusoid_amplitude, symmetric_logistic

RESULTS: dict[int, str] = {}
NOISE_FLOOR = 1e-12  # relative power floor separating simulated lines from rounding ripple


def report(number, title, checks):
    """Record and print the verdict for one criterion, then fail if any check failed."""
    failed = [name for name, ok in checks if not ok]
    verdict = "PASS" if not failed else "FAIL"
    detail = "" if not failed else "  failed: " + "; ".join(failed)
    line = f"[{verdict}] #{number:>2} {title}{detail}"
    RESULTS[number] = line
    print(line)
    assert not failed, line


def test_01_hp_oracle_equivalence():
    rng = np.random.default_rng(2024)
    cases = [(int(rng.integers(10, 201)), float(rng.choice([6.25, 100.0, 1600.0]))) for _ in range(50)]
    series = [rng.normal(size=T).cumsum() for T, _ in cases]
    start = time.perf_counter()
    trends = [hp_filter(TimeSeries(0, 1, y), lam).trend.values for y, (_, lam) in zip(series, cases)]
    elapsed = time.perf_counter() - start
    worst = max(np.max(np.abs(g - dense_hp_trend(y, lam))) for g, y, (_, lam) in zip(trends, series, cases))
    report(1, f"HP banded vs dense: max|dg|={worst:.2e}, {elapsed * 1e3:.1f} ms", [
        ("max-abs trend difference <= 1e-8", worst <= 1e-8),
        ("runtime < 1 s", elapsed < 1.0),
    ])


def test_02_hp_limit_laws():
    y = np.random.default_rng(3).normal(size=80)
    zero = hp_filter(TimeSeries(0, 1, y), 0.0).cycle.values
    t = np.arange(150.0)
    line = 12.5 + 0.8 * t
    big = hp_filter(TimeSeries(0, 1, line), 1e12).cycle.values
    ratio = np.max(np.abs(big)) / np.max(np.abs(line))
    report(2, f"HP limits: lambda=0 cycle zero, lambda=1e12 line max|c|/max|y|={ratio:.1e}", [
        ("lambda=0 cycle exactly zero", bool(np.all(zero == 0.0))),
        ("lambda=1e12 linear cycle <= 1e-6 max|y|", ratio <= 1e-6),
    ])


def test_03_quarterly_sine_recovery():
    t = 0.25 * np.arange(200)
    truth = np.sin(2 * np.pi * t / 8)
    y = TimeSeries(1960, 0.25, 100 + 0.5 * t + truth)
    start = time.perf_counter()
    cycle = hp_filter(y, 1600).cycle.values
    elapsed = time.perf_counter() - start
    corr = float(np.corrcoef(cycle, truth)[0, 1])
    report(3, f"8-year quarterly sine, lambda=1600: corr={corr:.4f}, {elapsed * 1e3:.2f} ms", [
        ("correlation >= 0.95", corr >= 0.95),
        ("runtime < 0.1 s", elapsed < 0.1),
    ])


def test_04_fwm_signature():
    start = time.perf_counter()
    tones = [Tone(1.0, 0.10), Tone(1.0, 0.14)]
    medium = NonlinearMedium(a1=0.0, a3=1.0)
    spec = periodogram(apply_polynomial(synthesize(tones, 0.0, 1000.0, 0.25), medium), detrend="none")
    peaks = [p.frequency for p in find_peaks(spec, 0.0, NOISE_FLOOR)]
    predicted = {p.kind: p for p in predict_products(tones, medium)}
    elapsed = time.perf_counter() - start
    checks = []
    for kind, f in (("FWM_low", 0.06), ("FWM_high", 0.18)):
        near = min(peaks, key=lambda x: abs(x - f))
        measured = spec.amplitude(spec.nearest_bin(f))
        pred = predicted[kind].amplitude
        checks += [
            (f"{kind} peak within one bin of {f}", abs(near - f) <= spec.df),
            (f"{kind} predicted amplitude 0.75*a3", pred == 0.75),
            (f"{kind} measured within 2% of prediction", abs(measured - pred) <= 0.02 * pred),
        ]
    checks.append(("runtime < 1 s", elapsed < 1.0))
    report(4, f"FWM two-tone products at 0.06/0.18, {elapsed * 1e3:.0f} ms", checks)


def test_05_third_harmonic():
    tone = [Tone(1.0, 1 / 54)]
    out = apply_polynomial(synthesize(tone, 0.0, 54.0 * 20, 1.0), NonlinearMedium(a1=1.0, a3=1.0))
    spec = periodogram(out, detrend="mean")
    labelled = classify_peaks(find_peaks(spec, 0.0, NOISE_FLOOR))
    h18 = [c for c in labelled if abs(c.peak.period - 18.0) <= 1e-9]
    prods = predict_products(tone, NonlinearMedium(a1=1.0, a3=1.0))
    test = harmonic_ratio_test(1 / 54, 1 / 18, 3, 0.05)
    report(5, f"54-year tone, cubic medium: 18-year product -> {h18[0].band if h18 else 'missing'}, ratio {test.ratio!r}", [
        ("product at period 18 predicted", any(p.kind == "Harmonic3" and abs(1 / p.frequency - 18) < 1e-9 for p in prods)),
        ("measured peak at period 18", len(h18) == 1),
        ("18-year peak labelled Kuznets", bool(h18) and h18[0].band == "Kuznets"),
        ("ratio exactly 3.0", test.ratio == 3.0),
        ("harmonic test passes", test.passed),
    ])


def test_06_conservation():
    tones = [Tone(1.0, 0.10), Tone(0.8, 0.13, 0.5)]
    drifts = []
    for mode in ("SPM", "XPM"):
        for kappa in (0.5, 2.0):
            r = kerr_phase_modulation(tones, kappa, mode, 0.0, 500.0, 0.25)
            before = r.input_spectrum.total_power
            drifts.append(abs(r.spectrum.total_power - before) / before)
    traj = raman_transfer(1.0, 1.0, 1.0, 10.0, 0.001)
    steps = len(traj.t) - 1
    raman_drift = float(np.max(np.abs(traj.total - 2.0)))
    logistic = max(abs(traj.p_low[int(round(t / 0.001))] - symmetric_logistic(t)) for t in (1, 5, 10))
    rng = np.random.default_rng(6)
    amplified = 0
    for _ in range(500):
        f = float(rng.uniform(0.01, 1.0))
        m = NonlinearMedium(sbs_reflectivity=float(rng.uniform(0, 1)), sbs_doppler_shift=float(rng.uniform(0, 0.99 * f)))
        inc = Tone(float(rng.uniform(0, 5)), f)
        amplified += brillouin_reflect(inc, m).power > inc.power
    report(6, f"Conservation: Kerr drift {max(drifts):.1e}, Raman drift {raman_drift:.1e} over {steps} steps, "
              f"logistic err {logistic:.1e}", [
        ("SPM/XPM total-power drift <= 1e-6", max(drifts) <= 1e-6),
        ("Raman P_h+P_l drift <= 1e-9 over 1e4 steps", steps == 10_000 and raman_drift <= 1e-9),
        ("Raman symmetric case matches logistic within 1e-6", logistic <= 1e-6),
        ("Brillouin never amplifies", amplified == 0),
    ])


def test_07_bandpass_contract():
    w = bandpass_weights(JUGLAR, 1.0, 12)
    n = 300
    t = np.arange(n, dtype=float)

    def measured_gain(period):
        out = apply_bandpass(TimeSeries(0, 1, np.sin(2 * np.pi * t / period)), JUGLAR, 12)
        return sinusoid_amplitude(out.times, out.values, 1 / period)

    g10, g4 = measured_gain(10.0), measured_gain(4.0)
    oracle10 = frequency_response(w.weights, 0.1)
    report(7, f"Juglar K=12: sum(w)={w.weights.sum():.1e}, gain(10y)={g10:.4f} (oracle {oracle10:.4f}), "
              f"gain(4y)={g4:.4f}", [
        ("weights sum to 0 within 1e-12", abs(w.weights.sum()) <= 1e-12),
        ("10-year amplitude ratio in [0.85, 1.1]", 0.85 <= g10 <= 1.1),
        ("10-year ratio matches frequency-response oracle within 1%", abs(g10 - oracle10) <= 0.01 * oracle10),
        ("4-year sine attenuated to <= 0.2", g4 <= 0.2),
    ])


def test_08_parseval():
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(20):
        n = int(rng.integers(16, 600))
        step = float(rng.choice([0.25, 1.0]))
        y = TimeSeries(1900, step, rng.normal(size=n).cumsum() + rng.normal(size=n))
        detrend = ("mean", "linear", "hp")[i % 3]
        lam = 1600.0 if step == 0.25 else 100.0
        x = detrend_values(y, detrend, lam)
        spec = periodogram(y, detrend=detrend, lam=lam)
        worst = max(worst, abs(spec.total_power - np.var(x)) / np.var(x))
    report(8, f"Parseval on 20 random series: worst relative error {worst:.1e}", [
        ("sum(power)*df equals detrended variance within 1e-9", worst <= 1e-9),
    ])


def test_09_table_fidelity():
    recs = {(r.wave_number, r.phase): r for r in builtin_phase_growth()}
    spots = [
        (recs[(2, "A_end")].rate_v1, 2.09), (recs[(2, "B")].rate_v1, 1.68), (recs[(3, "B")].rate_v2, 0.98),
        (recs[(4, "A")].rate_v1, 4.84), (recs[(4, "B")].rate_v1, 3.05), (recs[(5, "A")].rate_v1, 3.49),
        (recs[(5, "A")].rate_v2, 3.42),
    ]
    growth_rows = [
        ((2, "A_end"), (1871, 1875), (1871, 1875), 2.09, 2.09), ((2, "B"), (1876, 1894), (1876, 1894), 1.68, 1.68),
        ((3, "A"), (1895, 1913), (1895, 1929), 2.57, 2.34), ((3, "B"), (1914, 1946), (1930, 1946), 1.50, 0.98),
        ((4, "A"), (1947, 1973), (1947, 1973), 4.84, 4.84), ((4, "B"), (1974, 1991), (1974, 1983), 3.05, 2.88),
        ((5, "A"), (1992, 2007), (1984, 2007), 3.49, 3.42),
    ]
    rows_ok = all(
        (recs[k].years_v1, recs[k].years_v2, recs[k].rate_v1, recs[k].rate_v2) == (y1, y2, r1, r2)
        for k, y1, y2, r1, r2 in growth_rows
    ) and len(recs) == len(growth_rows)
    ch = builtin_chronology()
    dates = [(p.begin_earliest, p.begin_latest, p.end_earliest, p.end_latest) for p in ch.phases]
    expected_dates = [
        (1788, 1792, 1810, 1817), (1810, 1817, 1844, 1851), (1844, 1851, 1870, 1875), (1870, 1875, 1890, 1896),
        (1890, 1896, 1914, 1920), (1914, 1929, 1939, 1950), (1939, 1950, 1968, 1974), (1968, 1974, 1984, 1991),
        (1984, 1991, 2008, 2010), (2008, 2010, None, None),
    ]
    alt = ch.alternates[0]
    text = ch.to_json()
    back = Chronology.from_json(text)
    gtext = growth_table_json()
    report(9, "embedded chronology and growth tables verbatim, JSON round trip", [
        ("growth-rate spot values", all(a == b for a, b in spots)),
        ("every growth-table cell", rows_ok),
        ("chronology date ranges", dates == expected_dates and (alt.begin_earliest, alt.begin_latest) == (1914, 1920)),
        ("open-ended last phase", ch.phases[-1].uncertain_end),
        ("chronology JSON round-trips bit-exactly", back.to_json() == text and back.phases == ch.phases),
        ("growth table JSON round-trips bit-exactly", growth_table_json(growth_table_from_json(gtext)) == gtext),
    ])


def test_10_classification_totality():
    periods = [3, 6.99, 7, 10, 13, 20, 30, 50, 65, 80]
    labels = {p: classify_period(p) for p in periods}
    report(10, "Classification: " + ", ".join(f"{p}->{lab}" for p, lab in labels.items()), [
        ("every period has exactly one label", all(isinstance(v, str) and v for v in labels.values())),
        ("7 -> Juglar", labels[7] == "Juglar"),
        ("30 -> Unclassified", labels[30] == "Unclassified"),
        ("6.99 -> Kitchin", labels[6.99] == "Kitchin"),
    ])


def test_11_linear_invariance():
    rng = np.random.default_rng(11)
    mismatches, extra_products = 0, 0
    for _ in range(10):
        ks = rng.choice(np.arange(5, 1900), size=int(rng.integers(1, 5)), replace=False)
        tones = [Tone(float(rng.uniform(0.1, 3)), k / 1000.0, float(rng.uniform(0, 2 * math.pi))) for k in ks]
        medium = NonlinearMedium(a1=float(rng.uniform(0.1, 4)), a2=0.0, a3=0.0, kerr_kappa=0.0)
        spec = periodogram(apply_polynomial(synthesize(tones, 0.0, 1000.0, 0.25), medium), detrend="none")
        found = {p.frequency for p in find_peaks(spec, 0.0, NOISE_FLOOR)}
        mismatches += found != {t.frequency for t in tones}
        extra_products += sum(p.kind != "Fundamental" for p in predict_products(tones, medium))
    report(11, f"Linear medium: {mismatches} peak-set mismatches, {extra_products} extra predicted products", [
        ("output peak set equals input set exactly", mismatches == 0),
        ("no additional products predicted", extra_products == 0),
    ])


def test_12_cli_determinism(tmp_path):
    t = 1950 + 0.25 * np.arange(160)
    q = tmp_path / "q.csv"
    q.write_text("".join(f"{float(a)!r},{float(100 + a / 10 + np.sin(a))!r}\n" for a in t))
    years = 1000.0 + np.arange(512)
    s = tmp_path / "s.csv"
    s.write_text("".join(f"{float(a)!r},{float(np.sin(2 * np.pi * a / 54) + np.sin(2 * np.pi * a / 18))!r}\n" for a in years))
    commands = {
        "decompose": ["decompose", str(q), "--lambda", "1600"],
        "spectrum": ["spectrum", str(s)],
        "mix": ["mix", "products", "--tone", "1,0.10", "--tone", "1,0.14", "--a3", "1"],
    }
    checks = []
    for name, argv in commands.items():
        snaps = []
        for run in range(2):
            out = tmp_path / f"{name}{run}"
            code = cli_main(argv + ["--out", str(out)])
            snaps.append((code, {p.name: p.read_bytes() for p in sorted(out.iterdir())}))
        checks.append((f"{name} byte-identical", snaps[0][0] == 0 and snaps[0] == snaps[1] and snaps[0][1]))
    report(12, "CLI determinism for decompose/spectrum/mix", checks)


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                pass
    sys.exit(0 if all(line.startswith("[PASS]") for line in RESULTS.values()) else 1)
