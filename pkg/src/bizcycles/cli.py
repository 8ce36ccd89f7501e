"""Command-line entry point.

Exit codes: 0 success, 1 I/O failure, 2 validation error. Every command
computes all of its outputs before writing anything, so a validation failure
never leaves partial files behind.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import chronology as chron
from . import export
from .bandpass import UNCLASSIFIED, CycleBand, apply_bandpass, band_by_name, bandpass_weights, with_overrides
from .config import bands_from_config, lambda_for_step, load_config, prominence_threshold, truncation_for_step
from .errors import BizCycleError, ConfigError, DomainError
from .hpfilter import hp_filter
from .medium import (
    NonlinearMedium,
    Tone,
    ToneSet,
    apply_polynomial,
    bandwidth_db,
    brillouin_reflect,
    kerr_phase_modulation,
    predict_products,
    raman_transfer,
    synthesize,
)
from .series import GrowthSeries, growth, load_csv, log_transform
from .spectral import classify_peaks, find_peaks, harmonic_ratio_test, periodogram

log = logging.getLogger("bizcycles")

EXIT_OK, EXIT_IO, EXIT_VALIDATION = 0, 1, 2


class ValidationError(BizCycleError):
    pass


# --- argument helpers ---------------------------------------------------------


def _parse_tone(text: str) -> Tone:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise ValidationError(f"--tone expects AMPLITUDE,FREQUENCY[,PHASE], got {text!r}")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"--tone has a non-numeric field: {text!r}") from None
    return Tone(*nums)


def _parse_band_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    try:
        return float(lo), (math.inf if hi.strip().lower() in ("", "inf") else float(hi))
    except ValueError:
        raise ValidationError(f"band range must be MIN:MAX, got {text!r}") from None


def _tones_from_args(args) -> ToneSet:
    tones = []
    if getattr(args, "tones", None):
        with open(args.tones, encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, list):
            raise ValidationError("--tones file must hold a JSON list")
        for item in doc:
            try:
                tones.append(Tone(item["amplitude"], item["frequency"], item.get("phase", 0.0)))
            except (KeyError, TypeError):
                raise ValidationError(f"bad tone entry {item!r}") from None
    tones += [_parse_tone(t) for t in (args.tone or [])]
    if not tones:
        raise ValidationError("give at least one --tone or a --tones file")
    return ToneSet(tones)


def _medium_from_args(args, cfg) -> NonlinearMedium:
    params = dict(cfg["medium"])
    if getattr(args, "medium", None):
        with open(args.medium, encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ValidationError("--medium file must hold a JSON object")
        unknown = set(doc) - set(params)
        if unknown:
            raise ValidationError(f"unknown medium keys: {sorted(unknown)}")
        params.update(doc)
    for key in ("a1", "a2", "a3"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return NonlinearMedium(**{k: float(v) for k, v in params.items()})


def _pick(value, default):
    return default if value is None else value


def _check_lambda(lam):
    if lam is not None and not (math.isfinite(lam) and lam >= 0):
        raise ValidationError(f"--lambda must be a non-negative number, got {lam}")


def _maybe_plot(args, files_png: dict, make_figures):
    if not args.plot:
        return
    from . import plotting

    for name, fig in make_figures(plotting):
        files_png[name] = fig


def _write(args, files: dict, figures: dict | None = None):
    paths = export.write_outputs(args.out, files)
    if figures:
        from . import plotting

        for name, fig in figures.items():
            path = paths[0].parent / name
            plotting.save(fig, path)
            paths.append(path)
    for p in paths:
        log.info("wrote %s", p)


# --- commands -----------------------------------------------------------------


def cmd_decompose(args, cfg):
    _check_lambda(args.lam)
    series = load_csv(args.input)
    if args.log:
        series = log_transform(series)
    lam = args.lam if args.lam is not None else lambda_for_step(cfg, series.step)
    decomp = hp_filter(series, lam)
    ref_diff = None
    if args.reference:
        ref_diff = decomp.cycle_difference(load_csv(args.reference))

    t = series.times
    cols = [t, series.values, decomp.trend.values, decomp.cycle.values]
    header = ["time", "y", "trend", "cycle"]
    if ref_diff is not None:
        cols.append(ref_diff.values)
        header.append("cycle_minus_reference")
    files = {
        "decomposition.csv": export.columns_csv_text(header, *cols),
        "decomposition.json": export.json_text(
            {"lambda": decomp.lam, "T": len(series), "objective_value": decomp.objective}
        ),
        "cycle.dat": export.dat_text("time cycle", t, decomp.cycle.values),
    }
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("decomposition.png", plt.decomposition_figure(decomp, ref_diff))])
    _write(args, files, figures)


def _resolve_band(text: str, cfg) -> CycleBand:
    if ":" in text:
        lo, hi = _parse_band_range(text)
        return CycleBand("custom", lo, hi)
    return band_by_name(text, bands_from_config(cfg))


def cmd_bandpass(args, cfg):
    series = load_csv(args.input)
    band = _resolve_band(args.band, cfg)
    K = args.truncation if args.truncation is not None else truncation_for_step(cfg, series.step)
    if K < 1:
        raise ValidationError(f"--truncation must be a positive integer, got {K}")
    weights = bandpass_weights(band, series.step, K)
    filtered = apply_bandpass(series, band, K)
    files = {
        "filtered.csv": export.series_csv_text(filtered),
        "weights.csv": export.columns_csv_text(("lag", "weight"), weights.lags, weights.weights),
        "filtered.dat": export.dat_text("time filtered", filtered.times, filtered.values),
    }
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("bandpass.png", plt.bandpass_figure(series, filtered))])
    _write(args, files, figures)


def _band_overrides(items, cfg):
    base = bands_from_config(cfg)
    overrides = {}
    for item in items or []:
        name, sep, rng = item.partition("=")
        if not sep:
            raise ValidationError(f"--band expects NAME=MIN:MAX, got {item!r}")
        overrides[name.strip()] = _parse_band_range(rng)
    return with_overrides(overrides, base) if overrides else base


def cmd_spectrum(args, cfg):
    _check_lambda(args.lam)
    scfg = cfg["spectrum"]
    series = load_csv(args.input)
    bands = _band_overrides(args.band, cfg)
    detrend = _pick(args.detrend, scfg["detrend"])
    lam = args.lam
    if detrend == "hp" and lam is None:
        lam = lambda_for_step(cfg, series.step)
    ratio = prominence_threshold(cfg, len(series), args.min_prominence)
    if ratio < 0:
        raise ValidationError(f"--min-prominence must be >= 0, got {ratio}")
    n_harm = _pick(args.harmonic_n, scfg["harmonic_n"])
    tol = _pick(args.harmonic_tol, scfg["harmonic_tol"])
    if tol < 0:
        raise ValidationError("--harmonic-tol must be >= 0")

    spec = periodogram(
        series,
        detrend=detrend,
        taper=_pick(args.taper, scfg["taper"]),
        lam=lam,
        segments=_pick(args.segments, scfg["segments"]),
        pad=_pick(args.pad, scfg["pad"]),
    )
    classified = classify_peaks(find_peaks(spec, ratio), bands)
    peaks_doc = [{**c.peak.as_dict(), "band": c.band} for c in classified]

    f = spec.frequencies
    with np.errstate(divide="ignore"):
        period = np.where(f > 0, 1.0 / np.where(f > 0, f, 1.0), np.inf)
    files = {
        "spectrum.csv": export.csv_text(
            ("frequency", "period", "power"),
            ((fi, "inf" if not np.isfinite(pi) else pi, pw) for fi, pi, pw in zip(f, period, spec.power)),
        ),
        "peaks.json": export.json_text(
            {"method": spec.method, "min_prominence_ratio": ratio, "peaks": peaks_doc}
        ),
        "spectrum.dat": export.dat_text("frequency power", f, spec.power),
    }
    by_band = {}
    for c in classified:  # strongest first
        by_band.setdefault(c.band, c.peak)
    if "Kondratieff" in by_band and "Kuznets" in by_band:
        lo, hi = by_band["Kondratieff"], by_band["Kuznets"]
        test = harmonic_ratio_test(lo.frequency, hi.frequency, n_harm, tol)
        files["harmonic.json"] = export.json_text(
            {
                "f_low": lo.frequency,
                "f_high": hi.frequency,
                "period_low": lo.period,
                "period_high": hi.period,
                "n": test.n,
                "tol": test.tol,
                "ratio": test.ratio,
                "pass": test.passed,
            }
        )
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("spectrum.png", plt.spectrum_figure(spec, classified, bands))])
    _write(args, files, figures)


def _window(args, cfg):
    mcfg = cfg["mix"]
    return _pick(args.t0, mcfg["t0"]), _pick(args.t1, mcfg["t1"]), _pick(args.dt, mcfg["dt"])


def cmd_mix_products(args, cfg):
    tones = _tones_from_args(args)
    medium = _medium_from_args(args, cfg)
    t0, t1, dt = _window(args, cfg)
    max_order = _pick(args.max_order, cfg["mix"]["max_order"])
    products = predict_products(tones, medium, max_order)
    series = synthesize(tones, t0, t1, dt)
    # the measurement must see every product without aliasing
    top = max(p.frequency for p in products)
    if top > 1.0 / (2.0 * dt):
        raise ValidationError(f"dt={dt} aliases the product at {top} cycles/year; reduce --dt")
    output = apply_polynomial(series, medium)
    spec = periodogram(output, detrend=cfg["mix"]["detrend"])

    bins = [spec.nearest_bin(p.frequency) for p in products]
    rows = []
    for p, k in zip(products, bins):
        measured = spec.amplitude(k)
        rel = abs(measured - p.amplitude) / p.amplitude
        shared = bins.count(k) > 1
        rows.append(
            (p.kind, p.frequency, " ".join(str(c) for c in p.combination), p.amplitude, measured, rel,
             "yes" if shared else "no")
        )
    files = {
        "products.json": export.json_text([p.as_dict() for p in products]),
        "series.csv": export.columns_csv_text(("time", "input", "output"), series.times, series.values, output.values),
        "spectrum.csv": export.columns_csv_text(("frequency", "power"), spec.frequencies, spec.power),
        "comparison.csv": export.csv_text(
            ("kind", "frequency", "combination", "predicted_amplitude", "measured_amplitude",
             "relative_error", "shared_bin"),
            rows,
        ),
    }
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("products.png", plt.products_figure(spec, products))])
    _write(args, files, figures)


def cmd_mix_kerr(args, cfg):
    tones = _tones_from_args(args)
    kappa = args.kappa if args.kappa is not None else cfg["medium"]["kerr_kappa"]
    if kappa < 0:
        raise ValidationError(f"--kappa must be >= 0, got {kappa}")
    t0, t1, dt = _window(args, cfg)
    result = kerr_phase_modulation(tones, kappa, args.mode, t0, t1, dt)
    spec, spec_in = result.spectrum, result.input_spectrum
    summary = {
        "mode": args.mode.upper(),
        "kappa": kappa,
        "input_total_power": spec_in.total_power,
        "output_total_power": spec.total_power,
        "relative_power_drift": abs(spec.total_power - spec_in.total_power) / spec_in.total_power,
        "tone_powers": [float(p) for p in result.tone_powers],
        "bandwidth_20db_input": bandwidth_db(spec_in),
        "bandwidth_20db_output": bandwidth_db(spec),
    }
    files = {
        "kerr_spectrum.csv": export.columns_csv_text(
            ("frequency", "input_power", "output_power"), spec.frequencies, spec_in.power, spec.power
        ),
        "kerr.json": export.json_text(summary),
    }
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("kerr.png", plt.kerr_figure(result))])
    _write(args, files, figures)


def cmd_mix_raman(args, cfg):
    rcfg = cfg["raman"]
    gain = args.gain if args.gain is not None else cfg["medium"]["raman_gain"]
    traj = raman_transfer(
        args.p_high, args.p_low, gain, _pick(args.duration, rcfg["duration"]), _pick(args.dt, rcfg["dt"])
    )
    total = traj.total
    files = {
        "trajectory.csv": export.columns_csv_text(("t", "P_high", "P_low"), traj.t, traj.p_high, traj.p_low),
        "raman.json": export.json_text(
            {
                "gain": gain,
                "max_relative_step": traj.max_relative_step,
                "total_power_drift": float(np.max(np.abs(total - total[0]))),
                "final": {"P_high": traj.p_high[-1], "P_low": traj.p_low[-1]},
            }
        ),
    }
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("raman.png", plt.raman_figure(traj))])
    _write(args, files, figures)


def cmd_mix_brillouin(args, cfg):
    tone = _parse_tone(args.tone)
    params = dict(cfg["medium"])
    if args.reflectivity is not None:
        params["sbs_reflectivity"] = args.reflectivity
    if args.doppler_shift is not None:
        params["sbs_doppler_shift"] = args.doppler_shift
    medium = NonlinearMedium(**params)
    out = brillouin_reflect(tone, medium)
    doc = {
        "incident": {"amplitude": tone.amplitude, "frequency": tone.frequency, "phase": tone.phase},
        "reflected": {"amplitude": out.amplitude, "frequency": out.frequency, "phase": out.phase},
        "power_ratio": (out.power / tone.power) if tone.power > 0 else 0.0,
    }
    _write(args, {"brillouin.json": export.json_text(doc)})


def cmd_chronology_show(args, cfg):
    table = chron.builtin_chronology()
    doc = {
        "chronology": json.loads(table.to_json()),
        "phase_growth": json.loads(chron.growth_table_json()),
    }
    text = export.json_text(doc)
    if args.out:
        _write(args, {"chronology.json": table.to_json() + "\n", "phase_growth.json": chron.growth_table_json() + "\n"})
    else:
        sys.stdout.write(text)


def cmd_chronology_phase_average(args, cfg):
    version = args.version
    series = load_csv(args.input)
    if args.from_levels:
        g = growth(series, "percent-growth")
    else:
        g = GrowthSeries(series.start_time, series.step, series.values, "percent-growth", series.label)
    records = chron.builtin_phase_growth()
    windows = [r.years(version) for r in records]
    averages = chron.phase_average_growth(g, windows)
    doc = {
        "version": version,
        "phases": [
            {
                "wave": r.wave_number,
                "phase": r.phase,
                "years": list(r.years(version)),
                "table_rate": r.rate(version),
                "series_average": avg,
            }
            for r, avg in zip(records, averages)
        ],
    }
    figures = {}
    _maybe_plot(args, figures, lambda plt: [("phase_average.png", plt.phase_average_figure(records, averages, version))])
    _write(args, {"phase_average.json": export.json_text(doc)}, figures)


def cmd_growth(args, cfg):
    series = load_csv(args.input)
    if args.log:
        series = log_transform(series)
    mode = {"absolute": "absolute-difference", "percent": "percent-growth"}[args.mode]
    g = growth(series, mode)
    _write(args, {"growth.csv": export.series_csv_text(g.as_series())})


# --- parser -------------------------------------------------------------------


def _common(p, out_default="."):
    p.add_argument("--out", default=out_default, help="output directory (default: %(default)s)")
    p.add_argument("--config", help=f"JSON config file (else ${'BIZCYCLES_CONFIG'})")
    p.add_argument("--plot", action="store_true", help="also render PNG figures next to the data files")


def _window_args(p):
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--dt", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bizcycles", description="Business-cycle extraction and nonlinear-medium toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="HP trend/cycle decomposition")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", type=float, help="smoothing parameter (default by step)")
    p.add_argument("--reference", help="reference cycle CSV; writes cycle minus reference")
    p.add_argument("--log", action="store_true", help="take natural logs first")
    _common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bandpass", help="Baxter-King band-pass filter")
    p.add_argument("input")
    p.add_argument("--band", default="Juglar", help="band name or MIN:MAX in years")
    p.add_argument("--truncation", type=int, help="lead/lag truncation K in samples")
    _common(p)
    p.set_defaults(func=cmd_bandpass)

    p = sub.add_parser("spectrum", help="periodogram, peaks and band labels")
    p.add_argument("input")
    p.add_argument("--detrend", choices=("none", "mean", "linear", "hp"))
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--taper", choices=("none", "hann"))
    p.add_argument("--segments", type=int)
    p.add_argument("--pad", type=int)
    p.add_argument("--min-prominence", help="ratio to median power, or 'auto'")
    p.add_argument("--band", action="append", help="override a band, NAME=MIN:MAX (repeatable)")
    p.add_argument("--harmonic-n", type=int)
    p.add_argument("--harmonic-tol", type=float)
    _common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("mix", help="nonlinear-medium simulations")
    msub = p.add_subparsers(dest="mix_command", required=True)

    q = msub.add_parser("products", help="predicted vs measured mixing products")
    q.add_argument("--tone", action="append", help="AMPLITUDE,FREQUENCY[,PHASE] (repeatable)")
    q.add_argument("--tones", help="JSON list of tones")
    q.add_argument("--medium", help="JSON medium coefficients")
    q.add_argument("--a1", type=float)
    q.add_argument("--a2", type=float)
    q.add_argument("--a3", type=float)
    q.add_argument("--max-order", type=int, choices=(2, 3))
    _window_args(q)
    _common(q)
    q.set_defaults(func=cmd_mix_products)

    q = msub.add_parser("kerr", help="SPM/XPM phase modulation spectrum")
    q.add_argument("--tone", action="append")
    q.add_argument("--tones")
    q.add_argument("--kappa", type=float)
    q.add_argument("--mode", default="SPM", type=str.upper, choices=("SPM", "XPM"))
    _window_args(q)
    _common(q)
    q.set_defaults(func=cmd_mix_kerr)

    q = msub.add_parser("raman", help="power transfer between two cycles")
    q.add_argument("--p-high", type=float, required=True)
    q.add_argument("--p-low", type=float, required=True)
    q.add_argument("--gain", type=float)
    q.add_argument("--duration", type=float)
    q.add_argument("--dt", type=float)
    _common(q)
    q.set_defaults(func=cmd_mix_raman)

    q = msub.add_parser("brillouin", help="Doppler-shifted reflection of one tone")
    q.add_argument("--tone", required=True)
    q.add_argument("--reflectivity", type=float)
    q.add_argument("--doppler-shift", type=float)
    _common(q)
    q.set_defaults(func=cmd_mix_brillouin)

    p = sub.add_parser("chronology", help="embedded long-wave tables")
    csub = p.add_subparsers(dest="chron_command", required=True)
    q = csub.add_parser("show", help="dump the tables as JSON")
    _common(q, out_default=None)
    q.set_defaults(func=cmd_chronology_show)
    q = csub.add_parser("phase-average", help="average a growth series over the tabulated phases")
    q.add_argument("input", help="CSV of annual growth rates in percent (or levels with --from-levels)")
    q.add_argument("--version", type=int, choices=(1, 2), default=1, help="dating version (default 1)")
    q.add_argument("--from-levels", action="store_true", help="input holds levels; convert to percent growth")
    _common(q)
    q.set_defaults(func=cmd_chronology_phase_average)

    p = sub.add_parser("growth", help="first differences or percent growth")
    p.add_argument("input")
    p.add_argument("--mode", choices=("absolute", "percent"), default="absolute")
    p.add_argument("--log", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_growth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        args.func(args, cfg)
    except (BizCycleError, ConfigError, DomainError) as exc:
        print(f"bizcycles: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"bizcycles: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"bizcycles: error: invalid JSON input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
