"""Matplotlib renderings of the CLI reports.

Each function draws one figure and returns it; :func:`save` writes PNGs with
the volatile metadata stripped so reruns produce identical files.
matplotlib is imported lazily: the numerical modules do not depend on it.
"""

from __future__ import annotations

import numpy as np

_STYLE = {
    "figure.figsize": (7.0, 4.2),
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(_STYLE)
    return plt


def save(fig, path) -> None:
    fig.savefig(path, format="png", metadata={"Software": None})
    _pyplot().close(fig)


def decomposition_figure(decomp, reference_diff=None):
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True)
    t = decomp.source.times
    ax1.plot(t, decomp.source.values, lw=0.9, label="series")
    ax1.plot(t, decomp.trend.values, lw=1.2, label="trend")
    ax1.legend(frameon=False)
    ax1.set_title(f"HP decomposition, lambda = {decomp.lam:g}")
    ax2.plot(t, decomp.cycle.values, lw=0.9, color="tab:blue", label="cycle")
    if reference_diff is not None:
        ax2.plot(t, reference_diff.values, lw=0.9, color="tab:red", label="cycle - reference")
        ax2.legend(frameon=False)
    ax2.axhline(0.0, color="0.6", lw=0.6)
    ax2.set_xlabel("year")
    ax2.set_ylabel("cycle")
    fig.tight_layout()
    return fig


def spectrum_figure(spectrum, classified=(), bands=()):
    plt = _pyplot()
    fig, ax = plt.subplots()
    f = spectrum.frequencies[1:]
    ax.semilogy(f, np.maximum(spectrum.power[1:], 1e-300), lw=0.9)
    for band in bands:
        lo = 0.0 if np.isinf(band.period_max) else 1.0 / band.period_max
        ax.axvspan(lo, 1.0 / band.period_min, alpha=0.08, color="tab:gray")
    for item in classified:
        pk = item.peak
        ax.plot(pk.frequency, pk.power, "v", color="tab:red", ms=5)
        ax.annotate(f"{pk.period:.3g} y\n{item.band}", (pk.frequency, pk.power),
                    textcoords="offset points", xytext=(4, 4), fontsize=7)
    ax.set_xlabel("frequency (cycles/year)")
    ax.set_ylabel("power")
    ax.set_title(f"Periodogram ({spectrum.method.get('detrend', '?')} detrend)")
    fig.tight_layout()
    return fig


def bandpass_figure(series, filtered):
    plt = _pyplot()
    fig, ax = plt.subplots()
    ax.plot(series.times, series.values - series.values.mean(), lw=0.8, color="0.5", label="demeaned input")
    ax.plot(filtered.times, filtered.values, lw=1.1, label="band-pass output")
    ax.set_xlabel("year")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def products_figure(spectrum, products):
    plt = _pyplot()
    fig, ax = plt.subplots()
    amp = np.sqrt(2.0 * spectrum.power * spectrum.df)
    amp[0] = np.sqrt(spectrum.power[0] * spectrum.df)
    ax.plot(spectrum.frequencies, amp, lw=0.8, label="measured")
    for p in products:
        ax.plot([p.frequency, p.frequency], [0, p.amplitude], color="tab:red", lw=1.0)
        ax.annotate(p.kind, (p.frequency, p.amplitude), textcoords="offset points",
                    xytext=(2, 3), fontsize=6, rotation=60)
    ax.set_xlim(0, max(p.frequency for p in products) * 1.15 + spectrum.df)
    ax.set_xlabel("frequency (cycles/year)")
    ax.set_ylabel("amplitude")
    ax.set_title("Predicted products (red) vs measured spectrum")
    fig.tight_layout()
    return fig


def kerr_figure(result):
    plt = _pyplot()
    fig, ax = plt.subplots()
    floor = 1e-300
    ax.semilogy(result.input_spectrum.frequencies, np.maximum(result.input_spectrum.power, floor),
                lw=0.8, color="0.5", label="input")
    ax.semilogy(result.spectrum.frequencies, np.maximum(result.spectrum.power, floor), lw=0.9, label="modulated")
    top = result.input_spectrum.power.max()
    ax.set_ylim(top * 1e-8, top * 3)
    ax.set_xlabel("frequency (cycles/year)")
    ax.set_ylabel("power")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def raman_figure(traj):
    plt = _pyplot()
    fig, ax = plt.subplots()
    ax.plot(traj.t, traj.p_high, label="P_high (shorter cycle)")
    ax.plot(traj.t, traj.p_low, label="P_low (longer cycle)")
    ax.plot(traj.t, traj.total, "--", color="0.5", lw=0.8, label="total")
    ax.set_xlabel("years")
    ax.set_ylabel("power")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def phase_average_figure(records, averages, version):
    plt = _pyplot()
    fig, ax = plt.subplots()
    labels = [f"{r.wave_number}{r.phase}" for r in records]
    x = np.arange(len(records))
    ax.bar(x - 0.2, [r.rate(version) for r in records], width=0.4, label="table")
    ax.bar(x + 0.2, averages, width=0.4, label="series")
    ax.set_xticks(x, labels)
    ax.set_ylabel("average growth (%/year)")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig
