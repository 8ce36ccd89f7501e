import numpy as np
import pytest

pytest.importorskip("matplotlib")

from bizcycles import (  # noqa: E402
    NonlinearMedium,
    TimeSeries,
    Tone,
    builtin_phase_growth,
    classify_peaks,
    find_peaks,
    hp_filter,
    kerr_phase_modulation,
    periodogram,
    predict_products,
    raman_transfer,
)
from bizcycles.cli import main  # noqa: E402
from bizcycles import plotting  # noqa: E402


def test_figures_render(tmp_path):
    t = np.arange(120.0)
    s = TimeSeries(1900, 1, 0.1 * t + np.sin(2 * np.pi * t / 9))
    d = hp_filter(s, 100)
    spec = periodogram(s, detrend="mean")
    figs = {
        "d.png": plotting.decomposition_figure(d, d.cycle),
        "s.png": plotting.spectrum_figure(spec, classify_peaks(find_peaks(spec, 5))),
        "p.png": plotting.products_figure(spec, predict_products([Tone(1, 0.1)], NonlinearMedium(a3=1))),
        "k.png": plotting.kerr_figure(kerr_phase_modulation([Tone(1, 0.1)], 1.0, "SPM", 0, 100, 0.25)),
        "r.png": plotting.raman_figure(raman_transfer(1, 1, 1, 1, 0.01)),
        "a.png": plotting.phase_average_figure(builtin_phase_growth(), [1.0] * 7, 1),
    }
    for name, fig in figs.items():
        plotting.save(fig, tmp_path / name)
        assert (tmp_path / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_plot_flag(tmp_path):
    src = tmp_path / "s.csv"
    t = 1950 + 0.25 * np.arange(100)
    src.write_text("".join(f"{float(a)!r},{float(np.sin(a))!r}\n" for a in t))
    out = tmp_path / "o"
    assert main(["decompose", str(src), "--plot", "--out", str(out)]) == 0
    first = (out / "decomposition.png").read_bytes()
    assert main(["decompose", str(src), "--plot", "--out", str(out)]) == 0
    assert (out / "decomposition.png").read_bytes() == first
    assert main(["decompose", str(src), "--out", str(tmp_path / "np")]) == 0
    assert not (tmp_path / "np" / "decomposition.png").exists()
