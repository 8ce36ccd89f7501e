"""Business-cycle extraction and a simulated nonlinear economic medium.

The numerical core (series handling, HP filter, Baxter-King band-pass,
periodogram analysis, nonlinear mixing, long-wave chronology) depends only on
numpy and scipy. Figures are optional and live in :mod:`bizcycles.plotting`.
"""

from .bandpass import (
    CANONICAL_BANDS,
    GRAND_SUPERCYCLE,
    JUGLAR,
    KITCHIN,
    KONDRATIEFF,
    KUZNETS,
    UNCLASSIFIED,
    CycleBand,
    FilterWeights,
    apply_bandpass,
    band_by_name,
    bandpass_weights,
)
from .chronology import (
    Chronology,
    PhaseGrowthRecord,
    WavePhase,
    builtin_chronology,
    builtin_phase_growth,
    detect_phase,
    phase_average_growth,
    phase_windows,
)
from .errors import (
    BizCycleError,
    ConfigError,
    DomainError,
    NyquistError,
    ParseError,
    RangeError,
    SizeError,
    SpacingError,
)
from .hpfilter import TrendCycleDecomposition, hp_filter, hp_objective
from .medium import (
    KerrResult,
    MixingProduct,
    NonlinearMedium,
    RamanTrajectory,
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
from .series import GrowthSeries, TimeSeries, growth, load_csv, log_transform
from .spectral import (
    HarmonicTest,
    PeakClassification,
    SpectralPeak,
    Spectrum,
    band_power,
    classify_peaks,
    classify_period,
    find_peaks,
    harmonic_ratio_test,
    periodogram,
)

__version__ = "0.1.0"
