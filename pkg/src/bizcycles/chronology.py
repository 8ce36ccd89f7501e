"""Kondratieff long-wave chronology and phase-average growth rates.

Dates are kept as the ranges in which they were reported (e.g. 1870-1875);
anything that needs a single year takes an explicit ``convention``:
``"earliest"``, ``"latest"`` or ``"midpoint"``.

Embedded data:

* long waves and phases identified by Kondratieff ("kondratieff" table);
* "post-Kondratieff" long waves and phases ("post-kondratieff" table);
* average annual world GDP growth during phases A and B, 1871-2007, in two
  dating versions.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, RangeError
from .series import GrowthSeries

CHRONOLOGY_VERSION = "kondratieff-long-waves/1"
PHASES = ("A_upswing", "B_downswing")
CONVENTIONS = ("earliest", "latest", "midpoint")


@dataclass(frozen=True)
class WavePhase:
    wave_number: int
    phase: str
    begin_earliest: float
    begin_latest: float
    end_earliest: float | None
    end_latest: float | None
    uncertain_end: bool = False
    source_table: str = ""
    note: str = ""

    def __post_init__(self):
        if self.phase not in PHASES:
            raise DomainError(f"phase must be one of {PHASES}")
        if self.begin_earliest > self.begin_latest:
            raise DomainError("begin range is inverted")
        if self.end_earliest is not None:
            if not (self.begin_latest < self.end_earliest <= self.end_latest):
                raise DomainError(f"bad date ranges for wave {self.wave_number} {self.phase}")

    @property
    def has_end(self) -> bool:
        return self.end_earliest is not None

    def begin(self, convention: str) -> float:
        return _resolve(self.begin_earliest, self.begin_latest, convention)

    def end(self, convention: str) -> float | None:
        if not self.has_end:
            return None
        return _resolve(self.end_earliest, self.end_latest, convention)


def _resolve(lo: float, hi: float, convention: str) -> float:
    if convention == "earliest":
        return lo
    if convention == "latest":
        return hi
    if convention == "midpoint":
        return 0.5 * (lo + hi)
    raise DomainError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")


@dataclass(frozen=True)
class Chronology:
    """One phase per (wave, phase) pair, in chronological order.

    ``alternates`` keeps rows that a second table reports differently for the
    same phase; they are not used for lookups.
    """

    phases: tuple
    version: str = CHRONOLOGY_VERSION
    alternates: tuple = ()

    def find(self, wave_number: int, phase: str) -> WavePhase:
        for p in self.phases:
            if p.wave_number == wave_number and p.phase == phase:
                return p
        raise KeyError((wave_number, phase))

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": self.version,
                "phases": [asdict(p) for p in self.phases],
                "alternates": [asdict(p) for p in self.alternates],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Chronology":
        doc = json.loads(text)
        return cls(
            phases=tuple(WavePhase(**p) for p in doc["phases"]),
            version=doc["version"],
            alternates=tuple(WavePhase(**p) for p in doc.get("alternates", ())),
        )


@dataclass(frozen=True)
class PhaseGrowthRecord:
    wave_number: int
    phase: str
    years_v1: tuple
    years_v2: tuple
    rate_v1: float
    rate_v2: float

    def years(self, version: int) -> tuple:
        return {1: self.years_v1, 2: self.years_v2}[_check_version(version)]

    def rate(self, version: int) -> float:
        return {1: self.rate_v1, 2: self.rate_v2}[_check_version(version)]


def _check_version(version: int) -> int:
    if version not in (1, 2):
        raise DomainError(f"table version must be 1 or 2, got {version!r}")
    return version


_K = "kondratieff"
_PK = "post-kondratieff"

_PHASES = (
    WavePhase(1, "A_upswing", 1788, 1792, 1810, 1817, source_table=_K,
              note="begin from prose: 'the end of the 1780s or beginning of the 1790s'"),
    WavePhase(1, "B_downswing", 1810, 1817, 1844, 1851, source_table=_K),
    WavePhase(2, "A_upswing", 1844, 1851, 1870, 1875, source_table=_K),
    WavePhase(2, "B_downswing", 1870, 1875, 1890, 1896, source_table=_K),
    WavePhase(3, "A_upswing", 1890, 1896, 1914, 1920, source_table=f"{_K},{_PK}"),
    WavePhase(3, "B_downswing", 1914, 1929, 1939, 1950, source_table=_PK,
              note="begin 'from 1914 to 1928/29'"),
    WavePhase(4, "A_upswing", 1939, 1950, 1968, 1974, source_table=_PK),
    WavePhase(4, "B_downswing", 1968, 1974, 1984, 1991, source_table=_PK),
    WavePhase(5, "A_upswing", 1984, 1991, 2008, 2010, source_table=_PK,
              note="end reported as '2008-2010?'"),
    WavePhase(5, "B_downswing", 2008, 2010, None, None, uncertain_end=True, source_table=_PK,
              note="begin reported as '2008-2010?', end '?'"),
)

_ALTERNATES = (
    WavePhase(3, "B_downswing", 1914, 1920, None, None, source_table=_K,
              note="end not given in this table"),
)

_GROWTH = (
    PhaseGrowthRecord(2, "A_end", (1871, 1875), (1871, 1875), 2.09, 2.09),
    PhaseGrowthRecord(2, "B", (1876, 1894), (1876, 1894), 1.68, 1.68),
    PhaseGrowthRecord(3, "A", (1895, 1913), (1895, 1929), 2.57, 2.34),
    PhaseGrowthRecord(3, "B", (1914, 1946), (1930, 1946), 1.50, 0.98),
    PhaseGrowthRecord(4, "A", (1947, 1973), (1947, 1973), 4.84, 4.84),
    PhaseGrowthRecord(4, "B", (1974, 1991), (1974, 1983), 3.05, 2.88),
    PhaseGrowthRecord(5, "A", (1992, 2007), (1984, 2007), 3.49, 3.42),
)


def builtin_chronology() -> Chronology:
    return Chronology(phases=_PHASES, alternates=_ALTERNATES)


def builtin_phase_growth() -> list[PhaseGrowthRecord]:
    return list(_GROWTH)


def growth_table_json(records=None) -> str:
    records = builtin_phase_growth() if records is None else records
    return json.dumps([asdict(r) for r in records], indent=2)


def growth_table_from_json(text: str) -> list[PhaseGrowthRecord]:
    out = []
    for r in json.loads(text):
        r["years_v1"] = tuple(r["years_v1"])
        r["years_v2"] = tuple(r["years_v2"])
        out.append(PhaseGrowthRecord(**r))
    return out


def phase_windows(version: int = 1) -> list[tuple[int, int]]:
    return [r.years(version) for r in builtin_phase_growth()]


def phase_average_growth(growth: GrowthSeries, windows) -> list[float]:
    """Mean of the values whose calendar year lies in each ``[start, end]`` window.

    A sample at time ``t`` belongs to year ``floor(t)``, so quarterly data
    average over all four quarters of each year. Sums are correctly rounded
    (``math.fsum``) so a constant plateau averages back to itself exactly.
    """
    years = np.floor(np.asarray(growth.times) + 1e-9)
    lo, hi = years[0], years[-1]
    out = []
    for start, end in windows:
        if end < start:
            raise DomainError(f"window ({start}, {end}) ends before it starts")
        if start < lo or end > hi:
            raise RangeError(f"window ({start}, {end}) outside series span {int(lo)}-{int(hi)}")
        sel = (years >= start) & (years <= end)
        chosen = growth.values[sel]
        out.append(math.fsum(chosen) / len(chosen))
    return out


def detect_phase(year: float, chronology: Chronology | None = None, convention: str = "midpoint"):
    """Phase whose ``[begin, end)`` interval contains ``year``, or ``None``.

    Boundaries are resolved with ``convention``. A phase without a known end
    (Wave 5 B) covers nothing, so years after the last dated boundary return
    ``None``, as do years before the first phase or in a gap between
    inconsistently reported boundaries.
    """
    chronology = builtin_chronology() if chronology is None else chronology
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")
    if not math.isfinite(year):
        return None
    for p in chronology.phases:
        end = p.end(convention)
        if end is None:
            continue
        if p.begin(convention) <= year < end:
            return p
    return None
