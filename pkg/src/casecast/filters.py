"""Peak detection on smoothed daily-case curves and threshold-based cohort
selection.

A country is *converged* when its smoothed daily-case curve has peaked at
least 15 days before the end of the record and the mean of the last 7
smoothed days has dropped below 70% of the peak value. Cohort filters then
intersect convergence with population and cases-per-million thresholds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePeakError,
    EmptyCohortError,
    InsufficientDataError,
    ParameterError,
    SchemaError,
)
from .ingest import CountrySeries, Snapshot, smooth

MIN_OBSERVED_DAYS = 14
CONVERGENCE_TAIL_DAYS = 15
CONVERGENCE_WINDOW = 7
CONVERGENCE_RATIO = 0.7


@dataclass(frozen=True)
class FilterSpec:
    """Strict lower/upper bounds a country must clear to join a cohort."""

    id: str
    min_population: float
    max_peak_day: float
    min_cases_per_million: float

    def __post_init__(self):
        if self.min_population < 0 or self.min_cases_per_million < 0:
            raise ParameterError(f"{self.id}: thresholds must be non-negative")
        if self.max_peak_day <= 0:
            raise ParameterError(f"{self.id}: max_peak_day must be positive")


@dataclass(frozen=True)
class PeakSummary:
    """Peak statistics of one country's smoothed daily-case curve.

    Day indices are measured from the country's first reported case, not from
    the start of its record.
    """

    country: str
    peak_day: int
    peak_value: float
    rising_mean: float
    falling_mean: float
    converged: bool
    n_days: int

    @property
    def ratio(self) -> float:
        """Rising mean over falling mean; defined only for a nonzero tail."""
        if self.falling_mean <= 0:
            raise DegeneratePeakError(
                f"{self.country}: falling mean is zero, ratio undefined"
            )
        return self.rising_mean / self.falling_mean


def builtin_filters() -> tuple[FilterSpec, FilterSpec, FilterSpec]:
    """The three nested cohort filters, loosest to tightest by thresholds."""
    return (
        FilterSpec("F1", 20e6, 140, 500),
        FilterSpec("F2", 10e6, 140, 400),
        FilterSpec("F3", 5.5e6, 150, 100),
    )


def load_filter_spec(path) -> FilterSpec:
    """Read a FilterSpec from a JSON object with the four field names."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise SchemaError("filter file must contain a JSON object")
    missing = [
        k
        for k in ("id", "min_population", "max_peak_day", "min_cases_per_million")
        if k not in raw
    ]
    if missing:
        raise SchemaError(f"filter file missing keys: {', '.join(missing)}")
    try:
        return FilterSpec(
            id=str(raw["id"]),
            min_population=float(raw["min_population"]),
            max_peak_day=float(raw["max_peak_day"]),
            min_cases_per_million=float(raw["min_cases_per_million"]),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"filter file has a non-numeric threshold: {exc}") from None


def detect_peak(country: CountrySeries, window: int = 7) -> PeakSummary:
    """Locate the smoothed peak of a country's daily-case curve and summarise it.

    The curve is trimmed to start at the first reported case, smoothed with a
    centered moving average, and the earliest maximum is taken as the peak.
    The rising mean averages the raw days strictly before the peak; the
    falling mean averages the raw days from the peak onward.
    """
    start = country.first_case_index()
    if start is None:
        raise InsufficientDataError(f"{country.name}: no cases reported")
    raw = country.daily_new_cases[start:].astype(np.float64)
    n = len(raw)
    if n < MIN_OBSERVED_DAYS:
        raise InsufficientDataError(
            f"{country.name}: only {n} observed days, need {MIN_OBSERVED_DAYS}"
        )
    smoothed = smooth(raw, window)
    p = int(np.argmax(smoothed))  # earliest maximum on ties
    if p == 0:
        raise DegeneratePeakError(
            f"{country.name}: smoothed curve peaks on day 0, rising mean undefined"
        )
    peak_value = float(smoothed[p])
    rising_mean = float(np.mean(raw[:p]))
    falling_mean = float(np.mean(raw[p:]))
    tail = float(np.mean(smoothed[-CONVERGENCE_WINDOW:]))
    converged = (p <= n - CONVERGENCE_TAIL_DAYS) and (tail < CONVERGENCE_RATIO * peak_value)
    return PeakSummary(
        country=country.name,
        peak_day=p,
        peak_value=peak_value,
        rising_mean=rising_mean,
        falling_mean=falling_mean,
        converged=converged,
        n_days=n,
    )


def summarize_snapshot(
    snapshot: Snapshot, window: int = 7
) -> dict[str, PeakSummary]:
    """Peak summaries for every country with enough usable data.

    Countries whose curves cannot be summarised (no cases, too few observed
    days, or a day-0 peak) are silently skipped; they can never join a cohort.
    """
    out: dict[str, PeakSummary] = {}
    for name, country in snapshot.countries.items():
        try:
            out[name] = detect_peak(country, window)
        except (InsufficientDataError, DegeneratePeakError):
            continue
    return out


def apply_filter(
    snapshot: Snapshot,
    spec: FilterSpec,
    summaries: dict[str, PeakSummary] | None = None,
    window: int = 7,
) -> list[tuple[CountrySeries, PeakSummary]]:
    """Countries passing ``spec`` with their summaries, largest population first.

    All threshold comparisons are strict. Raises EmptyCohortError when no
    country qualifies.
    """
    if summaries is None:
        summaries = summarize_snapshot(snapshot, window)
    selected = []
    for name, summary in summaries.items():
        country = snapshot.countries[name]
        if (
            country.population > spec.min_population
            and summary.converged
            and summary.peak_day < spec.max_peak_day
            and country.cases_per_million > spec.min_cases_per_million
        ):
            selected.append((country, summary))
    if not selected:
        raise EmptyCohortError(f"filter {spec.id} selected no countries")
    selected.sort(key=lambda pair: (-pair[0].population, pair[0].name))
    return selected


def average_curve(cohort: list[tuple[CountrySeries, PeakSummary]]) -> np.ndarray:
    """Pointwise mean of the cohort's per-million daily curves.

    Each country's raw daily counts are scaled to cases per million, shifted
    so index 0 is its first reported case, and averaged over whichever
    countries still have data at each index; the result spans the longest
    aligned curve.
    """
    if not cohort:
        raise EmptyCohortError("cannot average an empty cohort")
    curves = []
    for country, _ in cohort:
        start = country.first_case_index()
        if start is None:
            raise InsufficientDataError(f"{country.name}: no cases reported")
        scale = 1e6 / country.population
        curves.append(country.daily_new_cases[start:].astype(np.float64) * scale)
    n = max(len(c) for c in curves)
    total = np.zeros(n)
    count = np.zeros(n)
    for c in curves:
        total[: len(c)] += c
        count[: len(c)] += 1.0
    return total / count
