"""Parse, validate, impute, and smooth country-level daily case snapshots.

The canonical CSV schema (UTF-8, header required, columns accepted in any
order) is::

    date,country,continent,population,population_density,total_cases,
    total_deaths,recovered,active_cases

``date`` is ISO-8601, counts are non-negative integers, and an empty cell
means missing. Missing days inside a country's range are forward-filled and
downward revisions of the cumulative count are clamped up to the previous
value, so the stored cumulative series is always non-decreasing.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date, timedelta
from importlib import resources

import numpy as np

from .errors import EmptyInputError, ParameterError, RowError, SchemaError

REQUIRED_COLUMNS = ("date", "country", "population", "total_cases")

CANONICAL_COLUMNS = (
    "date",
    "country",
    "continent",
    "population",
    "population_density",
    "total_cases",
    "total_deaths",
    "recovered",
    "active_cases",
)

BUNDLED_SNAPSHOT = "snapshot_2020.csv"


@dataclass(eq=False)
class CountrySeries:
    """One country's metadata plus aligned daily cumulative and new-case series.

    ``daily_new_cases[0]`` equals ``cumulative_cases[0]``; later entries are the
    clamped first differences of the (repaired) cumulative series, so every
    entry is non-negative and the series lengths always agree.
    """

    name: str
    continent: str
    population: int
    population_density: float
    start_date: date
    cumulative_cases: np.ndarray
    daily_new_cases: np.ndarray = field(default=None)  # type: ignore[assignment]
    cumulative_deaths: np.ndarray | None = None
    recovered: np.ndarray | None = None

    def __post_init__(self):
        if self.population <= 0:
            raise ParameterError(f"{self.name}: population must be positive")
        self.cumulative_cases = np.asarray(self.cumulative_cases, dtype=np.int64)
        if self.cumulative_cases.size < 1:
            raise ParameterError(f"{self.name}: empty series")
        if self.daily_new_cases is None:
            self.daily_new_cases = daily_from_cumulative(self.cumulative_cases)
        else:
            self.daily_new_cases = np.asarray(self.daily_new_cases, dtype=np.int64)
        for series in (self.daily_new_cases, self.cumulative_deaths, self.recovered):
            if series is not None and len(series) != self.n_days:
                raise ParameterError(f"{self.name}: series lengths disagree")

    @property
    def n_days(self) -> int:
        return len(self.cumulative_cases)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=self.n_days - 1)

    @property
    def final_cumulative(self) -> int:
        return int(self.cumulative_cases[-1])

    @property
    def cases_per_million(self) -> float:
        return self.final_cumulative * 1e6 / self.population

    def first_case_index(self) -> int | None:
        """Index of the first day with a reported case, or None if all zero."""
        nz = np.nonzero(self.cumulative_cases)[0]
        return int(nz[0]) if nz.size else None


@dataclass(eq=False)
class Snapshot:
    """Immutable collection of CountrySeries keyed by name, all ending on as_of_date."""

    countries: dict[str, CountrySeries]
    as_of_date: date

    def __len__(self) -> int:
        return len(self.countries)


def daily_from_cumulative(cumulative: np.ndarray) -> np.ndarray:
    """Daily new cases: first entry is the first cumulative value, rest are
    clamped-at-zero first differences."""
    cumulative = np.asarray(cumulative)
    daily = np.empty_like(cumulative)
    daily[0] = cumulative[0]
    if len(cumulative) > 1:
        daily[1:] = np.maximum(np.diff(cumulative), 0)
    return daily


def impute(values) -> np.ndarray:
    """Repair a raw cumulative series: forward-fill missing entries (None),
    backfill a missing head with 0, and clamp dips up to the running maximum.

    Total on any nonempty input; idempotent.
    """
    if len(values) == 0:
        raise ParameterError("cannot impute an empty series")
    out = []
    prev = 0
    for v in values:
        if v is None:
            out.append(prev)
        else:
            prev = max(prev, v)
            out.append(prev)
    arr = np.asarray(out)
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(np.int64)
    return arr.astype(np.float64)


def smooth(series, window: int) -> np.ndarray:
    """Centered moving average with the window truncated at the boundaries.

    ``window`` must be odd and no longer than the series; the output has the
    same length as the input and stays inside [min(input), max(input)].
    """
    x = np.asarray(series, dtype=np.float64)
    n = len(x)
    if window < 1 or window % 2 == 0:
        raise ParameterError(f"window must be odd and >= 1, got {window}")
    if window > n:
        raise ParameterError(f"window {window} exceeds series length {n}")
    if window == 1:
        return x.copy()
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(x)))
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, n)
    return (csum[hi] - csum[lo]) / (hi - lo)


def _parse_int(cell: str, what: str, line: int) -> int | None:
    if cell == "":
        return None
    try:
        value = int(cell)
    except ValueError:
        raise RowError(f"invalid {what}: {cell!r}", line) from None
    if value < 0:
        raise RowError(f"negative {what}: {value}", line)
    return value


def parse_snapshot(csv_text: str) -> Snapshot:
    """Parse a snapshot CSV into one CountrySeries per country.

    Rows are grouped per country and sorted by date, calendar gaps are filled
    by imputation, every series is extended to the latest date in the file,
    and daily new cases are derived from the repaired cumulative counts.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInputError("no data rows: input is empty") from None
    header = [h.strip() for h in header]
    col = {name: i for i, name in enumerate(header)}
    for required in REQUIRED_COLUMNS:
        if required not in col:
            raise SchemaError(f"missing required column: {required}")

    def cell(row: list[str], name: str) -> str:
        i = col.get(name)
        if i is None or i >= len(row):
            return ""
        return row[i].strip()

    has_deaths = "total_deaths" in col
    has_recovered = "recovered" in col

    # per country: metadata plus {date: (cases, deaths, recovered)}
    meta: dict[str, tuple[str, int, float]] = {}
    rows: dict[str, dict[date, tuple[int | None, int | None, int | None]]] = {}
    n_rows = 0
    for line_no, row in enumerate(reader, start=2):
        if not row or all(c.strip() == "" for c in row):
            continue
        n_rows += 1
        name = cell(row, "country")
        if not name:
            raise RowError("empty country name", line_no)
        try:
            day = date.fromisoformat(cell(row, "date"))
        except ValueError:
            raise RowError(f"unparseable date: {cell(row, 'date')!r}", line_no) from None
        population = _parse_int(cell(row, "population"), "population", line_no)
        if population is None or population == 0:
            raise RowError("population must be a positive integer", line_no)
        density = 0.0
        if cell(row, "population_density"):
            try:
                density = float(cell(row, "population_density"))
            except ValueError:
                raise RowError(
                    f"invalid population_density: {cell(row, 'population_density')!r}",
                    line_no,
                ) from None
            if density < 0:
                raise RowError(f"negative population_density: {density}", line_no)
        cases = _parse_int(cell(row, "total_cases"), "total_cases", line_no)
        deaths = _parse_int(cell(row, "total_deaths"), "total_deaths", line_no) if has_deaths else None
        recov = _parse_int(cell(row, "recovered"), "recovered", line_no) if has_recovered else None
        if name not in meta:
            meta[name] = (cell(row, "continent"), population, density)
            rows[name] = {}
        rows[name][day] = (cases, deaths, recov)

    if n_rows == 0:
        raise EmptyInputError("no data rows")

    as_of = max(max(d.keys()) for d in rows.values())
    countries: dict[str, CountrySeries] = {}
    for name, day_map in rows.items():
        continent, population, density = meta[name]
        start = min(day_map.keys())
        span = (as_of - start).days + 1
        raw_cases: list[int | None] = [None] * span
        raw_deaths: list[int | None] = [None] * span
        raw_recov: list[int | None] = [None] * span
        for day, (cases, deaths, recov) in day_map.items():
            i = (day - start).days
            raw_cases[i] = cases
            raw_deaths[i] = deaths
            raw_recov[i] = recov
        cumulative = impute(raw_cases)
        countries[name] = CountrySeries(
            name=name,
            continent=continent,
            population=population,
            population_density=density,
            start_date=start,
            cumulative_cases=cumulative,
            cumulative_deaths=impute(raw_deaths) if has_deaths else None,
            recovered=impute(raw_recov) if has_recovered else None,
        )
    return Snapshot(countries=countries, as_of_date=as_of)


def serialize_snapshot(snapshot: Snapshot) -> str:
    """Canonical CSV form: fixed column order, countries sorted by name,
    rows chronological. parse_snapshot(serialize_snapshot(s)) round-trips."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for name in sorted(snapshot.countries):
        c = snapshot.countries[name]
        for i in range(c.n_days):
            day = c.start_date + timedelta(days=i)
            deaths = "" if c.cumulative_deaths is None else int(c.cumulative_deaths[i])
            recov = "" if c.recovered is None else int(c.recovered[i])
            writer.writerow(
                [
                    day.isoformat(),
                    c.name,
                    c.continent,
                    c.population,
                    f"{c.population_density:g}",
                    int(c.cumulative_cases[i]),
                    deaths,
                    recov,
                    "",
                ]
            )
    return out.getvalue()


def load_snapshot(path) -> Snapshot:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_snapshot(fh.read())


def bundled_snapshot_path():
    """Path to the snapshot file shipped with the package."""
    return resources.files(__package__) / "data" / BUNDLED_SNAPSHOT
