"""Snapshot parsing, imputation, and smoothing."""

import numpy as np
import pytest

from casecast import (
    EmptyInputError,
    ParameterError,
    RowError,
    SchemaError,
    impute,
    parse_snapshot,
    serialize_snapshot,
    smooth,
)

HEADER = (
    "date,country,continent,population,population_density,"
    "total_cases,total_deaths,recovered,active_cases"
)


def _csv(*rows):
    return HEADER + "\n" + "\n".join(rows) + "\n"


def test_smooth_identity_window():
    np.testing.assert_array_equal(smooth([1, 2, 3], 1), [1, 2, 3])


def test_smooth_truncated_edges():
    np.testing.assert_allclose(smooth([0, 3, 0], 3), [1.5, 1.0, 1.5])


def test_smooth_constant_series():
    np.testing.assert_array_equal(smooth([2, 2, 2, 2, 2], 5), [2, 2, 2, 2, 2])


def test_smooth_rejects_even_or_oversized_window():
    with pytest.raises(ParameterError):
        smooth([1, 2, 3], 2)
    with pytest.raises(ParameterError):
        smooth([1, 2, 3], 5)


def test_smooth_stays_inside_input_range():
    rng = np.random.default_rng(7)
    for _ in range(25):
        x = rng.integers(0, 1000, size=rng.integers(5, 60))
        for w in (3, 5):
            s = smooth(x, w)
            assert len(s) == len(x)
            assert s.min() >= x.min() - 1e-12
            assert s.max() <= x.max() + 1e-12


def test_impute_forward_fill_and_clamp():
    np.testing.assert_array_equal(
        impute([None, 3, None, 2, 5]), [0, 3, 3, 3, 5]
    )


def test_impute_idempotent():
    rng = np.random.default_rng(11)
    for _ in range(20):
        raw = [
            None if rng.random() < 0.2 else int(v)
            for v in rng.integers(0, 100, size=30)
        ]
        once = impute(raw)
        np.testing.assert_array_equal(impute(once), once)


def test_parse_basic_series_and_daily_differences():
    snap = parse_snapshot(
        _csv(
            "2020-03-01,Aland,Europe,1000,5,10,0,0,10",
            "2020-03-02,Aland,Europe,1000,5,15,0,0,15",
            "2020-03-03,Aland,Europe,1000,5,14,0,0,14",
        )
    )
    c = snap.countries["Aland"]
    np.testing.assert_array_equal(c.cumulative_cases, [10, 15, 15])
    np.testing.assert_array_equal(c.daily_new_cases, [10, 5, 0])
    assert c.cases_per_million == pytest.approx(15_000)


def test_parse_fills_calendar_gaps():
    snap = parse_snapshot(
        _csv(
            "2020-03-01,Gapland,Europe,1000,5,10,,,",
            "2020-03-04,Gapland,Europe,1000,5,40,,,",
        )
    )
    np.testing.assert_array_equal(
        snap.countries["Gapland"].cumulative_cases, [10, 10, 10, 40]
    )


def test_daily_sums_to_final_cumulative_without_repairs():
    snap = parse_snapshot(
        _csv(
            "2020-03-01,Sumland,Europe,1000,5,3,,,",
            "2020-03-02,Sumland,Europe,1000,5,8,,,",
            "2020-03-03,Sumland,Europe,1000,5,20,,,",
        )
    )
    c = snap.countries["Sumland"]
    assert int(c.daily_new_cases.sum()) == c.final_cumulative


def test_round_trip_is_bit_exact(snapshot):
    text = serialize_snapshot(snapshot)
    assert serialize_snapshot(parse_snapshot(text)) == text


def test_missing_required_column():
    with pytest.raises(SchemaError, match="total_cases"):
        parse_snapshot("date,country,population\n2020-03-01,X,1000\n")


def test_row_errors_carry_line_numbers():
    bad = _csv(
        "2020-03-01,Aland,Europe,1000,5,10,,,",
        "not-a-date,Aland,Europe,1000,5,11,,,",
    )
    with pytest.raises(RowError, match="line 3") as err:
        parse_snapshot(bad)
    assert err.value.line == 3


def test_negative_count_rejected():
    with pytest.raises(RowError, match="negative"):
        parse_snapshot(_csv("2020-03-01,Aland,Europe,1000,5,-4,,,"))


def test_header_only_input():
    with pytest.raises(EmptyInputError):
        parse_snapshot(HEADER + "\n")


def test_bundled_snapshot_shape(snapshot):
    assert len(snapshot) == 207
    assert snapshot.as_of_date.isoformat() == "2020-07-21"
    assert all(
        c.end_date == snapshot.as_of_date for c in snapshot.countries.values()
    )
