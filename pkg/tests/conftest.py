"""Session fixtures: the bundled snapshot, derived cohorts, and one shared
pair of end-to-end forecast runs (expensive, reused by several tests)."""

from __future__ import annotations

import os
import time

import pytest

from casecast import (
    apply_filter,
    builtin_filters,
    bundled_snapshot_path,
    fit_peak_models,
    load_snapshot,
    summarize_snapshot,
)
from casecast.cli import main as cli_main


@pytest.fixture(scope="session", autouse=True)
def _no_ambient_config():
    """Keep a developer's SSM_CONFIG from leaking into the suite."""
    old = os.environ.pop("SSM_CONFIG", None)
    yield
    if old is not None:
        os.environ["SSM_CONFIG"] = old


@pytest.fixture(scope="session")
def snapshot():
    return load_snapshot(bundled_snapshot_path())


@pytest.fixture(scope="session")
def summaries(snapshot):
    return summarize_snapshot(snapshot, 7)


@pytest.fixture(scope="session")
def cohorts(snapshot, summaries):
    return {
        spec.id: apply_filter(snapshot, spec, summaries=summaries)
        for spec in builtin_filters()
    }


@pytest.fixture(scope="session")
def regressions(cohorts):
    return {fid: fit_peak_models(cohort, fid) for fid, cohort in cohorts.items()}


@pytest.fixture(scope="session")
def india_runs(tmp_path_factory):
    """Two identical full-pipeline runs of ``forecast --target India``.

    Returns the first run's wall time and, per run, the paths of the CSV,
    SVG, and JSON artifacts.
    """
    root = tmp_path_factory.mktemp("forecast")
    runs = []
    first_seconds = None
    for i in (1, 2):
        out = root / f"run{i}" / "india.csv"
        plot = root / f"run{i}" / "india.svg"
        fit = root / f"run{i}" / "india_fit.json"
        out.parent.mkdir()
        t0 = time.perf_counter()
        rc = cli_main(
            [
                "forecast",
                "--target",
                "India",
                "--out",
                str(out),
                "--plot",
                str(plot),
                "--dump-fit",
                str(fit),
            ]
        )
        elapsed = time.perf_counter() - t0
        assert rc == 0
        if first_seconds is None:
            first_seconds = elapsed
        runs.append(
            {"csv": out, "svg": plot, "json": out.with_suffix(".json"), "fit": fit}
        )
    return {"first_seconds": first_seconds, "runs": runs}
