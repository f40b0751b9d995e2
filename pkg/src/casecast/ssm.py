"""Mean-ratio calibration between the rising and falling edges of epidemic
curves, curve synthesis for a target country, and the end-to-end forecast.

The cohort teaches us one number: the average ratio of rising-edge mean to
falling-edge mean across countries whose outbreak already peaked. Dividing
the target's rising-edge mean by that ratio predicts its falling-edge mean
(the "bias"), which pins down the scale of the synthesized decline. A
seasonal ARIMA fit to the synthesized curve then yields the smoothed final
forecast.
"""

from __future__ import annotations

import warnings
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .errors import (
    CalibrationError,
    DegenerateCohortError,
    ParameterError,
    PipelineError,
)
from .filters import PeakSummary, detect_peak
from .ingest import CountrySeries, smooth
from .regression import PeakPrediction, PeakRegression, predict_targets
from .sarimax import (
    DEFAULT_ORDER,
    DEFAULT_SEASONAL_ORDER,
    SarimaxFit,
    SarimaxSpec,
    fit as sarimax_fit,
    in_sample_predictions,
)

DEFAULT_HORIZON = 400

# Bounds for the day-over-day decay ratio used when the mirrored rising edge
# runs out before the horizon does.
DECAY_RATIO_MIN = 0.5
DECAY_RATIO_MAX = 0.999

BIAS_MODES = ("multiplicative", "additive")


@dataclass(frozen=True)
class SsmCalibration:
    """Cohort-level mean of rising/falling edge ratios (one per country)."""

    filter_id: str
    per_country_ratios: tuple[tuple[str, float], ...]
    mean_ratio: float
    n_countries: int


@dataclass(frozen=True)
class Forecast:
    """Final output for one target under one cohort filter.

    ``daily_predicted`` is the model-smoothed daily curve; day 0 is the
    target's first reported case. peak_day, peak_value and total_cases are
    all read off that curve. ``synthesized`` keeps the pre-smoothing curve
    for inspection and plotting.
    """

    filter_id: str
    target_country: str
    daily_predicted: np.ndarray
    peak_day: int
    peak_value: float
    total_cases: float
    bias: float
    first_case_date: date
    synthesized: np.ndarray | None
    mean_ratio: float
    target_converged: bool
    sarimax: SarimaxFit | None = None

    @property
    def horizon(self) -> int:
        return len(self.daily_predicted)

    def dates(self) -> list[date]:
        return [self.first_case_date + timedelta(days=i) for i in range(self.horizon)]


@contextmanager
def _stage(name: str):
    """Tag pipeline errors with the stage they came from."""
    try:
        yield
    except PipelineError as exc:
        if hasattr(exc, "add_note"):
            exc.add_note(f"pipeline stage: {name}")
        raise


def calibrate(
    cohort: list[tuple[CountrySeries, PeakSummary]],
    filter_id: str = "",
) -> SsmCalibration:
    """Average the per-country rising/falling mean ratios over a cohort.

    A cohort member with a zero falling-edge mean makes its ratio undefined
    and raises DegenerateCohortError; a non-positive average raises
    CalibrationError.
    """
    if not cohort:
        raise CalibrationError("cannot calibrate on an empty cohort")
    ratios = []
    for _, summary in cohort:
        if summary.falling_mean <= 0:
            raise DegenerateCohortError(
                f"{summary.country}: falling-edge mean is "
                f"{summary.falling_mean}, ratio undefined",
                country=summary.country,
            )
        ratios.append((summary.country, summary.rising_mean / summary.falling_mean))
    mean_ratio = float(np.mean([r for _, r in ratios]))
    if mean_ratio <= 0:
        raise CalibrationError(f"mean ratio {mean_ratio} is not positive")
    return SsmCalibration(
        filter_id=filter_id,
        per_country_ratios=tuple(ratios),
        mean_ratio=mean_ratio,
        n_countries=len(ratios),
    )


def compute_bias(target_rising_mean: float, calibration: SsmCalibration) -> float:
    """Predicted falling-edge mean for the target: its rising-edge mean
    divided by the cohort's mean ratio."""
    if target_rising_mean < 0:
        raise ParameterError("rising mean must be non-negative")
    if calibration.mean_ratio <= 0:
        raise CalibrationError(
            f"mean ratio {calibration.mean_ratio} is not positive"
        )
    return target_rising_mean / calibration.mean_ratio


def _observed_smoothed(target: CountrySeries, window: int) -> tuple[np.ndarray, date]:
    start = target.first_case_index()
    if start is None:
        raise ParameterError(f"{target.name}: no cases reported, nothing to forecast")
    first_case_date = target.start_date + timedelta(days=int(start))
    observed = smooth(target.daily_new_cases[start:].astype(np.float64), window)
    return observed, first_case_date


def _synthesize(
    observed: np.ndarray,
    peak_day: int,
    peak_value: float,
    mean_ratio: float,
    horizon: int,
    mode: str,
) -> tuple[np.ndarray, float, float]:
    """Core construction; returns (curve, rising_mean, bias).

    The curve keeps the observed values, ramps linearly up to the predicted
    peak, then mirrors the rising edge around the peak day; when the mirror
    runs out of rising-edge history it decays geometrically at its terminal
    day-over-day ratio, clamped to a sane band. The whole falling edge is
    then adjusted in one step so its mean equals the bias: rescaled in
    "multiplicative" mode, shifted in "additive" mode. Values are clamped
    at zero. A peak day inside the observed window replaces the observed
    tail with the mirrored decline.
    """
    if mode not in BIAS_MODES:
        raise ParameterError(f"mode must be one of {BIAS_MODES}, got {mode!r}")
    if peak_day < 1:
        raise ParameterError("peak day must be >= 1")
    if horizon <= peak_day + 1:
        raise ParameterError(
            f"horizon {horizon} leaves no falling edge after peak day {peak_day}"
        )
    if mean_ratio <= 0:
        raise CalibrationError(f"mean ratio {mean_ratio} is not positive")

    n_obs = min(len(observed), horizon)
    curve = np.zeros(horizon)
    curve[:n_obs] = observed[:n_obs]

    # Rising edge: linear ramp from the last observed value to the predicted
    # peak. A peak predicted inside the observed window leaves the data alone.
    if peak_day >= n_obs:
        base = curve[n_obs - 1]
        span = peak_day - (n_obs - 1)
        for t in range(n_obs, min(peak_day, horizon - 1) + 1):
            curve[t] = base + (peak_value - base) * (t - (n_obs - 1)) / span

    rising_mean = float(np.mean(curve[: peak_day + 1]))
    bias = rising_mean / mean_ratio

    # Falling edge: mirror the rising edge about the peak, then decay.
    ratio = None
    for t in range(peak_day + 1, horizon):
        src = 2 * peak_day - t
        if src >= 0:
            curve[t] = curve[src]
        else:
            if ratio is None:
                prev, prev2 = curve[t - 1], curve[t - 2]
                ratio = prev / prev2 if prev2 > 0 and prev > 0 else DECAY_RATIO_MIN
                ratio = min(max(ratio, DECAY_RATIO_MIN), DECAY_RATIO_MAX)
            curve[t] = curve[t - 1] * ratio

    falling = curve[peak_day + 1 :]
    falling_raw_mean = float(np.mean(falling))
    if mode == "multiplicative":
        if falling_raw_mean <= 0:
            raise CalibrationError("synthesized falling edge has non-positive mean")
        curve[peak_day + 1 :] = falling * (bias / falling_raw_mean)
    else:
        curve[peak_day + 1 :] = falling + (bias - falling_raw_mean)
    return np.maximum(curve, 0.0), rising_mean, bias


def synthesize_curve(
    target: CountrySeries,
    prediction: PeakPrediction,
    calibration: SsmCalibration,
    horizon: int = DEFAULT_HORIZON,
    window: int = 7,
    mode: str = "multiplicative",
) -> np.ndarray:
    """Full-horizon daily curve for the target built from its smoothed
    observations, the predicted peak, and the calibrated mean ratio."""
    observed, _ = _observed_smoothed(target, window)
    curve, _, _ = _synthesize(
        observed,
        prediction.peak_day,
        prediction.peak_value,
        calibration.mean_ratio,
        horizon,
        mode,
    )
    return curve


def _package(
    filter_id: str,
    target: CountrySeries,
    predicted: np.ndarray,
    bias: float,
    first_case_date: date,
    synthesized: np.ndarray | None,
    mean_ratio: float,
    converged: bool,
    fitted: SarimaxFit | None = None,
) -> Forecast:
    return Forecast(
        filter_id=filter_id,
        target_country=target.name,
        daily_predicted=predicted,
        peak_day=int(np.argmax(predicted)),
        peak_value=float(np.max(predicted)),
        total_cases=float(np.sum(predicted)),
        bias=bias,
        first_case_date=first_case_date,
        synthesized=synthesized,
        mean_ratio=mean_ratio,
        target_converged=converged,
        sarimax=fitted,
    )


def run_ssm(
    target: CountrySeries,
    cohort: list[tuple[CountrySeries, PeakSummary]],
    models: PeakRegression,
    spec: SarimaxSpec | None = None,
    horizon: int = DEFAULT_HORIZON,
    window: int = 7,
    bias_mode: str = "multiplicative",
) -> Forecast:
    """Forecast one target country from a fitted cohort.

    Calibrates the mean ratio on the cohort, predicts the target's peak with
    the regression models, synthesizes the full curve, and smooths it with a
    seasonal ARIMA fit. A target whose curve already converged is returned
    as-is (observed smoothed curve, no synthesis) with a warning.
    """
    if spec is None:
        spec = SarimaxSpec(order=DEFAULT_ORDER, seasonal_order=DEFAULT_SEASONAL_ORDER)
    with _stage("calibrate"):
        calibration = calibrate(cohort, models.filter_id)
    observed, first_case_date = _observed_smoothed(target, window)

    # A target too short or too flat to summarise simply is not converged.
    summary = None
    try:
        summary = detect_peak(target, window)
    except PipelineError:
        pass
    if summary is not None and summary.converged:
        warnings.warn(
            f"{target.name} has already converged; returning its observed curve",
            stacklevel=2,
        )
        return _package(
            models.filter_id,
            target,
            observed.copy(),
            0.0,
            first_case_date,
            observed.copy(),
            calibration.mean_ratio,
            True,
        )

    with _stage("predict_targets"):
        prediction = predict_targets(models, target)
    with _stage("synthesize_curve"):
        curve, _, bias = _synthesize(
            observed,
            prediction.peak_day,
            prediction.peak_value,
            calibration.mean_ratio,
            horizon,
            bias_mode,
        )
    with _stage("sarimax_fit"):
        fitted = sarimax_fit(curve, spec)
        predicted = np.maximum(in_sample_predictions(fitted), 0.0)
    return _package(
        models.filter_id,
        target,
        predicted,
        bias,
        first_case_date,
        curve,
        calibration.mean_ratio,
        False,
        fitted,
    )


def average_forecasts(forecasts: list[Forecast]) -> Forecast:
    """Pointwise mean of several forecasts for one target; peak and total
    statistics are recomputed from the averaged curve."""
    if not forecasts:
        raise ParameterError("cannot average zero forecasts")
    target = forecasts[0].target_country
    if any(f.target_country != target for f in forecasts):
        raise ParameterError("can only average forecasts of one target")
    horizon = forecasts[0].horizon
    if any(f.horizon != horizon for f in forecasts):
        raise ParameterError(
            "can only average forecasts sharing one horizon, got "
            + ", ".join(str(f.horizon) for f in forecasts)
        )
    predicted = np.mean([f.daily_predicted for f in forecasts], axis=0)
    return Forecast(
        filter_id="average",
        target_country=target,
        daily_predicted=predicted,
        peak_day=int(np.argmax(predicted)),
        peak_value=float(np.max(predicted)),
        total_cases=float(np.sum(predicted)),
        bias=float(np.mean([f.bias for f in forecasts])),
        first_case_date=min(f.first_case_date for f in forecasts),
        synthesized=None,
        mean_ratio=float(np.mean([f.mean_ratio for f in forecasts])),
        target_converged=all(f.target_converged for f in forecasts),
    )


def forecast_to_csv(forecasts: list[Forecast]) -> str:
    """One CSV with a block of rows per forecast, in the given order.

    Columns: day_index, date, filter_id, predicted_new_cases. Numbers use
    six significant digits.
    """
    if not forecasts:
        raise ParameterError("no forecasts to serialize")
    lines = ["day_index,date,filter_id,predicted_new_cases"]
    for fc in forecasts:
        for i, day in enumerate(fc.dates()):
            lines.append(
                f"{i},{day.isoformat()},{fc.filter_id},{fc.daily_predicted[i]:.6g}"
            )
    return "\n".join(lines) + "\n"


def _summary_entry(fc: Forecast, r_squared: float | None) -> dict:
    return {
        "filter_id": fc.filter_id,
        "peak_day": fc.peak_day,
        "peak_value": round(fc.peak_value, 6),
        "total_cases": round(fc.total_cases, 6),
        "r_squared": None if r_squared is None else round(r_squared, 6),
    }


def forecast_summary(
    per_filter: list[Forecast],
    average: Forecast | None = None,
    r_squared_by_filter: dict[str, float] | None = None,
) -> dict:
    """JSON-ready digest: one entry per filter plus the average.

    r_squared_by_filter maps filter ids to the peak-value regression's
    in-sample score; the average entry carries no score.
    """
    if not per_filter:
        raise ParameterError("no forecasts to summarize")
    scores = r_squared_by_filter or {}
    return {
        "target": per_filter[0].target_country,
        "per_filter": [
            _summary_entry(fc, scores.get(fc.filter_id)) for fc in per_filter
        ],
        "average": None if average is None else _summary_entry(average, None),
    }
