"""Ordinary least squares on standardized features, and the peak-statistic
regressions built on top of it.

Three models are fit per cohort, one each for peak value, peak day, and total
cases, all against population, cases per million, and population density.
Features are z-scored internally for conditioning only; coefficients and the
intercept are mapped back to original units so predictions are a plain dot
product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateTargetError,
    EmptyCohortError,
    ParameterError,
    SingularDesignError,
)
from .filters import PeakSummary
from .ingest import CountrySeries

FEATURE_NAMES = ("population", "cases_per_million", "population_density")

# Singular values below this fraction of the largest are treated as zero.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class OlsModel:
    """Least-squares fit in original units: yhat = intercept + x @ coefficients.

    feature_means and feature_scales record the z-scoring applied while
    solving; predict does not need them, they are kept for reporting and so
    the standardized-space coefficients stay recoverable.
    """

    intercept: float
    coefficients: np.ndarray
    feature_means: np.ndarray
    feature_scales: np.ndarray
    r_squared: float
    n_samples: int
    feature_names: tuple[str, ...]

    def predict(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != len(self.coefficients):
            raise ParameterError(
                f"expected {len(self.coefficients)} features, got {x.shape[1]}"
            )
        return self.intercept + x @ self.coefficients


@dataclass(frozen=True)
class PeakRegression:
    """Peak-value, peak-day, and total-case models fit on one cohort."""

    filter_id: str
    cohort: tuple[str, ...]
    model_peak_value: OlsModel
    model_peak_day: OlsModel
    model_total_cases: OlsModel


@dataclass(frozen=True)
class PeakPrediction:
    """Model outputs for one target country, clamped below at zero."""

    country: str
    peak_value: float
    peak_day: int
    total_cases: float


def fit_ols(x, y, feature_names: tuple[str, ...] | None = None) -> OlsModel:
    """Least squares with internally z-scored features.

    A feature with zero variance or a rank-deficient design raises
    SingularDesignError naming a dependent column; a constant target raises
    DegenerateTargetError.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise ParameterError(f"design {x.shape} and target {y.shape} disagree")
    n, k = x.shape
    if n < k + 1:
        raise ParameterError(f"need at least {k + 1} samples for {k} features, got {n}")
    if feature_names is None:
        feature_names = tuple(f"x{i}" for i in range(k))
    if len(feature_names) != k:
        raise ParameterError("feature_names length does not match design width")

    mean_y = float(np.mean(y))
    ss_tot = float(np.sum((y - mean_y) ** 2))
    if ss_tot == 0.0:
        raise DegenerateTargetError("target is constant; R^2 undefined")

    mu = np.mean(x, axis=0)
    sigma = np.std(x, axis=0)
    for j, s in enumerate(sigma):
        if s == 0.0:
            raise SingularDesignError(
                f"feature {feature_names[j]!r} is constant", column=feature_names[j]
            )
    z = (x - mu) / sigma

    # Augment with the intercept column and solve via SVD so rank deficiency
    # is detected rather than silently resolved.
    design = np.column_stack([np.ones(n), z])
    u, s, vt = np.linalg.svd(design, full_matrices=False)
    rank = int(np.sum(s > RANK_RTOL * s[0]))
    if rank < k + 1:
        # Name a column involved in the dependency: largest weight in the
        # null-space direction, skipping the intercept.
        null_dir = np.abs(vt[-1][1:])
        j = int(np.argmax(null_dir))
        raise SingularDesignError(
            f"design is rank deficient; feature {feature_names[j]!r} is "
            "linearly dependent on the others",
            column=feature_names[j],
        )
    beta_std = vt.T @ ((u.T @ y) / s)
    coef = beta_std[1:] / sigma
    intercept = float(beta_std[0] - np.dot(coef, mu))

    residuals = y - (intercept + x @ coef)
    r_squared = 1.0 - float(np.sum(residuals**2)) / ss_tot
    return OlsModel(
        intercept=intercept,
        coefficients=coef,
        feature_means=mu,
        feature_scales=sigma,
        r_squared=r_squared,
        n_samples=n,
        feature_names=feature_names,
    )


def features_for(country: CountrySeries) -> list[float]:
    """The regression feature vector; cases per million is taken at the end
    of the country's record."""
    return [float(country.population), country.cases_per_million,
            country.population_density]


def fit_peak_models(
    cohort: list[tuple[CountrySeries, PeakSummary]],
    filter_id: str = "",
) -> PeakRegression:
    """Fit the three peak-statistic regressions on one cohort."""
    if not cohort:
        raise EmptyCohortError("cannot fit on an empty cohort")
    if len(cohort) < 4:
        raise ParameterError(
            f"cohort has {len(cohort)} countries; need at least 4 to fit"
        )
    x = np.array([features_for(country) for country, _ in cohort])
    targets = {
        "peak_value": np.array([s.peak_value for _, s in cohort]),
        "peak_day": np.array([float(s.peak_day) for _, s in cohort]),
        "total_cases": np.array(
            [float(c.final_cumulative) for c, _ in cohort]
        ),
    }
    models = {}
    for label, y in targets.items():
        try:
            models[label] = fit_ols(x, y, FEATURE_NAMES)
        except SingularDesignError as exc:
            raise SingularDesignError(
                f"{label} model: {exc}", column=exc.column
            ) from None
        except DegenerateTargetError as exc:
            raise DegenerateTargetError(f"{label} model: {exc}") from None
    return PeakRegression(
        filter_id=filter_id,
        cohort=tuple(c.name for c, _ in cohort),
        model_peak_value=models["peak_value"],
        model_peak_day=models["peak_day"],
        model_total_cases=models["total_cases"],
    )


def predict_targets(models: PeakRegression, target: CountrySeries) -> PeakPrediction:
    """Evaluate all three models at one target country's feature vector.

    The peak day is rounded to the nearest whole day; every output is
    clamped below at zero.
    """
    if target.population <= 0:
        raise ParameterError(f"{target.name}: population must be positive")
    x = np.array(features_for(target))
    value = float(models.model_peak_value.predict(x)[0])
    day = float(models.model_peak_day.predict(x)[0])
    total = float(models.model_total_cases.predict(x)[0])
    return PeakPrediction(
        country=target.name,
        peak_value=max(value, 0.0),
        peak_day=max(int(round(day)), 0),
        total_cases=max(total, 0.0),
    )
