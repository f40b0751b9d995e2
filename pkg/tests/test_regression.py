"""Least squares and the peak-statistic models."""

import numpy as np
import pytest

from casecast import (
    DegenerateTargetError,
    OlsModel,
    ParameterError,
    PeakRegression,
    SingularDesignError,
    fit_ols,
    fit_peak_models,
    predict_targets,
)
from _helpers import make_series
from _oracles import ols_normal_equations


def test_exact_line():
    m = fit_ols(np.array([1.0, 2.0, 3.0]), np.array([2.0, 4.0, 6.0]))
    assert m.coefficients[0] == pytest.approx(2.0)
    assert m.intercept == pytest.approx(0.0, abs=1e-12)
    assert m.r_squared == pytest.approx(1.0)


def test_exact_plane():
    x = np.array([[1, 0], [0, 1], [1, 1], [0, 0]], dtype=float)
    y = np.array([1.0, 2.0, 3.0, 0.0])
    m = fit_ols(x, y)
    assert m.intercept == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(m.coefficients, [1.0, 2.0], atol=1e-12)
    assert m.r_squared == pytest.approx(1.0)
    assert m.predict([1, 1])[0] == pytest.approx(3.0)


def test_predict_at_feature_means_returns_target_mean():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(20, 3))
    y = rng.normal(size=20)
    m = fit_ols(x, y)
    assert m.predict(x.mean(axis=0))[0] == pytest.approx(float(y.mean()))


def test_predict_is_affine():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(15, 2))
    y = rng.normal(size=15)
    m = fit_ols(x, y)
    a, b = rng.normal(size=2), rng.normal(size=2)
    mid = m.predict((a + b) / 2)[0]
    assert mid == pytest.approx((m.predict(a)[0] + m.predict(b)[0]) / 2)


def test_standardization_parameters_recorded():
    rng = np.random.default_rng(5)
    x = rng.normal(loc=[10.0, -3.0], scale=[4.0, 0.5], size=(40, 2))
    m = fit_ols(x, rng.normal(size=40))
    np.testing.assert_allclose(m.feature_means, x.mean(axis=0))
    np.testing.assert_allclose(m.feature_scales, x.std(axis=0))
    assert np.all(m.feature_scales > 0)


def test_matches_gaussian_elimination_oracle():
    rng = np.random.default_rng(6)
    for _ in range(25):
        n = int(rng.integers(6, 30))
        k = int(rng.integers(1, 4))
        x = rng.normal(scale=rng.uniform(0.5, 50), size=(n, k))
        y = x @ rng.normal(size=k) + rng.normal(scale=0.3, size=n)
        m = fit_ols(x, y)
        b0, coef = ols_normal_equations(x, y)
        assert m.intercept == pytest.approx(b0, rel=1e-8, abs=1e-8)
        np.testing.assert_allclose(m.coefficients, coef, rtol=1e-8, atol=1e-10)


def test_r_squared_in_unit_interval():
    rng = np.random.default_rng(8)
    for _ in range(10):
        x = rng.normal(size=(12, 2))
        y = rng.normal(size=12)
        assert 0.0 <= fit_ols(x, y).r_squared <= 1.0


def test_constant_target_rejected():
    with pytest.raises(DegenerateTargetError):
        fit_ols(np.arange(5.0), np.full(5, 3.0))


def test_constant_feature_named():
    x = np.column_stack([np.arange(6.0), np.full(6, 2.0)])
    with pytest.raises(SingularDesignError) as err:
        fit_ols(x, np.arange(6.0), ("a", "b"))
    assert err.value.column == "b"


def test_collinear_feature_named():
    rng = np.random.default_rng(9)
    a = rng.normal(size=8)
    x = np.column_stack([a, 2 * a, rng.normal(size=8)])
    with pytest.raises(SingularDesignError):
        fit_ols(x, rng.normal(size=8))


def test_too_few_samples():
    with pytest.raises(ParameterError):
        fit_ols(np.ones((3, 3)), np.arange(3.0))


def test_constant_model_prediction():
    m = OlsModel(
        intercept=7.0,
        coefficients=np.zeros(3),
        feature_means=np.zeros(3),
        feature_scales=np.ones(3),
        r_squared=0.0,
        n_samples=5,
        feature_names=("population", "cases_per_million", "population_density"),
    )
    models = PeakRegression("X", ("a", "b", "c", "d"), m, m, m)
    pred = predict_targets(models, make_series([1] * 20, population=123))
    assert pred.peak_value == 7.0
    assert pred.peak_day == 7
    assert pred.total_cases == 7.0


def test_predictions_clamped_at_zero():
    m = OlsModel(
        intercept=-50.0,
        coefficients=np.zeros(3),
        feature_means=np.zeros(3),
        feature_scales=np.ones(3),
        r_squared=0.0,
        n_samples=5,
        feature_names=("population", "cases_per_million", "population_density"),
    )
    models = PeakRegression("X", ("a", "b", "c", "d"), m, m, m)
    pred = predict_targets(models, make_series([1] * 20))
    assert pred.peak_value == 0.0
    assert pred.peak_day == 0
    assert pred.total_cases == 0.0


def test_fit_peak_models_needs_four_countries(cohorts):
    with pytest.raises(ParameterError):
        fit_peak_models(cohorts["F1"][:3], "F1")


def test_residual_orthogonality(cohorts, regressions):
    # residuals of each bundled model are orthogonal to the design columns
    from casecast.regression import features_for

    for fid, models in regressions.items():
        x = np.array([features_for(s) for s, _ in cohorts[fid]])
        targets = [
            (models.model_peak_value, [p.peak_value for _, p in cohorts[fid]]),
            (models.model_peak_day, [p.peak_day for _, p in cohorts[fid]]),
            (
                models.model_total_cases,
                [s.final_cumulative for s, _ in cohorts[fid]],
            ),
        ]
        for m, y in targets:
            resid = np.asarray(y, dtype=float) - m.predict(x)
            scale = float(np.abs(y).max())
            centered = x - x.mean(axis=0)
            assert np.all(np.abs(centered.T @ resid) <= 1e-6 * scale * len(y))
            assert abs(resid.sum()) <= 1e-6 * scale * len(y)


def test_bundled_scores_and_ordering(regressions):
    r2 = [regressions[f].model_peak_value.r_squared for f in ("F1", "F2", "F3")]
    assert r2[0] > r2[1] > r2[2]
    assert r2[0] > 0.9
    # all three targets stay well away from noise on every cohort
    for models in regressions.values():
        assert models.model_peak_day.r_squared > 0.5
        assert models.model_total_cases.r_squared > 0.5


def test_india_predictions_monotone(snapshot, regressions):
    india = snapshot.countries["India"]
    preds = [
        predict_targets(regressions[f], india) for f in ("F1", "F2", "F3")
    ]
    values = [p.peak_value for p in preds]
    assert values == sorted(values)
    for p in preds:
        assert 0.7e5 <= p.peak_value <= 1.8e5
        assert 180 <= p.peak_day <= 280
