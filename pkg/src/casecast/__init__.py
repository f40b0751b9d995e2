"""casecast: epidemic case-curve forecasting from country-level snapshots.

The pipeline filters countries whose outbreak curve already peaked and
declined, regresses their peak statistics on demographic features, transfers
the cohort's rising-to-falling mean ratio onto a not-yet-converged target,
and smooths the synthesized curve with a seasonal ARIMA model.
"""

from .config import PipelineConfig, load_config
from .errors import (
    CalibrationError,
    DegenerateCohortError,
    DegeneratePeakError,
    DegenerateTargetError,
    EmptyCohortError,
    EmptyInputError,
    FitFailureError,
    InsufficientDataError,
    ParameterError,
    PipelineError,
    RowError,
    SchemaError,
    SingularDesignError,
    UnknownTargetError,
)
from .filters import (
    FilterSpec,
    PeakSummary,
    apply_filter,
    average_curve,
    builtin_filters,
    detect_peak,
    load_filter_spec,
    summarize_snapshot,
)
from .ingest import (
    CountrySeries,
    Snapshot,
    bundled_snapshot_path,
    impute,
    load_snapshot,
    parse_snapshot,
    serialize_snapshot,
    smooth,
)
from .regression import (
    OlsModel,
    PeakPrediction,
    PeakRegression,
    fit_ols,
    fit_peak_models,
    predict_targets,
)
from .sarimax import (
    KalmanResult,
    SarimaxFit,
    SarimaxParams,
    SarimaxSpec,
    StateSpace,
    build_state_space,
    difference,
    fit,
    fit_to_dict,
    forecast,
    in_sample_predictions,
    kalman_loglik,
    select_order,
    undifference,
)
from .ssm import (
    Forecast,
    SsmCalibration,
    average_forecasts,
    calibrate,
    compute_bias,
    forecast_summary,
    forecast_to_csv,
    run_ssm,
    synthesize_curve,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "CountrySeries",
    "DegenerateCohortError",
    "DegeneratePeakError",
    "DegenerateTargetError",
    "EmptyCohortError",
    "EmptyInputError",
    "FilterSpec",
    "FitFailureError",
    "Forecast",
    "InsufficientDataError",
    "KalmanResult",
    "OlsModel",
    "ParameterError",
    "PeakPrediction",
    "PeakRegression",
    "PeakSummary",
    "PipelineConfig",
    "PipelineError",
    "RowError",
    "SarimaxFit",
    "SarimaxParams",
    "SarimaxSpec",
    "SchemaError",
    "SingularDesignError",
    "Snapshot",
    "SsmCalibration",
    "StateSpace",
    "UnknownTargetError",
    "apply_filter",
    "average_curve",
    "average_forecasts",
    "builtin_filters",
    "build_state_space",
    "bundled_snapshot_path",
    "calibrate",
    "compute_bias",
    "detect_peak",
    "difference",
    "fit",
    "fit_ols",
    "fit_peak_models",
    "fit_to_dict",
    "forecast",
    "forecast_summary",
    "forecast_to_csv",
    "impute",
    "in_sample_predictions",
    "kalman_loglik",
    "load_config",
    "load_filter_spec",
    "load_snapshot",
    "parse_snapshot",
    "predict_targets",
    "run_ssm",
    "select_order",
    "serialize_snapshot",
    "smooth",
    "summarize_snapshot",
    "synthesize_curve",
    "undifference",
]
