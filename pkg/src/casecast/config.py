"""Pipeline configuration: defaults, JSON file loading, environment fallback.

Precedence, lowest to highest: built-in defaults, the JSON file (either an
explicit path or the one named by the SSM_CONFIG environment variable), then
individual command-line flags.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

from .errors import ParameterError, SchemaError

CONFIG_ENV_VAR = "SSM_CONFIG"

DEFAULT_FILTERS = ("1", "2", "3")


@dataclass(frozen=True)
class PipelineConfig:
    smoothing_window: int = 7
    horizon: int = 400
    order: tuple[int, int, int] = (2, 1, 2)
    seasonal_order: tuple[int, int, int, int] = (1, 0, 1, 7)
    bias_mode: str = "multiplicative"
    filters: tuple[str, ...] = DEFAULT_FILTERS
    seed: int = 0

    def __post_init__(self):
        if self.smoothing_window < 1 or self.smoothing_window % 2 == 0:
            raise ParameterError(
                f"smoothing window must be odd and >= 1, got {self.smoothing_window}"
            )
        if self.horizon < 2:
            raise ParameterError(f"horizon must be >= 2, got {self.horizon}")
        if len(self.order) != 3 or any(v < 0 for v in self.order):
            raise ParameterError(f"order must be three non-negative ints, got {self.order}")
        if len(self.seasonal_order) != 4 or any(v < 0 for v in self.seasonal_order):
            raise ParameterError(
                f"seasonal order must be four non-negative ints, got {self.seasonal_order}"
            )
        if self.bias_mode not in ("multiplicative", "additive"):
            raise ParameterError(f"unknown bias mode {self.bias_mode!r}")
        if not self.filters:
            raise ParameterError("filters must not be empty")


_FIELD_NAMES = {f.name for f in fields(PipelineConfig)}


def _coerce(name: str, value):
    try:
        if name in ("smoothing_window", "horizon", "seed"):
            return int(value)
        if name == "order":
            return tuple(int(v) for v in value)
        if name == "seasonal_order":
            return tuple(int(v) for v in value)
        if name == "bias_mode":
            return str(value)
        if name == "filters":
            return tuple(str(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"config field {name!r}: {exc}") from None
    raise SchemaError(f"unknown config field {name!r}")


def load_config(path: str | None = None) -> PipelineConfig:
    """Build a PipelineConfig from a JSON file.

    With no explicit path, the SSM_CONFIG environment variable is consulted;
    if that is unset too, the defaults are returned. Unknown keys are an
    error so typos do not silently fall back to defaults.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return PipelineConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError("config file must contain a JSON object")
    overrides = {}
    for key, value in raw.items():
        if key not in _FIELD_NAMES:
            raise SchemaError(f"unknown config field {key!r}")
        overrides[key] = _coerce(key, value)
    try:
        return PipelineConfig(**overrides)
    except TypeError as exc:
        raise SchemaError(f"bad config: {exc}") from None


def with_overrides(config: PipelineConfig, **overrides) -> PipelineConfig:
    """Copy of config with any non-None overrides applied."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **changes) if changes else config
