"""Exception hierarchy for the casecast pipeline.

Every failure mode raised by the library derives from PipelineError so the
CLI can map error families onto stable exit codes.
"""


class PipelineError(Exception):
    """Base class for all casecast errors."""


class SchemaError(PipelineError):
    """Input file violates the expected schema (e.g. a required column is missing)."""


class RowError(PipelineError):
    """A data row could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class EmptyInputError(PipelineError):
    """The input contained no data rows."""


class ParameterError(PipelineError):
    """An argument value is out of range or inconsistent."""


class InsufficientDataError(PipelineError):
    """A series is too short for the requested operation."""


class DegeneratePeakError(PipelineError):
    """Peak detection landed on day 0, leaving the rising mean undefined."""


class EmptyCohortError(PipelineError):
    """A filter selected zero countries; the pipeline cannot train."""


class DegenerateTargetError(PipelineError):
    """Regression target is constant (zero total variance)."""


class SingularDesignError(PipelineError):
    """Regression design matrix is rank deficient; names the offending column."""

    def __init__(self, message: str, column: int | str | None = None):
        super().__init__(message)
        self.column = column


class FitFailureError(PipelineError):
    """Maximum-likelihood estimation failed to produce a usable model."""


class CalibrationError(PipelineError):
    """Mean-ratio calibration is unusable (non-positive mean ratio)."""


class DegenerateCohortError(PipelineError):
    """A cohort member has a zero falling-edge mean; names the country."""

    def __init__(self, message: str, country: str | None = None):
        super().__init__(message)
        self.country = country


class UnknownTargetError(PipelineError):
    """Requested target country is not in the snapshot; carries near misses."""

    def __init__(self, name: str, suggestions: list[str] | None = None):
        hint = f" (did you mean: {', '.join(suggestions)}?)" if suggestions else ""
        super().__init__(f"unknown country {name!r}{hint}")
        self.name = name
        self.suggestions = suggestions or []
