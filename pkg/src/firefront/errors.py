"""Exception hierarchy shared across the package.

Every error raised by firefront derives from FirefrontError so callers
(and the CLI) can separate domain failures from programming bugs.
"""


class FirefrontError(Exception):
    """Base class for all firefront domain errors."""


class GeometryError(FirefrontError):
    """Degenerate or invalid planar geometry (too few vertices, wrong
    orientation, self-intersection, non-finite coordinates)."""


class DegenerateSpreadError(FirefrontError):
    """Spread-rate inputs that cannot produce a growth shape
    (zero total spread, invalid ellipse parameters)."""


class PropagationError(FirefrontError):
    """Front propagation failed. Carries the zero-based step index."""

    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index


class DisconnectedRegionError(FirefrontError):
    """Union of growth frames fell apart into disjoint pieces. Lists which
    frame indices ended up in each piece so the caller can add bridging
    anchors."""

    def __init__(self, message: str, components: list[list[int]]):
        super().__init__(message)
        self.components = components


class CalibrationError(FirefrontError):
    """Regression calibration could not run (too few rows, bad values)."""


class SingularFitError(CalibrationError):
    """Design matrix is rank deficient. Names the collinear columns."""

    def __init__(self, message: str, columns: list[str]):
        super().__init__(message)
        self.columns = columns


class TrackingError(FirefrontError):
    """Front extraction or displacement measurement failed."""


class UnknownLabelError(FirefrontError):
    """A fuel or moisture class label outside the documented enumerations."""


class ParseError(FirefrontError):
    """Malformed input file. Carries position info when available."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class MissingColumnError(ParseError):
    """A required CSV column is absent from the header."""


class ConfigError(FirefrontError):
    """Scenario configuration is invalid or incomplete."""


class ScenarioError(FirefrontError):
    """A scenario run failed at a given step."""

    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index


class ExpressionError(FirefrontError):
    """A rate expression could not be parsed or evaluated."""
