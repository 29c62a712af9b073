"""Exception types shared across the package.

Everything raised on purpose derives from TractForgeError so the CLI can
separate expected failures (bad input, exit 2) from bugs (exit 3).
"""


class TractForgeError(Exception):
    """Base class for all deliberate errors."""


class EmptySequence(TractForgeError):
    """A frame sequence was empty or too short to use."""


class DegenerateChannel(TractForgeError):
    """A sensor channel showed no usable range during calibration."""

    def __init__(self, index: int, span: float = 0.0):
        self.index = index
        self.span = span
        super().__init__(f"channel {index} is degenerate (raw span {span:g})")


class LayoutMismatch(TractForgeError):
    """A channel layout references a channel index that does not exist."""


class ParseError(TractForgeError):
    """A gesture or calibration file failed to parse."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CalibrationMissing(TractForgeError):
    """Replay was requested without calibration data."""


class BadDimension(TractForgeError):
    """A station or point count is below the supported minimum."""


class TooFewPoints(TractForgeError):
    """Spline fitting needs at least 4 control points."""


class OutOfDomain(TractForgeError):
    """A curve was evaluated outside its x domain."""


class DomainMismatch(TractForgeError):
    """Palate and tongue curves do not share the same x domain."""


class ConvergenceFailure(TractForgeError):
    """An iterative solve hit its iteration cap without converging."""


class TooShort(TractForgeError):
    """Not enough audio for the requested analysis."""


class UnstableFrame(TractForgeError):
    """No analysis frame produced usable resonance estimates."""


class AudioFormatError(TractForgeError):
    """A WAV file is unreadable or not in the supported format."""
