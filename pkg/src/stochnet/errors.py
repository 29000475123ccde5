"""Exception taxonomy shared across the package."""

from __future__ import annotations


class StochnetError(Exception):
    """Base class for all package errors."""


class InvalidParameter(StochnetError):
    """A scalar parameter is outside its legal range."""


class ZeroTotalStrength(StochnetError):
    """The total out-strength is zero, so the mean-field weights are undefined."""


class IsolatedSpecies(StochnetError):
    """A species has degree zero, which breaks the degree trade-off."""


class ParseError(StochnetError):
    """A data file does not match its schema. Carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NonFiniteState(StochnetError):
    """A drift or diffusion evaluation produced inf or nan."""


class DegreeTooHigh(StochnetError):
    """Requested polynomial degree exceeds the conditioning cap."""


class NonFiniteSample(StochnetError):
    """A function being fitted returned inf or nan at a sample node."""


class BlowUp(StochnetError):
    """A trajectory exceeded the magnitude guard during integration."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class TooFewRealizations(StochnetError):
    """An ensemble statistic needs more surviving realizations than it got."""


class DegenerateScale(StochnetError):
    """A normalization denominator is zero."""


class DimensionMismatch(StochnetError):
    """Array shapes do not agree."""


class MissingManifest(StochnetError):
    """A run directory has no manifest file."""


class ConfigError(StochnetError):
    """An experiment config failed validation. Message names the offending key."""
