"""Exception types shared across the package."""


class SocialTrackError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(SocialTrackError, ValueError):
    """An argument lies outside its documented domain."""


class FormatError(SocialTrackError, ValueError):
    """An input stream violates the ingest format (fatal)."""


class ConfigError(SocialTrackError, ValueError):
    """A configuration file is invalid or names unknown keys."""


class IntegrationError(SocialTrackError, ArithmeticError):
    """The ODE integrator left the admissible region; retry with a smaller step."""


class InputError(SocialTrackError, OSError):
    """An input source could not be read."""


class FrameProcessingError(SocialTrackError, RuntimeError):
    """Per-frame analytics failed; the message carries the frame context."""
