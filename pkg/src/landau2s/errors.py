"""Exception types shared across the package.

Validation problems raise subclasses of ValueError so that callers who do not
care about the fine distinction can still catch the usual built-in. Numerical
failures (a fit that cannot certify a bound, a root search that diverges)
raise subclasses of RuntimeError; the command line maps them to exit code 3.
"""


class ParameterError(ValueError):
    """A constructor argument is outside its admissible range."""


class ModeError(ValueError):
    """A spatial mode index is invalid here (k = 0, or outside the table)."""


class DomainError(ValueError):
    """An evaluation point lies outside the object's domain."""


class RangeError(ValueError):
    """Two series do not overlap in time, or a window is empty."""


class ConfigError(ValueError):
    """Config text failed validation. Carries every violation, not just the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NoDecayBoundError(RuntimeError):
    """No exponential envelope could be certified for the sampled signal."""


class DivergenceError(RuntimeError):
    """A transform or scan was requested where its integral does not converge."""


class NoRootError(RuntimeError):
    """Newton iteration failed to locate a dispersion root."""


class InsufficientDataError(RuntimeError):
    """Too few peaks or samples inside the fit window."""


class DataLossError(RuntimeError):
    """A frequency shift pushed non-negligible content off the stored grid."""
