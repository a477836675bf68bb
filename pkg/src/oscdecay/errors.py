"""Exception types shared across the package."""


class OscDecayError(Exception):
    """Base class for all package errors."""


class DomainError(OscDecayError, ValueError):
    """A function was evaluated outside its domain (for example at xi = 0)."""


class HypothesisError(OscDecayError, ValueError):
    """The inputs violate a hypothesis needed for an estimate."""


class ParameterRangeError(HypothesisError):
    """A parameter lies outside the interval where an estimate is stated."""


class RegionError(OscDecayError, ValueError):
    """An exponent pair lies outside the admissible region, or the region is empty."""


class ResolutionError(OscDecayError, ValueError):
    """Lattice spacing too coarse for the requested phase increment.

    ``min_spacing`` holds the largest admissible spacing.
    """

    def __init__(self, msg, min_spacing=None):
        super().__init__(msg)
        self.min_spacing = min_spacing


class BudgetError(OscDecayError, RuntimeError):
    """The requested lattice exceeds the point budget."""


class NonConvergenceError(OscDecayError, RuntimeError):
    """A quadrature did not reach its tolerance. ``diagnostics`` is a dict."""

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class UnsupportedOrderError(OscDecayError, ValueError):
    """Bessel order outside the implemented set."""


class FitError(OscDecayError, ValueError):
    """Not enough data to fit an exponent."""


class ConfigError(OscDecayError, ValueError):
    """An experiment configuration failed validation."""
