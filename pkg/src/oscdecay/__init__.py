"""Decay estimates for dispersive oscillatory integrals."""

from . import envelope, fitcheck, oscint, phase, propagator, symbol
from .errors import (BudgetError, ConfigError, DomainError, FitError, HypothesisError,
                     NonConvergenceError, OscDecayError, ParameterRangeError, RegionError,
                     ResolutionError, UnsupportedOrderError)
from .kernels import BACKEND
from .oscint import KernelSample, eval_adaptive_1d, eval_hankel, eval_lattice, evaluate
from .phase import PhaseSpec
from .symbol import SymbolSpec

__version__ = "0.1.0"

__all__ = [
    "envelope", "fitcheck", "oscint", "phase", "propagator", "symbol", "BACKEND",
    "KernelSample", "PhaseSpec", "SymbolSpec", "eval_adaptive_1d", "eval_hankel",
    "eval_lattice", "evaluate", "BudgetError", "ConfigError", "DomainError", "FitError",
    "HypothesisError", "NonConvergenceError", "OscDecayError", "ParameterRangeError",
    "RegionError", "ResolutionError", "UnsupportedOrderError",
]
