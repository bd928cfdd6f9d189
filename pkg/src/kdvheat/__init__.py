"""Hadamard heat-kernel coefficients of L = d^2 + u from KdV tau-functions."""
from .errors import (
    ConfigParseError,
    DenominatorZero,
    DiagonalEvaluation,
    DuplicateWavenumber,
    KdvHeatError,
    NotMultiplicationOperator,
    QuadratureNotConverged,
    TruncationExceeded,
    UnsupportedLevel,
    UnsupportedTauType,
)
from .expr import EvalPoint, RatExpExpression, RatioPoly, TauExpression, evaluate, potential
from .polynomial import Poly
from .tau import (
    ExpPoly,
    ExpPolyTerm,
    LinearPhase,
    TauFunction,
    differentiate,
    free_tau,
    make_rational_tau,
    make_soliton,
)

__version__ = "0.1.0"
