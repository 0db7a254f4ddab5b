"""Generalized Bell matrices: exact construction, Yang-Baxter checks,
spectral structure, unitary evolution and the induced quadratic algebras."""

from .bell import BellFamily, UnsupportedKindError, build_B, build_M, build_q, ghz_generate
from .linalg import IndexSpace, Operator, StateVector
from .report import VerificationReport
from .scalar import PhaseScalar

__all__ = [
    "BellFamily",
    "IndexSpace",
    "Operator",
    "PhaseScalar",
    "StateVector",
    "UnsupportedKindError",
    "VerificationReport",
    "build_B",
    "build_M",
    "build_q",
    "ghz_generate",
]

__version__ = "0.1.0"
