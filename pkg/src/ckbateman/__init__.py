"""Exact and numerical checks for the damped harmonic oscillator, the
Caldirola-Kanai Hamiltonian and the Bateman dual system."""

from .scalarring import GaussianRational, ScalarPoly
from .timecoeff import ExpPoly
from .weylop import VarSpace, WeylOp, commutator
from .liealg import LieTable, jacobi_check, verify_realization

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "ScalarPoly",
    "ExpPoly",
    "VarSpace",
    "WeylOp",
    "commutator",
    "LieTable",
    "jacobi_check",
    "verify_realization",
]
