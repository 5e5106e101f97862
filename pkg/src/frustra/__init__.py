"""Frustration, entanglement, and classical correlations in degenerate
ground states of spin-1/2 models."""

from .errors import CapacityError, NumericalError, ValidationError
from .model import Bond, SpinModel, build_hamiltonian, local_term, partial_transpose
from .eigen import GroundSpace, eig_hermitian, ground_space, mmgs, partial_trace
from .metrics import (
    FF,
    INES,
    NON_INES,
    Classification,
    FrustrationRecord,
    analyze_state,
    epsilon_d,
    frustration,
)

__version__ = "0.1.0"

__all__ = [
    "Bond",
    "CapacityError",
    "Classification",
    "FF",
    "FrustrationRecord",
    "GroundSpace",
    "INES",
    "NON_INES",
    "NumericalError",
    "SpinModel",
    "ValidationError",
    "analyze_state",
    "build_hamiltonian",
    "eig_hermitian",
    "epsilon_d",
    "frustration",
    "ground_space",
    "local_term",
    "mmgs",
    "partial_trace",
    "partial_transpose",
]
