"""Squeezed-magnon / spin-qubit anisotropic quantum Rabi model."""

from .errors import (AmbiguityError, ConvergenceError, DomainError, ModelError, NotFoundError,
                     ParameterError, SingularityError)
from .hilbert import HilbertSpace, build_space
from .model import (MaterialParams, ModelParams, QubitParams, SqueezeParams, bogoliubov,
                    build_hamiltonian)

__all__ = [
    "AmbiguityError", "ConvergenceError", "DomainError", "ModelError", "NotFoundError",
    "ParameterError", "SingularityError", "HilbertSpace", "build_space", "MaterialParams",
    "ModelParams", "QubitParams", "SqueezeParams", "bogoliubov", "build_hamiltonian",
]
