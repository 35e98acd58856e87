"""asympl: exact + numerical toolkit for Hamiltonian-like vector fields on
almost-symplectic manifolds fibered by Lagrangian tori.

The exact layer (rational polynomials, finite Fourier series, charts,
integer lattices) decides classification questions symbolically; the numeric
layer (scipy-driven integration, rotation numbers, Lyapunov exponents,
Poincare sections) verifies the resulting dynamics.
"""

from .chart import (AATransform, AAVectorField, AlmostSymplecticChart, Box,
                    CTensor, almost_poisson_bracket, apply_transform, c_tensor,
                    divergence, field_commutator, hamiltonian_vector_field,
                    kernel_at)
from .dynamics import (IntegratorConfig, Trajectory, integrate, lyapunov_mle,
                       poincare_section, rotation_numbers)
from .errors import (AsymplError, ClassificationError, DimensionMismatchError,
                     DomainError, IndexRangeError, NumericalError, RegimeError,
                     TransformError, ValidationError)
from .exactalg import Fraction, FourierFunction, RationalPolynomial
from .lattice import (LatticeNormalization, hermite_normal_form,
                      normalize_hamiltonian, saturate_and_complete,
                      smith_normal_form)
from .reduction import (NormalizedSplit, ReducedSystem, SymplectizedSystem,
                        pipeline, reconstruct, reduce, symplectize)
from .spectra import (genericity_check, is_fully_hamiltonian, spectrum,
                      spectrum_at, verify_rank_bound)

__version__ = "0.1.0"

__all__ = [
    "AATransform", "AAVectorField", "AlmostSymplecticChart", "Box", "CTensor",
    "almost_poisson_bracket", "apply_transform", "c_tensor", "divergence",
    "field_commutator", "hamiltonian_vector_field", "kernel_at",
    "IntegratorConfig", "Trajectory", "integrate", "lyapunov_mle",
    "poincare_section", "rotation_numbers",
    "AsymplError", "ClassificationError", "DimensionMismatchError",
    "DomainError", "IndexRangeError", "NumericalError", "RegimeError",
    "TransformError", "ValidationError",
    "Fraction", "FourierFunction", "RationalPolynomial",
    "LatticeNormalization", "hermite_normal_form", "normalize_hamiltonian",
    "saturate_and_complete", "smith_normal_form",
    "NormalizedSplit", "ReducedSystem", "SymplectizedSystem", "pipeline",
    "reconstruct", "reduce", "symplectize",
    "genericity_check", "is_fully_hamiltonian", "spectrum", "spectrum_at",
    "verify_rank_bound",
]
