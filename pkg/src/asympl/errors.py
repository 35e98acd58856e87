"""Exception hierarchy shared by the toolkit.

The CLI maps these onto exit codes: validation errors -> 2, classification
rejections -> 3, regime errors -> 4, numerical failures -> 5.
"""


class AsymplError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(AsymplError):
    """Operands live in different numbers of variables / degrees of freedom."""


class IndexRangeError(AsymplError):
    """A variable, angle or matrix index is out of range."""


class DomainError(AsymplError):
    """A point (or momentum level) lies outside the chart's action box."""


class TransformError(AsymplError):
    """An action-angle transform is non-unimodular, or an angle shift cannot
    be represented in the finite Fourier-polynomial algebra."""


class ValidationError(AsymplError):
    """A configuration document failed to parse or validate.

    ``location`` is a dotted/bracketed path into the document, e.g.
    ``chart.A[2].poly[0].coeff``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ClassificationError(AsymplError):
    """A Hamiltonian failed the full-Hamiltonianity test.

    Carries the rejection witness (harmonic index, tensor slot, rational
    point) produced by the classifier.
    """

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class RegimeError(AsymplError):
    """An operation was requested outside its regime (e.g. symplectize with
    r != 1). The message includes guidance on what applies instead."""


class NumericalError(AsymplError):
    """The numerical integrator failed (step-size underflow, solver error)."""
