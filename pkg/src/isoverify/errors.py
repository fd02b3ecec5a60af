"""Exception hierarchy shared by every module."""


class IsoverifyError(Exception):
    """Base class for all toolkit errors."""


class StructuralError(IsoverifyError, ValueError):
    """Shapes, indeterminate lists or other structural preconditions disagree."""


class ParameterError(IsoverifyError, ValueError):
    """A parameter lies outside its documented domain."""


class VerificationError(IsoverifyError):
    """A checked identity failed.

    ``witness`` carries whatever locates the failure (an index, both sides of an
    equation, a residual).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FocalPointError(IsoverifyError, ArithmeticError):
    """The Jacobi determinant vanishes: the parallel family is singular here."""


class ConstructionError(IsoverifyError):
    """A geometric construction could not be completed within tolerance."""
