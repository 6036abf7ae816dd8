"""Exception hierarchy shared by every module."""


class SympertError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SympertError, ValueError):
    """Input violates a precondition (shape, symmetry, ordering, range)."""


class NotPositiveDefiniteError(DomainError):
    pass


class NumericError(SympertError, ArithmeticError):
    """A numerical procedure failed (non-convergence, rank defect, ill-conditioning)."""


class DegenerateInputError(NumericError):
    pass


class IsotropicRangeError(NumericError):
    """The two columns fed to an elementary SR step span an isotropic plane."""


class InsufficientDataError(SympertError):
    pass
