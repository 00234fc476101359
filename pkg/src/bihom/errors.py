"""Exception hierarchy shared by every module of the package."""


class BiHomError(Exception):
    """Base class; every error raised deliberately by the package derives from it."""

    exit_code = 1


class DimensionMismatch(BiHomError, ValueError):
    exit_code = 10


class ParityError(BiHomError, ValueError):
    """A matrix or structure constant violates parity homogeneity."""

    exit_code = 11


class DegreeMismatch(ParityError):
    exit_code = 12


class SingularMap(BiHomError, ArithmeticError):
    exit_code = 13


class NotAMorphism(BiHomError):
    exit_code = 14


class NonCommuting(BiHomError):
    exit_code = 15


class AlgebraMismatch(BiHomError):
    exit_code = 16


class PreJordanAxiomsFailed(BiHomError):
    exit_code = 17


class WrongParity(BiHomError):
    exit_code = 18


class OOperatorAxiomsFailed(BiHomError):
    exit_code = 19


class NotSelfReversing(BiHomError):
    exit_code = 20


class BudgetExceeded(BiHomError):
    exit_code = 21


class ManifestError(BiHomError):
    exit_code = 30


class ParseError(ManifestError):
    exit_code = 31


class UnresolvedReference(ManifestError):
    exit_code = 32


class InvariantViolation(ManifestError):
    exit_code = 33
