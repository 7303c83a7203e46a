"""Exceptions raised by the algebra modules.

Two families matter to callers: ``InvalidInput`` means the data handed in
violates an invariant, ``NegativeAnswer`` means the question was well posed
and the mathematical answer is "no" (an obstruction class is non-zero, two
kernels differ). ``MismatchFound`` is raised when a computed result
contradicts a known identity; it is never turned into a report.
"""
from typing import Optional, Sequence, Tuple


class AlgebraError(Exception):
    def __init__(self, message: str, witness: Optional[Sequence] = None):
        super().__init__(message)
        self.message = message
        self.witness: Optional[Tuple] = tuple(witness) if witness is not None else None

    def __str__(self) -> str:
        if self.witness is None:
            return self.message
        return f"{self.message} (witness {self.witness})"


class InvalidInput(AlgebraError):
    pass


class NegativeAnswer(AlgebraError):
    pass


class MismatchFound(AlgebraError):
    pass


# Group axioms
class GroupAxiomError(InvalidInput):
    pass


class NotClosed(GroupAxiomError):
    pass


class NoIdentityAtZero(GroupAxiomError):
    pass


class NotAssociative(GroupAxiomError):
    pass


class NoInverse(GroupAxiomError):
    pass


class NotAHomomorphism(InvalidInput):
    pass


class CapExceeded(InvalidInput):
    pass


# Modules and cochains
class InvalidModule(InvalidInput):
    pass


class NotNormalized(InvalidInput):
    pass


class DegreeTooHigh(InvalidInput):
    pass


class NotACocycle(InvalidInput):
    pass


class NotEquivariant(InvalidInput):
    pass


class NotAbelianCocycle(InvalidInput):
    def __init__(self, message: str, witness=None, identity: Optional[int] = None):
        super().__init__(message, witness)
        self.identity = identity


# Categories, functors, kernels
class PsiNotIntoPi0(InvalidInput):
    pass


class SourceTargetMismatch(InvalidInput):
    pass


class RealizationMismatch(InvalidInput):
    pass


class FactorSetInvalid(InvalidInput):
    def __init__(self, message: str, witness=None, equation: str = ""):
        super().__init__(message, witness)
        self.equation = equation


class FileFormatError(InvalidInput):
    def __init__(self, message: str, path: Optional[str] = None, field: Optional[str] = None):
        location = ":".join(part for part in (path, field) if part)
        super().__init__(f"{location}: {message}" if location else message)
        self.path = path
        self.field = field


# Negative answers
class ObstructionNonzero(NegativeAnswer):
    def __init__(self, message: str, coordinates: Sequence[int] = ()):
        super().__init__(message, tuple(coordinates))
        self.coordinates = tuple(coordinates)


class IncompatibleKernels(NegativeAnswer):
    pass


class CoherenceMismatch(MismatchFound):
    pass
