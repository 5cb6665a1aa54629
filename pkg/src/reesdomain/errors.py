"""Exception hierarchy.

Input problems derive from :class:`InputError`; the CLI maps them to exit
code 65. :class:`BudgetExceeded` maps to 75.
"""

from __future__ import annotations


class ReesDomainError(Exception):
    """Base class for every error raised by the package."""


class InputError(ReesDomainError, ValueError):
    """Malformed or inconsistent input data."""


class InputFormatError(InputError):
    pass


class NonAssociative(InputError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"associativity fails at ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentityAtZero(InputError):
    def __init__(self, x: int | None = None):
        if x is None:
            msg = "table has no identity element"
        else:
            msg = f"element 0 is not an identity (fails against {x})"
        super().__init__(msg)
        self.index = x


class MissingInverse(InputError):
    def __init__(self, x: int):
        super().__init__(f"element {x} has no inverse")
        self.index = x


class NotAPermutation(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class NotNormalized(InputError):
    def __init__(self, row: int, col: int):
        super().__init__(f"sandwich matrix entry ({row}, {col}) must be the identity")
        self.position = (row, col)


class TermSyntaxError(InputError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class UnknownConstant(InputError):
    pass


class VariableIndexOutOfRange(InputError):
    pass


class ArityMismatch(InputError):
    pass


class EqualElements(InputError):
    pass


class EqualPoints(InputError):
    pass


class EmptyKillSet(InputError):
    pass


class RowsNotEqual(InputError):
    pass


class NotAHomogroup(InputError):
    pass


class SingularMatrix(ReesDomainError):
    """No separating row/column exists; carries the equal pair."""

    def __init__(self, kind: str, idx1: int, idx2: int):
        super().__init__(f"sandwich matrix has equal {kind}s {idx1} and {idx2}")
        self.kind = kind
        self.idx1 = idx1
        self.idx2 = idx2


class ZeroDivisorObstruction(ReesDomainError):
    """No conjugate of ``y`` fails to commute with ``x``: (x, y) is a zero-divisor pair."""

    def __init__(self, x: int, y: int):
        super().__init__(f"group elements {x} and {y} form a zero-divisor pair")
        self.x = x
        self.y = y


class NotAnEquationalDomain(ReesDomainError):
    def __init__(self, certificate):
        super().__init__(f"not an equational domain ({certificate.evidence.kind})")
        self.certificate = certificate


class InconsistentEquation(ReesDomainError):
    pass


class BudgetExceeded(ReesDomainError):
    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: {size} exceeds budget {budget}")
        self.size = size
        self.budget = budget


class VerificationError(ReesDomainError):
    """A constructed object failed its own evaluation check."""
