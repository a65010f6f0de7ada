"""Exceptions raised by dglm."""

from __future__ import annotations

from typing import Any


class DglmError(Exception):
    """Base class for every dglm error."""

    exit_code = 2


class DegreeRangeExceeded(DglmError):
    """A computation needed degrees outside a recorded valid range."""

    exit_code = 3

    def __init__(self, what: str, degree: int, lo: int, hi: int) -> None:
        self.what = what
        self.degree = degree
        self.lo = lo
        self.hi = hi
        super().__init__(
            f"{what}: degree {degree} is outside the valid range [{lo}, {hi}]"
        )


class InvalidModel(DglmError):
    """A model definition does not describe a dg Lie algebra."""


class ModelParseError(DglmError):
    """A model file could not be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class NotInSpan(DglmError):
    """A vector is not in the span of a given basis."""


class NotASubcomplex(DglmError):
    """A graded subspace is not closed under the differential or bracket."""

    def __init__(self, message: str, witness: Any = None) -> None:
        self.witness = witness
        super().__init__(message)


class NotAChainMap(DglmError):
    """A graded map does not commute with the differentials."""

    exit_code = 1

    def __init__(self, message: str, witness: Any = None) -> None:
        self.witness = witness
        super().__init__(message)


class NotAFreeExtension(DglmError):
    """A morphism of free dg Lie algebras is not a free map."""

    def __init__(self, message: str) -> None:
        super().__init__(
            f"{message}. The inclusion must be a cofibration (free map); "
            "replace it cofibrantly, e.g. by adding generators u, v with "
            "d(v) = u - i(u), or use --vanishing to inspect the "
            "derivations that kill the image."
        )


class MCViolation(DglmError):
    """A twisting morphism fails the Maurer-Cartan equation."""

    exit_code = 1


class NotMaurerCartan(DglmError):
    """An element handed in as Maurer-Cartan is not one."""


class AxiomViolation(DglmError):
    """An outer action fails one of the axioms (I)-(V)."""

    exit_code = 1

    def __init__(self, axiom: str, witness: Any = None) -> None:
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"outer action violates axiom ({axiom}): {witness}")


class NilpotencyBoundExceeded(DglmError):
    """A nilpotent series did not terminate within its bound."""


class NotACycle(DglmError):
    """An element required to be a cycle has a nonzero differential."""


class UnknownSuite(DglmError):
    """The requested verification suite does not exist."""
