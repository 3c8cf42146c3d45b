"""Exception hierarchy.

Every domain error derives from :class:`CurveForgeError` and carries a stable
``code`` string used by the CLI to emit machine-readable errors.
"""

from __future__ import annotations


class CurveForgeError(Exception):
    """Base class for all domain errors."""

    code = "CurveForgeError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if "code" not in cls.__dict__:
            cls.code = cls.__name__


# --- polynomial layer ---

class InputSyntaxError(CurveForgeError):
    code = "SyntaxError"


class NotHomogeneous(CurveForgeError):
    pass


class DegreeMismatch(CurveForgeError):
    pass


class NotDivisible(CurveForgeError):
    pass


class ZeroPolynomial(CurveForgeError):
    pass


class SingularMatrix(CurveForgeError):
    pass


# --- curve analysis ---

class InvalidType(CurveForgeError):
    pass


class ZeroDiscriminant(CurveForgeError):
    pass


class Lemma1Violation(CurveForgeError):
    pass


# --- multiplicity data ---

class MultiplicityMismatch(CurveForgeError):
    pass


class NegativeGenus(CurveForgeError):
    pass


# --- admissibility ---

class NotAdmissible(CurveForgeError):
    pass


class EmptyRange(CurveForgeError):
    pass


# --- synthesis ---

class NonSquareConstantTerm(CurveForgeError):
    pass


class ZeroConstantTerm(CurveForgeError):
    pass


class DegenerateLambdas(CurveForgeError):
    pass


class PostconditionFailed(CurveForgeError):
    pass


class InfeasibleAssignment(CurveForgeError):
    pass


# --- cremona ---

class IndeterminatePoint(CurveForgeError):
    pass


class ExceptionalInput(CurveForgeError):
    pass


class NonSplitDiscriminant(CurveForgeError):
    pass


class GenusZero(CurveForgeError):
    pass


class SizeMismatch(CurveForgeError):
    pass
