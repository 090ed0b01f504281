"""Separable integral points on isotrivial twists over F_q(t)."""

from isotwist.algebra import Fe, FieldDesc, Poly, RatFunc, field_make, field_of_order
from isotwist.errors import DomainError, IsotwistError, PreconditionError, VerificationError

__all__ = [
    "DomainError",
    "Fe",
    "FieldDesc",
    "IsotwistError",
    "Poly",
    "PreconditionError",
    "RatFunc",
    "VerificationError",
    "field_make",
    "field_of_order",
]

__version__ = "0.1.0"
