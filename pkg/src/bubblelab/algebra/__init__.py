"""Complex polynomials, rational functions and exact cyclotomic numbers."""

from .cyclotomic import I, J, ONE, ZERO, ZETA, CycScalar, cyc_arith
from .partial_fractions import PartialFractions, PoleTerm, partial_fractions
from .polynomial import (
    Z,
    ComplexPolynomial,
    RationalFunction,
    as_polynomial,
    ratfunc_derive,
    ratfunc_derive_quotient,
    ratfunc_eval,
)

__all__ = [
    "I",
    "J",
    "ONE",
    "ZERO",
    "ZETA",
    "Z",
    "ComplexPolynomial",
    "CycScalar",
    "PartialFractions",
    "PoleTerm",
    "RationalFunction",
    "as_polynomial",
    "cyc_arith",
    "partial_fractions",
    "ratfunc_derive",
    "ratfunc_derive_quotient",
    "ratfunc_eval",
]
