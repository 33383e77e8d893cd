"""Exact certification over Q(zeta_12) with formal conjugation."""

from .checks import (
    DEFAULT_POINT,
    SECOND_POINT,
    BlowupSeries,
    CheckResult,
    blowup_series,
    certify_blowup,
    check_constraints,
    check_weierstrass_identities,
    conformality_exact,
    enneper_bubble,
    exact_gcd,
    family_coefficients,
    norm_series,
    scaled_holomorphic_part,
)
from .poly import ConjPolynomial, ExactPoly, cross, dot
from .series import DEFAULT_ORDER, MuSeries

__all__ = [
    "DEFAULT_ORDER",
    "DEFAULT_POINT",
    "SECOND_POINT",
    "BlowupSeries",
    "CheckResult",
    "ConjPolynomial",
    "ExactPoly",
    "MuSeries",
    "blowup_series",
    "certify_blowup",
    "check_constraints",
    "check_weierstrass_identities",
    "conformality_exact",
    "cross",
    "dot",
    "enneper_bubble",
    "exact_gcd",
    "family_coefficients",
    "norm_series",
    "scaled_holomorphic_part",
]
