"""Complex polynomials and rational functions in one variable.

Coefficients are stored lowest degree first.  Rational functions are kept in
reduced form: common roots of numerator and denominator are cancelled when a
value is built, so the denominator's roots are exactly the poles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..errors import PoleError

ZERO_TOL = 1e-12
# Roots of numerator and denominator closer than this (relative) are merged.
COMMON_ROOT_TOL = 1e-6
POLE_TOL = 1e-14


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1].copy()


def polish_root(coeffs: np.ndarray, r: complex, steps: int = 8) -> complex:
    """Newton-polish a root of the polynomial with the given coefficients."""
    d = npoly.polyder(coeffs)
    for _ in range(steps):
        fd = npoly.polyval(r, d)
        if fd == 0:
            break
        step = npoly.polyval(r, coeffs) / fd
        r = r - step
        if abs(step) <= 1e-16 * max(1.0, abs(r)):
            break
    return complex(r)


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Polynomial with complex coefficients, lowest degree first."""

    coeffs: np.ndarray

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _trim(coeffs))
        self.coeffs.setflags(write=False)

    @classmethod
    def from_roots(cls, roots, leading: complex = 1.0) -> ComplexPolynomial:
        if len(roots) == 0:
            return cls([leading])
        return cls(leading * npoly.polyfromroots(list(roots)))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> ComplexPolynomial:
        out = np.zeros(k + 1, dtype=complex)
        out[k] = c
        return cls(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def __add__(self, other):
        other = as_polynomial(other)
        return ComplexPolynomial(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-as_polynomial(other))

    def __rsub__(self, other):
        return as_polynomial(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return ComplexPolynomial(self.coeffs * other)
        other = as_polynomial(other)
        return ComplexPolynomial(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ComplexPolynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def allclose(self, other, tol: float = 1e-12) -> bool:
        other = as_polynomial(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.pad(self.coeffs, (0, n - len(self.coeffs)))
        b = np.pad(other.coeffs, (0, n - len(other.coeffs)))
        scale = max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def derivative(self) -> ComplexPolynomial:
        if self.degree == 0:
            return ComplexPolynomial([0.0])
        return ComplexPolynomial(npoly.polyder(self.coeffs))

    def antiderivative(self) -> ComplexPolynomial:
        return ComplexPolynomial(npoly.polyint(self.coeffs))

    def divmod(self, other: ComplexPolynomial):
        q, r = npoly.polydiv(self.coeffs, other.coeffs)
        return ComplexPolynomial(q), ComplexPolynomial(r)

    def deflate(self, root: complex) -> ComplexPolynomial:
        """Divide by (z - root), dropping the remainder."""
        c = self.coeffs
        n = len(c) - 1
        if n == 0:
            return self
        out = np.zeros(n, dtype=complex)
        acc = c[-1]
        for k in range(n - 1, -1, -1):
            out[k] = acc
            acc = c[k] + acc * root
        return ComplexPolynomial(out)

    def taylor_at(self, z0: complex) -> np.ndarray:
        """Coefficients of p(z0 + t) in powers of t."""
        c = self.coeffs.copy()
        n = len(c)
        out = np.zeros(n, dtype=complex)
        for k in range(n):
            # synthetic division by (z - z0); the remainder is the next Taylor coefficient
            acc = 0j
            quot = np.zeros(max(len(c) - 1, 1), dtype=complex)
            for m in range(len(c) - 1, -1, -1):
                acc = c[m] + acc * z0
                if m > 0:
                    quot[m - 1] = acc
            out[k] = acc
            c = quot
        return out

    @cached_property
    def roots(self) -> np.ndarray:
        """Roots via companion-matrix eigenvalues, Newton polished.

        Exact zero roots (vanishing low coefficients) are returned exactly.
        """
        c = self.coeffs
        if self.degree <= 0:
            return np.zeros(0, dtype=complex)
        k = int(np.nonzero(c)[0][0])
        rest = c[k:]
        found = [0j] * k
        if len(rest) > 1:
            approx = npoly.polyroots(rest)
            found.extend(polish_root(rest, r) for r in approx)
        return np.array(found, dtype=complex)

    def __repr__(self):
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"ComplexPolynomial([{terms}])"


def as_polynomial(x) -> ComplexPolynomial:
    if isinstance(x, ComplexPolynomial):
        return x
    return ComplexPolynomial([x])


Z = ComplexPolynomial([0.0, 1.0])


def _low_order(c: np.ndarray) -> int:
    return int(np.nonzero(c)[0][0]) if np.any(c) else 0


def _reduce(num: ComplexPolynomial, den: ComplexPolynomial):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return ComplexPolynomial([0.0]), ComplexPolynomial([1.0])
    # exact powers of z first
    k = min(_low_order(num.coeffs), _low_order(den.coeffs))
    if k:
        num = ComplexPolynomial(num.coeffs[k:])
        den = ComplexPolynomial(den.coeffs[k:])
    if den.degree > 0:
        q, r = num.divmod(den)
        if np.max(np.abs(r.coeffs)) <= ZERO_TOL * np.max(np.abs(num.coeffs)):
            return q, ComplexPolynomial([1.0])
    while num.degree > 0 and den.degree > 0:
        nr, dr = num.roots, den.roots
        dist = np.abs(nr[:, None] - dr[None, :])
        scale = np.maximum(1.0, np.abs(dr))[None, :]
        i, j = np.unravel_index(np.argmin(dist / scale), dist.shape)
        if dist[i, j] > COMMON_ROOT_TOL * scale[0, j]:
            break
        root = 0.5 * (nr[i] + dr[j])
        num, den = num.deflate(root), den.deflate(root)
    lead = den.leading
    return ComplexPolynomial(num.coeffs / lead), ComplexPolynomial(den.coeffs / lead)


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """Ratio of complex polynomials, reduced with a monic denominator."""

    numerator: ComplexPolynomial
    denominator: ComplexPolynomial = field(default_factory=lambda: ComplexPolynomial([1.0]))

    def __post_init__(self):
        num, den = _reduce(as_polynomial(self.numerator), as_polynomial(self.denominator))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def from_coeffs(cls, num, den=(1.0,)) -> RationalFunction:
        return cls(ComplexPolynomial(num), ComplexPolynomial(den))

    @property
    def poles(self) -> np.ndarray:
        return self.denominator.roots

    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def __call__(self, z):
        """Vectorized evaluation without pole checks."""
        return self.numerator(z) / self.denominator(z)

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(as_polynomial(other))

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.numerator * o.denominator, self.denominator * o.numerator)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        out = RationalFunction(ComplexPolynomial([1.0]))
        for _ in range(k):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max(self.numerator.degree, self.denominator.degree)

    def __repr__(self):
        return f"RationalFunction({self.numerator!r} / {self.denominator!r})"


def ratfunc_eval(R: RationalFunction, z: complex) -> complex:
    """Evaluate R at a single point, raising PoleError at (numerical) poles."""
    z = complex(z)
    if R.denominator.degree > 0:
        d = np.abs(R.poles - z)
        if np.min(d) <= POLE_TOL * max(1.0, abs(z)):
            raise PoleError(f"pole of rational function at z={z}")
    den = R.denominator(z)
    if den == 0:
        raise PoleError(f"pole of rational function at z={z}")
    return complex(R.numerator(z) / den)


def ratfunc_derive_quotient(R: RationalFunction) -> RationalFunction:
    """Quotient-rule derivative (reference route)."""
    n, d = R.numerator, R.denominator
    return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)


def ratfunc_derive(R: RationalFunction) -> RationalFunction:
    """Derivative of R, built term by term from its partial fractions."""
    from .partial_fractions import partial_fractions

    if R.is_polynomial():
        return RationalFunction(R.numerator.derivative())
    return partial_fractions(R).derivative().to_rational()
