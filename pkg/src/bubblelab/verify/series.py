"""Truncated power series in mu with ConjPolynomial coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..algebra.cyclotomic import CycScalar
from ..errors import NonUnitLeadingTerm
from .poly import ConjPolynomial

DEFAULT_ORDER = 10


def _poly(x) -> ConjPolynomial:
    if isinstance(x, ConjPolynomial):
        return x
    return ConjPolynomial.const(x)


@dataclass(frozen=True)
class MuSeries:
    """sum_{k=0}^{N} c_k mu^k, known exactly up to and including mu^N.

    exact_remainder_dropped records whether the represented quantity may have
    nonzero terms past mu^N that were discarded.
    """

    coeffs: tuple[ConjPolynomial, ...]
    exact_remainder_dropped: bool = False

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the mu^0 coefficient")
        object.__setattr__(self, "coeffs", tuple(_poly(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_terms(cls, terms: dict[int, object], order: int = DEFAULT_ORDER) -> MuSeries:
        """Series from {power: coefficient}; powers beyond order are dropped."""
        coeffs = [ConjPolynomial() for _ in range(order + 1)]
        dropped = False
        for k, c in terms.items():
            if k < 0:
                raise ValueError("negative mu powers are not allowed in a MuSeries")
            c = _poly(c)
            if k > order:
                dropped = dropped or not c.is_zero()
            else:
                coeffs[k] = coeffs[k] + c
        return cls(tuple(coeffs), dropped)

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> MuSeries:
        return cls.from_terms({0: c}, order)

    def coefficient(self, k: int) -> ConjPolynomial:
        if k > self.order:
            raise IndexError(f"coefficient mu^{k} beyond truncation order {self.order}")
        return self.coeffs[k] if k >= 0 else ConjPolynomial()

    def _coerce(self, other) -> MuSeries | None:
        if isinstance(other, MuSeries):
            return other
        if isinstance(other, (int, Fraction, CycScalar, ConjPolynomial)):
            return MuSeries.constant(other, self.order)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return all(self.coeffs[k] == o.coeffs[k] for k in range(n + 1))

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        coeffs = tuple(self.coeffs[k] + o.coeffs[k] for k in range(n + 1))
        dropped = self._dropped_above(n) or o._dropped_above(n)
        return MuSeries(coeffs, dropped)

    __radd__ = __add__

    def __neg__(self):
        return MuSeries(tuple(-c for c in self.coeffs), self.exact_remainder_dropped)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def _dropped_above(self, n: int) -> bool:
        return self.exact_remainder_dropped or any(not c.is_zero() for c in self.coeffs[n + 1 :])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        out = [ConjPolynomial() for _ in range(n + 1)]
        dropped = self.exact_remainder_dropped or o.exact_remainder_dropped
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(o.coeffs):
                if b.is_zero():
                    continue
                if i + k > n:
                    dropped = True
                    break
                out[i + k] = out[i + k] + a * b
        return MuSeries(tuple(out), dropped)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = MuSeries.constant(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> MuSeries:
        """Multiplicative inverse; the mu^0 coefficient must be a nonzero constant."""
        c0 = self.coeffs[0]
        if c0.is_zero() or not c0.is_constant():
            raise NonUnitLeadingTerm(f"mu^0 coefficient {c0} is not a nonzero constant")
        inv0 = c0.constant_term().inv()
        out = [ConjPolynomial.const(inv0)]
        for n in range(1, self.order + 1):
            acc = ConjPolynomial()
            for k in range(1, n + 1):
                if not self.coeffs[k].is_zero():
                    acc = acc + self.coeffs[k] * out[n - k]
            out.append(acc * (-inv0))
        tail = any(not c.is_zero() for c in self.coeffs[1:])
        return MuSeries(tuple(out), self.exact_remainder_dropped or tail)

    def conj(self) -> MuSeries:
        """Formal conjugation; mu is real."""
        return MuSeries(tuple(c.conj() for c in self.coeffs), self.exact_remainder_dropped)

    def shift(self, k: int) -> MuSeries:
        """Multiply by mu^k (k >= 0), keeping the truncation order."""
        if k < 0:
            raise ValueError("use a nonnegative shift")
        coeffs = (ConjPolynomial(),) * k + self.coeffs
        dropped = self._dropped_above(self.order - k)
        return MuSeries(coeffs[: self.order + 1], dropped)

    def truncate(self, order: int) -> MuSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series known to order {self.order}")
        return MuSeries(self.coeffs[: order + 1], self._dropped_above(order))

    def evaluate(self, z, mu: float) -> complex:
        return sum(c.evaluate(z) * mu**k for k, c in enumerate(self.coeffs))

    def __str__(self):
        terms = [f"({c})*mu^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        tail = f" + O(mu^{self.order + 1})" if self.exact_remainder_dropped else ""
        return (" + ".join(terms) or "0") + tail
