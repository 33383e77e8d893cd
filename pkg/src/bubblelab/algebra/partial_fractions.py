"""Partial-fraction decomposition of complex rational functions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ClusteredRootsError, PeriodError
from .polynomial import ComplexPolynomial, RationalFunction, polish_root

# Eigenvalue roots of a pole of order m scatter by about eps**(1/m); this
# radius groups them back together before polishing.
CLUSTER_TOL = 1e-4
REASSEMBLY_TOL = 1e-9
SEPARATION_TOL = 1e-10


@dataclass(frozen=True)
class PoleTerm:
    """The term coeff / (z - pole)**order."""

    pole: complex
    order: int
    coeff: complex

    def __call__(self, z):
        return self.coeff / (z - self.pole) ** self.order


@dataclass(frozen=True)
class PartialFractions:
    """Polynomial part plus a finite sum of pole terms."""

    polynomial: ComplexPolynomial = field(default_factory=lambda: ComplexPolynomial([0.0]))
    terms: tuple[PoleTerm, ...] = ()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.polynomial(z) + 0j * z
        for t in self.terms:
            out = out + t(z)
        return out

    @property
    def poles(self) -> list[complex]:
        seen: list[complex] = []
        for t in self.terms:
            if not any(p == t.pole for p in seen):
                seen.append(t.pole)
        return seen

    def pole_order(self, pole: complex) -> int:
        return max((t.order for t in self.terms if t.pole == pole), default=0)

    def residues(self) -> dict[complex, complex]:
        out: dict[complex, complex] = {}
        for t in self.terms:
            if t.order == 1:
                out[t.pole] = out.get(t.pole, 0j) + t.coeff
        return out

    def __add__(self, other: PartialFractions) -> PartialFractions:
        return _collect(self.polynomial + other.polynomial, self.terms + other.terms)

    def scale(self, c: complex) -> PartialFractions:
        return PartialFractions(
            self.polynomial * c, tuple(PoleTerm(t.pole, t.order, t.coeff * c) for t in self.terms)
        )

    def derivative(self) -> PartialFractions:
        terms = tuple(PoleTerm(t.pole, t.order + 1, -t.order * t.coeff) for t in self.terms)
        return PartialFractions(self.polynomial.derivative(), terms)

    def antiderivative(self, constant: complex = 0.0) -> PartialFractions:
        """Primitive vanishing in its polynomial constant term (plus `constant`).

        Requires every simple-pole coefficient to be zero, since those would
        integrate to logarithms.
        """
        terms = []
        for t in self.terms:
            if t.order == 1:
                if t.coeff != 0:
                    raise PeriodError(f"nonzero residue {t.coeff} at {t.pole}; primitive is not rational")
                continue
            terms.append(PoleTerm(t.pole, t.order - 1, -t.coeff / (t.order - 1)))
        poly = self.polynomial.antiderivative() + constant
        return PartialFractions(poly, tuple(terms))

    def to_rational(self) -> RationalFunction:
        orders: dict[complex, int] = {}
        for t in self.terms:
            orders[t.pole] = max(orders.get(t.pole, 0), t.order)
        den = ComplexPolynomial([1.0])
        for p, m in orders.items():
            den = den * ComplexPolynomial.from_roots([p] * m)
        num = self.polynomial * den
        for t in self.terms:
            rest = ComplexPolynomial([t.coeff])
            for p, m in orders.items():
                k = m - t.order if p == t.pole else m
                if k:
                    rest = rest * ComplexPolynomial.from_roots([p] * k)
            num = num + rest
        return RationalFunction(num, den)


def _collect(poly: ComplexPolynomial, terms) -> PartialFractions:
    acc: dict[tuple[complex, int], complex] = {}
    for t in terms:
        key = (t.pole, t.order)
        acc[key] = acc.get(key, 0j) + t.coeff
    merged = tuple(PoleTerm(p, k, c) for (p, k), c in acc.items() if c != 0)
    return PartialFractions(poly, merged)


def _cluster_roots(den: ComplexPolynomial) -> list[tuple[complex, int]]:
    roots = list(den.roots)
    groups: list[list[complex]] = []
    for r in roots:
        for g in groups:
            c = np.mean(g)
            if abs(r - c) <= CLUSTER_TOL * max(1.0, abs(c)):
                g.append(r)
                break
        else:
            groups.append([r])
    out = []
    for g in groups:
        m = len(g)
        center = complex(np.mean(g))
        if center != 0:
            # Newton on the (m-1)-th derivative, where the root is simple
            d = den.coeffs
            for _ in range(m - 1):
                d = np.polynomial.polynomial.polyder(d)
            center = polish_root(d, center)
        out.append((center, m))
    for i, (p, _) in enumerate(out):
        for q, _ in out[i + 1 :]:
            if abs(p - q) <= SEPARATION_TOL * max(1.0, abs(p)):
                raise ClusteredRootsError(f"poles {p} and {q} are not separable")
    return out


def _series_divide(num: np.ndarray, den: np.ndarray, n: int) -> np.ndarray:
    """First n Taylor coefficients of num/den (den[0] != 0)."""
    num = np.pad(num, (0, max(0, n - len(num))))[:n]
    den = np.pad(den, (0, max(0, n - len(den))))[:n]
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        out[k] = (num[k] - np.dot(out[:k], den[k:0:-1])) / den[0]
    return out


def partial_fractions(R: RationalFunction, check: bool = True) -> PartialFractions:
    """Decompose R into its polynomial part and pole terms.

    With `check`, the reassembled sum is compared to R at 20 deterministic
    sample points; a mismatch above 1e-9 relative means the poles could not
    be resolved and raises ClusteredRootsError.
    """
    num, den = R.numerator, R.denominator
    if den.degree == 0:
        return PartialFractions(num * (1.0 / den.leading), ())
    q, r = num.divmod(den)
    poles = _cluster_roots(den)
    terms = []
    for p, m in poles:
        others = [x for x, k in poles if x != p for _ in range(k)]
        rest = ComplexPolynomial.from_roots(others, den.leading)
        coeffs = _series_divide(r.taylor_at(p), rest.taylor_at(p), m)
        for k in range(m):
            if coeffs[k] != 0:
                terms.append(PoleTerm(p, m - k, complex(coeffs[k])))
    out = PartialFractions(q, tuple(terms))
    if check:
        _check_reassembly(R, out)
    return out


def _check_reassembly(R: RationalFunction, pf: PartialFractions) -> None:
    poles = np.array(pf.poles, dtype=complex) if pf.terms else np.zeros(0, dtype=complex)
    scale = 1.0 + (np.max(np.abs(poles)) if len(poles) else 0.0)
    rng = np.random.default_rng(20)
    pts = []
    while len(pts) < 20:
        z = complex(*(rng.uniform(-2, 2, 2) * scale))
        if len(poles) == 0 or np.min(np.abs(poles - z)) > 0.05 * scale:
            pts.append(z)
    pts = np.array(pts)
    exact = R(pts)
    approx = pf(pts)
    err = np.abs(exact - approx) / np.maximum(np.abs(exact), 1e-300)
    if np.max(err) > REASSEMBLY_TOL:
        raise ClusteredRootsError(f"partial fractions reassembly error {np.max(err):.3g}")
