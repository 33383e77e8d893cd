"""Minimal immersions Phi = 2 Re F for a holomorphic null curve F."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra import (
    ComplexPolynomial,
    PartialFractions,
    PoleTerm,
    RationalFunction,
    partial_fractions,
)
from ..algebra.cyclotomic import J as J_EXACT
from ..elliptic import EllipticContext
from ..errors import OutOfDomain, PeriodError
from .core import ImmersionModel, Jet, Singularity, Topology

J = complex(J_EXACT.to_complex())
E1_PLUS_I = np.array([1.0, 1j, 0.0])
E1_MINUS_I = np.array([1.0, -1j, 0.0])
E3 = np.array([0.0, 0.0, 1.0], dtype=complex)
RESIDUE_TOL = 1e-9


class NullCurveModel(ImmersionModel):
    """Phi = 2 Re F with each component of F a partial-fraction sum."""

    minimal = True

    def __init__(self, components, name: str, topology: Topology | None, singularities=(), domain_radius=None):
        self.components = tuple(components)
        self.derivs = tuple(c.derivative() for c in self.components)
        self.second = tuple(d.derivative() for d in self.derivs)
        self.name = name
        self.topology = topology
        self.singularities = tuple(singularities)
        self.domain_radius = domain_radius

    def _stack(self, funcs, z):
        return np.stack([f(z) for f in funcs], axis=-1)

    def _check_domain(self, z):
        if self.domain_radius is not None and np.any(np.abs(z) > self.domain_radius * (1 + 1e-12)):
            raise OutOfDomain(f"{self.name}: model valid only for |z| <= {self.domain_radius}")

    def F(self, z):
        z = np.asarray(z, dtype=complex)
        self._check_domain(z)
        return self._stack(self.components, z)

    def jet(self, z) -> Jet:
        z = np.asarray(z, dtype=complex)
        self._check_domain(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            F = self._stack(self.components, z)
            dF = self._stack(self.derivs, z)
            ddF = self._stack(self.second, z)
        return Jet(phi=2.0 * F.real, phi_z=dF, phi_zz=ddF, phi_zzbar=np.zeros(dF.shape))

    def _numerators(self):
        """Polynomials N_k and D with Phi_z = (N_1, N_2, N_3) / D."""
        orders: dict[complex, int] = {}
        for c in self.derivs:
            for t in c.terms:
                orders[t.pole] = max(orders.get(t.pole, 0), t.order)
        den = ComplexPolynomial([1.0])
        for p, m in orders.items():
            den = den * ComplexPolynomial.from_roots([p] * m)
        nums = []
        for c in self.derivs:
            num = c.polynomial * den
            for t in c.terms:
                rest = ComplexPolynomial([t.coeff])
                for p, m in orders.items():
                    k = m - t.order if p == t.pole else m
                    if k:
                        rest = rest * ComplexPolynomial.from_roots([p] * k)
                num = num + rest
            nums.append(num)
        return nums, den

    def gauss_map(self) -> RationalFunction:
        """g = phi_3 / (phi_1 - i phi_2) as a reduced rational function of z."""
        (n1, n2, n3), _ = self._numerators()
        return RationalFunction(n3, n1 - n2 * 1j)

    def weierstrass_f(self) -> RationalFunction:
        (n1, n2, _), den = self._numerators()
        return RationalFunction(n1 - n2 * 1j, den)


def _vector_pf(terms: list[tuple[PartialFractions, np.ndarray]]) -> tuple[PartialFractions, ...]:
    """Combine scalar partial fractions times constant vectors into 3 components."""
    comps = []
    for k in range(3):
        acc = PartialFractions()
        for pf, vec in terms:
            if vec[k] != 0:
                acc = acc + pf.scale(complex(vec[k]))
        comps.append(acc)
    return tuple(comps)


def _prune_residues(pf: PartialFractions) -> PartialFractions:
    scale = max([1.0] + [abs(t.coeff) for t in pf.terms])
    kept = []
    for t in pf.terms:
        if t.order == 1 and abs(t.coeff) <= RESIDUE_TOL * scale:
            continue
        kept.append(t)
    return PartialFractions(pf.polynomial, tuple(kept))


@dataclass(frozen=True)
class WeierstrassData:
    """Weierstrass pair: Phi_z = (f/2)(1 - g^2, i(1 + g^2), 2g)."""

    f: RationalFunction
    g: RationalFunction

    def phi_z_components(self) -> tuple[RationalFunction, RationalFunction, RationalFunction]:
        f, g = self.f, self.g
        g2 = g * g
        half = f * 0.5
        return (half * (1 - g2), half * (1 + g2) * 1j, f * g)


def weierstrass_model(
    data: WeierstrassData, topology: Topology | None = None, name: str = "weierstrass", singularities=None
) -> NullCurveModel:
    """Minimal immersion from Weierstrass data via exact rational primitives.

    Raises PeriodError when any component of Phi_z has a nonzero residue,
    since its primitive would then contain a logarithm.
    """
    comps = []
    for R in data.phi_z_components():
        pf = _prune_residues(partial_fractions(R))
        for t in pf.terms:
            if t.order == 1:
                raise PeriodError(f"residue {t.coeff:.6g} at z = {t.pole:.6g}; Phi would not be rational")
        comps.append(pf.antiderivative())
    if singularities is None:
        poles = []
        for c in comps:
            for p in c.poles:
                if not any(abs(p - q) < 1e-9 for q in poles):
                    poles.append(p)
        singularities = tuple(Singularity(p, "end") for p in poles)
    return NullCurveModel(comps, name, topology, singularities)


@dataclass(frozen=True)
class NormalizedBubbleData:
    """Polynomial pair (P, Q) with Weierstrass data (Q^2, P/Q).

    Normalization: P(0) = 0, Q(0) = P'(0) = 1, P''(0) = 2 Q'(0); theta even
    bounds both degrees by theta / 2.
    """

    P: ComplexPolynomial
    Q: ComplexPolynomial
    theta: int

    def violations(self, tol: float = 0.0) -> list[str]:
        P, Q = self.P, self.Q
        dP, ddP, dQ = P.derivative(), P.derivative().derivative(), Q.derivative()
        out = []
        if self.theta % 2:
            out.append("theta odd")
        if max(P.degree, Q.degree) > self.theta // 2:
            out.append("degree exceeds theta/2")
        checks = {
            "P(0) = 0": P(0) - 0,
            "Q(0) = 1": Q(0) - 1,
            "P'(0) = 1": dP(0) - 1,
            "P''(0) = 2Q'(0)": ddP(0) - 2 * dQ(0),
        }
        out.extend(k for k, v in checks.items() if abs(v) > tol)
        return out

    def weierstrass(self) -> WeierstrassData:
        Q2 = self.Q * self.Q
        return WeierstrassData(RationalFunction(Q2), RationalFunction(self.P, self.Q))

    def omega(self) -> ComplexPolynomial:
        """Omega = 2 (P Q' - P' Q)."""
        return (self.P * self.Q.derivative() - self.P.derivative() * self.Q) * 2.0


@dataclass(frozen=True)
class FourEndedFamilyParams:
    """Parameters of the four-ended family: mu > 0 and the complex scale a."""

    mu: float
    a: complex = 3.0
    b: complex = field(init=False)

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        object.__setattr__(self, "b", 3 * self.a / (2 * J * (J - 1)))

    @property
    def vectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Residue vectors a1, a2, a3 and the linear coefficient a4."""
        mu, b = self.mu, self.b
        a1 = E1_PLUS_I / (2 * mu**2)
        a2 = J / (2 * mu**2) * E1_PLUS_I - mu**2 * b**2 / 2 * E1_MINUS_I + b * J**2 * E3
        a3 = J**2 / (2 * mu**2) * E1_PLUS_I - mu**2 * b**2 / 2 * E1_MINUS_I - b * J * E3
        a4 = -(a1 + J * a2 + J**2 * a3) / (3 * mu**2)
        return a1, a2, a3, a4

    @property
    def poles(self) -> tuple[complex, complex, complex]:
        return (self.mu, self.mu * J, self.mu * J**2)

    def constraint_residuals(self) -> dict[str, complex]:
        a1, a2, a3, a4 = self.vectors
        dot = lambda u, v: complex(np.sum(u * v))  # noqa: E731
        return {
            "<a1,a1>": dot(a1, a1),
            "<a2,a2>": dot(a2, a2),
            "<a3,a3>": dot(a3, a3),
            "<a4,a4>": dot(a4, a4),
            "<a1,a2>-<a1,a3>": dot(a1, a2) - dot(a1, a3),
            "<a1,a2>-<a2,a3>": dot(a1, a2) - dot(a2, a3),
        }


def _rf(num, den=(1.0,)) -> RationalFunction:
    return RationalFunction(ComplexPolynomial(num), ComplexPolynomial(den))


def family_closed_form(params: FourEndedFamilyParams) -> tuple[PartialFractions, ...]:
    """Components of f_mu from the closed rational expression."""
    mu, a = params.mu, params.a
    quad = (mu**2, mu, 1.0)
    cubic = _rf([3.0], [-(mu**3), 0, 0, 1.0])
    planar = _rf([3 * mu**3, 6 * mu**2], quad) + _rf([0, 1.0])
    vertical = _rf([mu, 1.0], quad)
    pieces = [
        (partial_fractions(cubic), E1_PLUS_I / 2),
        (partial_fractions(planar), a**2 / 8 * E1_MINUS_I),
        (partial_fractions(vertical), 3 * a / 2 * E3),
    ]
    return _vector_pf(pieces)


def family_pole_sum(params: FourEndedFamilyParams) -> tuple[PartialFractions, ...]:
    """Components of f_mu = sum a_k / (z - p_k) + a4 z, assembled from the vectors."""
    a1, a2, a3, a4 = params.vectors
    comps = []
    for k in range(3):
        terms = tuple(PoleTerm(p, 1, complex(v[k])) for p, v in zip(params.poles, (a1, a2, a3)))
        comps.append(PartialFractions(ComplexPolynomial([0.0, a4[k]]), terms))
    return tuple(comps)


def family_psi_mu(params: FourEndedFamilyParams) -> NullCurveModel:
    comps = family_closed_form(params)
    sing = tuple(Singularity(p, "end", 2) for p in params.poles) + (Singularity(None, "end", 2),)
    return NullCurveModel(comps, f"psi-mu(mu={params.mu:g})", Topology(2, (), (2, 2, 2, 2)), sing)


def lopez(a: complex = 3.0) -> NullCurveModel:
    """Limit of the four-ended family: ends of multiplicity 3 at 0 and 1 at infinity."""
    inv3 = PartialFractions(ComplexPolynomial([0.0]), (PoleTerm(0j, 3, 1.0),))
    inv1 = PartialFractions(ComplexPolynomial([0.0]), (PoleTerm(0j, 1, 1.0),))
    lin = PartialFractions(ComplexPolynomial([0.0, 1.0]))
    comps = _vector_pf([(inv3, 1.5 * E1_PLUS_I), (lin, a**2 / 8 * E1_MINUS_I), (inv1, 1.5 * a * E3)])
    sing = (Singularity(0j, "end", 4), Singularity(None, "end", 2))
    return NullCurveModel(comps, "lopez", Topology(2, (), (4, 2)), sing)


def enneper() -> NullCurveModel:
    """F = z/2 (1, i, 0) + z^2/2 e3 - z^3/6 (1, -i, 0), Weierstrass data (1, z)."""
    comps = (
        PartialFractions(ComplexPolynomial([0, 0.5, 0, -1 / 6])),
        PartialFractions(ComplexPolynomial([0, 0.5j, 0, 1j / 6])),
        PartialFractions(ComplexPolynomial([0, 0, 0.5])),
    )
    return NullCurveModel(comps, "enneper", Topology(2, (), (4,)), (Singularity(None, "end", 4),))


def enneper_scaled(amplitude: complex, slope: complex) -> NullCurveModel:
    """Enneper surface with Weierstrass data (amplitude, slope * z)."""
    c, s = amplitude, slope
    comps = (
        PartialFractions(ComplexPolynomial([0, c / 2, 0, -c * s**2 / 6])),
        PartialFractions(ComplexPolynomial([0, 1j * c / 2, 0, 1j * c * s**2 / 6])),
        PartialFractions(ComplexPolynomial([0, 0, c * s / 2])),
    )
    return NullCurveModel(comps, "enneper-scaled", Topology(2, (), (4,)), (Singularity(None, "end", 4),))


def plane() -> NullCurveModel:
    """Flat plane from Weierstrass data (1, 0)."""
    comps = (
        PartialFractions(ComplexPolynomial([0, 0.5])),
        PartialFractions(ComplexPolynomial([0, 0.5j])),
        PartialFractions(ComplexPolynomial([0.0])),
    )
    return NullCurveModel(comps, "plane", Topology(2, (), (2,)), (Singularity(None, "end", 2),))


def _laurent_to_pf(coeffs: dict[int, complex]) -> PartialFractions:
    poly_deg = max([k for k in coeffs if k >= 0], default=0)
    poly = np.zeros(poly_deg + 1, dtype=complex)
    terms = []
    for k, c in sorted(coeffs.items()):
        if c == 0:
            continue
        if k >= 0:
            poly[k] = c
        else:
            terms.append(PoleTerm(0j, -k, complex(c)))
    return PartialFractions(ComplexPolynomial(poly), tuple(terms))


CG_DOMAIN = 0.45


def chen_gackstatter_laurent(ctx: EllipticContext) -> dict[str, dict[int, complex]]:
    """Laurent coefficients (power -> coefficient) of wp, wp^2 and wp'."""
    d = ctx.depth
    wp = {-2: 1.0}
    for k in range(2, d + 1):
        wp[2 * k - 2] = ctx.coeff(k)
    top = 2 * d - 2
    wp2: dict[int, float] = {}
    for i, ci in wp.items():
        for j, cj in wp.items():
            if i + j <= top - 2:
                wp2[i + j] = wp2.get(i + j, 0.0) + ci * cj
    wpp = {k - 1: k * c for k, c in wp.items()}
    return {"wp": wp, "wp2": wp2, "wp_prime": wpp}


def chen_gackstatter_local(ctx: EllipticContext) -> NullCurveModel:
    """Local model at the end z = 0 of the square-lattice Chen-Gackstatter torus.

    Weierstrass data f = 2 wp, g = A wp'/wp; using wp'^2 = 4 wp^3 - g2 wp,
    Phi_z = (wp - A^2 (4 wp^2 - g2), i (wp + A^2 (4 wp^2 - g2)), 2 A wp').
    Phi is twice the real part of the term-wise primitive with zero constant.
    """
    A, g2 = ctx.A, ctx.g2
    lc = chen_gackstatter_laurent(ctx)
    wp, wp2 = lc["wp"], lc["wp2"]
    q = {k: 4 * A**2 * c for k, c in wp2.items()}
    q[0] = q.get(0, 0.0) - A**2 * g2
    keys = set(wp) | set(q)
    c1 = {k: wp.get(k, 0.0) - q.get(k, 0.0) for k in keys}
    c2 = {k: 1j * (wp.get(k, 0.0) + q.get(k, 0.0)) for k in keys}

    def primitive(c):
        out = {}
        for k, v in c.items():
            if k == -1:
                if abs(v) > 1e-12:
                    raise PeriodError("logarithmic term in the primitive")
                continue
            out[k + 1] = v / (k + 1)
        return out

    comps = (
        _laurent_to_pf(primitive(c1)),
        _laurent_to_pf(primitive(c2)),
        _laurent_to_pf({k: 2 * A * v for k, v in wp.items()}),
    )
    return NullCurveModel(comps, "chen-gackstatter", None, (Singularity(0j, "end", 4),), domain_radius=CG_DOMAIN)
