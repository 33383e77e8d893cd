"""Exact certificates for the four-ended family and its Enneper bubble."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.cyclotomic import I, J, ONE, CycScalar
from .poly import ConjPolynomial, ExactPoly, cross, dot
from .series import DEFAULT_ORDER, MuSeries

DEFAULT_POINT = (0, 0, 2)
SECOND_POINT = (1, 1, 3)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an exact check; violations pair a tag with the nonzero remainder."""

    name: str
    violations: tuple[tuple[str, str], ...] = ()
    checked: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    @property
    def tags(self) -> list[str]:
        return [t for t, _ in self.violations]

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": list(self.checked),
            "violations": [{"identity": t, "remainder": r} for t, r in self.violations],
            "details": {k: str(v) for k, v in self.details.items()},
            "seconds": self.seconds,
        }


def _cyc(x) -> CycScalar:
    return x if isinstance(x, CycScalar) else CycScalar(x)


# -- constraint system for the vector coefficients --------------------------

_MU_NAMES = ("mu",)


def _mu(power: int = 1) -> ExactPoly:
    return ExactPoly.variable(0, power, _MU_NAMES)


def _vec(scale, v) -> tuple[ExactPoly, ...]:
    return tuple(scale * _cyc(x) for x in v)


def _vadd(*vs):
    return tuple(sum(parts[1:], parts[0]) for parts in zip(*vs))


def family_coefficients(a, mu_names=_MU_NAMES) -> dict:
    """Vector coefficients a1..a4 and b as Laurent polynomials in mu.

    a4 is the closed form (a^2/8)(1, -i, 0); the defining relation with the
    other three is one of the checked constraints.
    """
    a = _cyc(a)
    j = J
    b = 3 * a / (2 * j * (j - 1))
    names = mu_names
    k = names.index("mu")

    def mu(p):
        return ExactPoly.variable(k, p, names)

    plus = (ONE, I, CycScalar(0))
    minus = (ONE, -I, CycScalar(0))
    e3 = (CycScalar(0), CycScalar(0), ONE)
    half = Fraction(1, 2)
    a1 = _vec(mu(-2) * half, plus)
    a2 = _vadd(_vec(mu(-2) * (j * half), plus), _vec(mu(2) * (-half * b * b), minus), _vec(mu(0) * (b * j * j), e3))
    a3 = _vadd(_vec(mu(-2) * (j * j * half), plus), _vec(mu(2) * (-half * b * b), minus), _vec(mu(0) * (-b * j), e3))
    a4 = _vec(mu(0) * (a * a / 8), minus)
    return {"a1": a1, "a2": a2, "a3": a3, "a4": a4, "b": b}


def check_constraints(a=3, perturb: dict | None = None) -> CheckResult:
    """Null-vector and pairing constraints on a1..a4 with mu symbolic.

    perturb maps a coefficient name ('a1'..'a4') to a rational 3-vector added
    to it, to exercise the failure path.
    """
    start = time.perf_counter()
    co = family_coefficients(a)
    vecs = {k: co[k] for k in ("a1", "a2", "a3", "a4")}
    for name, delta in (perturb or {}).items():
        vecs[name] = _vadd(vecs[name], _vec(_mu(0), delta))
    a1, a2, a3, a4 = (vecs[k] for k in ("a1", "a2", "a3", "a4"))
    j = J
    checks = {}
    for name, v in vecs.items():
        checks[f"<{name},{name}> = 0"] = dot(v, v)
    checks["<a1,a2> = <a1,a3>"] = dot(a1, a2) - dot(a1, a3)
    checks["<a1,a3> = <a2,a3>"] = dot(a1, a3) - dot(a2, a3)
    formula = _vadd(a1, tuple(j * x for x in a2), tuple(j * j * x for x in a3))
    formula = tuple(x * _mu(-2) * Fraction(-1, 3) for x in formula)
    for c in range(3):
        checks[f"a4 = -(a1 + j a2 + j^2 a3)/(3 mu^2) [component {c + 1}]"] = a4[c] - formula[c]
    violations = tuple((tag, str(rem)) for tag, rem in checks.items() if not rem.is_zero())
    return CheckResult(
        "constraints",
        violations,
        tuple(checks),
        {"a": _cyc(a), "b": co["b"]},
        time.perf_counter() - start,
    )


# -- Weierstrass frame identities ---------------------------------------------


def _upoly(coeffs) -> list[CycScalar]:
    out = [_cyc(c) for c in coeffs]
    while out and out[-1].is_zero():
        out.pop()
    return out


def _umod(p: list, q: list) -> list:
    p = list(p)
    inv = q[-1].inv()
    while len(p) >= len(q) and p:
        f = p[-1] * inv
        shift = len(p) - len(q)
        for i, c in enumerate(q):
            p[shift + i] = p[shift + i] - f * c
        p.pop()
        while p and p[-1].is_zero():
            p.pop()
    return p


def exact_gcd(p, q) -> list[CycScalar]:
    """Monic gcd of two univariate polynomials (coefficients lowest first)."""
    p, q = _upoly(p), _upoly(q)
    while q:
        p, q = q, _umod(p, q)
    if not p:
        return []
    lead = p[-1].inv()
    return [c * lead for c in p]


def _zpoly(coeffs) -> ConjPolynomial:
    return ConjPolynomial({(k, 0): _cyc(c) for k, c in enumerate(coeffs)})


def check_weierstrass_identities(P, Q) -> CheckResult:
    """Exact identities for Phi_z = (Q^2 - P^2, i(Q^2 + P^2), 2PQ)/2.

    P and Q are coefficient sequences (lowest degree first).  The normal
    numerator N = (P Qbar + Pbar Q, i(Pbar Q - P Qbar), |P|^2 - |Q|^2) is
    certified by Phi_x x Phi_y = (|P|^2 + |Q|^2) N, which fixes orientation.
    """
    start = time.perf_counter()
    g = exact_gcd(P, Q)
    if len(g) != 1:
        gp = _zpoly(g) if g else ConjPolynomial()
        return CheckResult(
            "weierstrass",
            (("precondition gcd(P, Q) = 1", str(gp)),),
            ("precondition gcd(P, Q) = 1",),
            {},
            time.perf_counter() - start,
        )
    p, q = _zpoly(P), _zpoly(Q)
    pb, qb = p.conj(), q.conj()
    half = Fraction(1, 2)
    phi_z = ((q * q - p * p) * half, (q * q + p * p) * (I * half), p * q)
    phi_zb = tuple(c.conj() for c in phi_z)
    weight = p * pb + q * qb
    normal = (p * qb + pb * q, (pb * q - p * qb) * I, p * pb - q * qb)
    phi_zz = tuple(c.d_z() for c in phi_z)
    omega = (p * q.d_z() - p.d_z() * q) * 2

    # Phi_x x Phi_y = -2i Phi_z x conj(Phi_z)
    normal_cross = tuple(c * (-2 * I) for c in cross(phi_z, phi_zb))
    checks = {
        "(i) <Phi_z, Phi_z> = 0": dot(phi_z, phi_z),
        "(ii) <N, Phi_z> = 0": dot(normal, phi_z),
        "(ii) <N, N> = (|P|^2 + |Q|^2)^2": dot(normal, normal) - weight * weight,
    }
    for c in range(3):
        checks[f"(ii) Phi_x x Phi_y = (|P|^2 + |Q|^2) N [component {c + 1}]"] = normal_cross[c] - weight * normal[c]
    checks["(iii) 2<Phi_zz, n> = 2(PQ' - P'Q)"] = dot(phi_zz, normal) * 2 - omega * weight
    checks["(iv) e^(2 lambda) = (|P|^2 + |Q|^2)^2"] = dot(phi_z, phi_zb) * 2 - weight * weight
    violations = tuple((tag, str(rem)) for tag, rem in checks.items() if not rem.is_zero())
    return CheckResult(
        "weierstrass",
        violations,
        tuple(checks),
        {"Omega": omega, "conformal_factor_sq": weight * weight},
        time.perf_counter() - start,
    )


# -- conformality of the family with mu as an indeterminate -------------------

_ZMU = ("z", "mu")


def conformality_exact(a=3, a4_override=None) -> CheckResult:
    """<f', f'> == 0 for f = sum a_i/(z - mu j^(i-1)) + a4 z, mu symbolic.

    With D = (z^3 - mu^3)^2 the numerator of f' is
    N = -sum_i a_i prod_{l != i} (z - p_l)^2 + a4 D, and <f', f'> = <N, N>/D^2.
    """
    start = time.perf_counter()
    co = family_coefficients(a, mu_names=_ZMU)
    vec = [co["a1"], co["a2"], co["a3"], co["a4"]]
    if a4_override is not None:
        vec[3] = _vec(ExactPoly.constant(1, _ZMU), a4_override)
    z = ExactPoly.variable(0, 1, _ZMU)
    mu = ExactPoly.variable(1, 1, _ZMU)
    roots = [mu * (J**k) for k in range(3)]
    lin = [(z - r) ** 2 for r in roots]
    numer = tuple(x * (z**3 - mu**3) ** 2 for x in vec[3])
    for i in range(3):
        others = lin[(i + 1) % 3] * lin[(i + 2) % 3]
        numer = tuple(n - x * others for n, x in zip(numer, vec[i]))
    rem = dot(numer, numer)
    violations = () if rem.is_zero() else (("<f', f'> = 0", str(rem)),)
    return CheckResult(
        "conformality",
        violations,
        ("<f', f'> = 0",),
        {"remainder_terms": len(rem.terms)},
        time.perf_counter() - start,
    )


# -- blow-up expansion ---------------------------------------------------------


def _geometric_denominator(order: int) -> MuSeries:
    """1/(1 + x + x^2) with x = mu^2 z, exactly to the given order."""
    x = MuSeries.from_terms({2: ConjPolynomial.z()}, order)
    return (1 + x + x * x).inverse()


def scaled_holomorphic_part(a=3, order: int = DEFAULT_ORDER) -> tuple[MuSeries, MuSeries, MuSeries]:
    """mu^3 f_mu(mu^3 z) as three MuSeries, from the closed form of f_mu.

    With x = mu^2 z and G = 1/(1 + x + x^2):
      mu^3 f = -(3/2)(1, i, 0)/(1 - mu^6 z^3)
               + (a^2/8)(3 mu^4 (1 + 2x) G + mu^6 z)(1, -i, 0)
               + (3a/2) mu^2 (1 + x) G (0, 0, 1).
    """
    a = _cyc(a)
    z = ConjPolynomial.z()
    x = MuSeries.from_terms({2: z}, order)
    g = _geometric_denominator(order)
    cube = MuSeries.from_terms({0: 1, 6: -(z**3)}, order).inverse()
    pole_part = cube * Fraction(-3, 2)
    lin = (MuSeries.from_terms({4: 3}, order) * (1 + 2 * x) * g + MuSeries.from_terms({6: z}, order)) * (a * a / 8)
    vert = MuSeries.from_terms({2: 1}, order) * (1 + x) * g * (3 * a / 2)
    first = pole_part + lin
    second = pole_part * I - lin * I
    return first, second, vert


def enneper_bubble(a=3) -> tuple[ConjPolynomial, ...]:
    """E_a = 2 Re F_a with F_a' = Weierstrass data (a^2/9, 3z/a).

    F_a = (a^2 z/18 - z^3/6, i(a^2 z/18 + z^3/6), a z^2/6); for a = 3 this is
    z/2 (1, i, 0) + z^2/2 (0, 0, 1) - z^3/6 (1, -i, 0).
    """
    a = _cyc(a)
    z = ConjPolynomial.z()
    s = a * a / 18
    f = (z * s - z**3 * Fraction(1, 6), (z * s + z**3 * Fraction(1, 6)) * I, z * z * (a / 6))
    return tuple(c + c.conj() for c in f)


@dataclass(frozen=True)
class BlowupSeries:
    """Phi_mu(mu^3 z) = (Psi_mu(mu^3 z) - p)/|Psi_mu(mu^3 z) - p|^2 as MuSeries."""

    components: tuple[MuSeries, MuSeries, MuSeries]
    a: CycScalar
    p: tuple
    order: int

    def coefficient(self, k: int) -> tuple[ConjPolynomial, ...]:
        return tuple(c.coefficient(k) for c in self.components)

    def nonconstant(self, k: int) -> tuple[ConjPolynomial, ...]:
        return tuple(c.without_constant() for c in self.coefficient(k))

    def evaluate(self, z, mu: float) -> tuple[complex, complex, complex]:
        return tuple(c.evaluate(z, mu) for c in self.components)


def _shifted_difference(a, p, order: int) -> tuple[MuSeries, ...]:
    f = scaled_holomorphic_part(a, order)
    return tuple(fc + fc.conj() - MuSeries.from_terms({3: pk}, order) for fc, pk in zip(f, p))


def norm_series(a=3, p=DEFAULT_POINT, order: int = 7) -> MuSeries:
    """mu^6 |Psi_mu(mu^3 z) - p|^2 as an exact series (leading coefficient 9)."""
    u = _shifted_difference(a, tuple(Fraction(x) for x in p), order)
    return dot(u, u)


def blowup_series(a=3, p=DEFAULT_POINT, order: int = DEFAULT_ORDER) -> BlowupSeries:
    """Exact mu-expansion of the inverted family rescaled at scale mu^3.

    With U = mu^3 (Psi - p) and S = <U, U> = mu^6 |Psi - p|^2 (both power
    series with S(0) = 9), Phi(mu^3 z) = mu^3 U / S.
    """
    p = tuple(Fraction(x) for x in p)
    u = _shifted_difference(a, p, order)
    s_inv = dot(u, u).inverse()
    phi = tuple((uc * s_inv).shift(3) for uc in u)
    return BlowupSeries(phi, _cyc(a), p, order)


def certify_blowup(a=3, p=DEFAULT_POINT, order: int = DEFAULT_ORDER) -> CheckResult:
    """mu^7 and mu^8 nonconstant parts vanish; the mu^9 one equals -E_a."""
    if order < 9:
        raise ValueError("order must be at least 9 to reach the bubble term")
    start = time.perf_counter()
    series = blowup_series(a, p, order)
    checks = {}
    for k in range(3, 9):
        for c, poly in enumerate(series.nonconstant(k)):
            checks[f"mu^{k} nonconstant [component {c + 1}] = 0"] = poly
    bubble = enneper_bubble(a)
    for c, (poly, e) in enumerate(zip(series.nonconstant(9), bubble)):
        checks[f"mu^9 nonconstant [component {c + 1}] = -E"] = poly + e
    violations = tuple((tag, str(rem)) for tag, rem in checks.items() if not rem.is_zero())
    details = {"p": p, "a": _cyc(a)}
    if order >= 10:
        details["mu^10 nonconstant"] = tuple(str(x) for x in series.nonconstant(10))
    details["mu^0..mu^9 constants"] = tuple(tuple(str(c.constant_term()) for c in series.coefficient(k)) for k in range(10))
    return CheckResult("blowup", violations, tuple(checks), details, time.perf_counter() - start)
