from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bubblelab.algebra import I, J, CycScalar
from bubblelab.asymptotics import inverted_family
from bubblelab.errors import NonUnitLeadingTerm
from bubblelab.surfaces import FourEndedFamilyParams, enneper, enneper_scaled, family_psi_mu
from bubblelab.verify import (
    DEFAULT_POINT,
    SECOND_POINT,
    ConjPolynomial,
    ExactPoly,
    MuSeries,
    blowup_series,
    certify_blowup,
    check_constraints,
    check_weierstrass_identities,
    conformality_exact,
    cross,
    dot,
    enneper_bubble,
    exact_gcd,
    family_coefficients,
    norm_series,
    scaled_holomorphic_part,
)

Z = ConjPolynomial.z()
ZB = ConjPolynomial.zbar()


# -- exact polynomials --------------------------------------------------------------


def test_conj_polynomial_arithmetic():
    p = Z * Z + ZB * I
    assert p.conj() == ZB * ZB - Z * I
    assert (Z + ZB).is_real()
    assert not (Z * I).is_real()
    assert (Z * ZB).d_z() == ZB
    assert (Z**3).evaluate(2j) == pytest.approx(-8j)
    assert str(Z * Z - 1) == "-1 + z^2"


def test_exact_poly_laurent_and_variables():
    mu = ExactPoly.variable(0, 1, ("mu",))
    inv = ExactPoly.variable(0, -2, ("mu",))
    assert (mu * mu * inv) == ExactPoly.constant(1, ("mu",))
    with pytest.raises(ValueError):
        Z + mu
    with pytest.raises(ValueError):
        Z**-1


def test_polynomials_immutable():
    with pytest.raises(AttributeError):
        Z.terms = {}


def test_dot_and_cross():
    e = [ConjPolynomial.const(x) for x in (1, 0, 0)]
    f = [ConjPolynomial.const(x) for x in (0, 1, 0)]
    assert dot(e, e) == 1 and dot(e, f) == 0
    assert tuple(cross(e, f)) == tuple(ConjPolynomial.const(x) for x in (0, 0, 1))


coeff = st.builds(CycScalar, *(st.fractions(min_value=-3, max_value=3, max_denominator=5) for _ in range(4)))
monomial_terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=5)


@given(monomial_terms)
@settings(max_examples=50, deadline=None)
def test_conj_involution_polynomial(terms):
    p = ConjPolynomial(terms)
    assert p.conj().conj() == p
    assert (p * p.conj()).is_real()


@given(st.lists(monomial_terms, min_size=1, max_size=6))
@settings(max_examples=30, deadline=None)
def test_conj_involution_series(terms):
    s = MuSeries(tuple(ConjPolynomial(t) for t in terms))
    assert s.conj().conj() == s
    assert s.conj().conj().coeffs == s.coeffs


# -- mu series ---------------------------------------------------------------------------------


@given(st.lists(monomial_terms, min_size=1, max_size=6), st.fractions(min_value=1, max_value=9, max_denominator=4))
@settings(max_examples=30, deadline=None)
def test_series_times_inverse_is_one(terms, lead):
    coeffs = [ConjPolynomial.const(lead)] + [ConjPolynomial(t) for t in terms]
    s = MuSeries(tuple(coeffs))
    prod = s * s.inverse()
    assert prod == MuSeries.constant(1, s.order)


def test_series_inverse_known():
    s = MuSeries.from_terms({0: 1, 1: -1}, order=6)
    inv = s.inverse()
    assert all(inv.coefficient(k) == 1 for k in range(7))
    assert inv.exact_remainder_dropped


def test_series_inverse_requires_unit():
    with pytest.raises(NonUnitLeadingTerm):
        MuSeries.from_terms({1: 1}, order=4).inverse()
    with pytest.raises(NonUnitLeadingTerm):
        MuSeries.from_terms({0: Z}, order=4).inverse()


def test_series_truncation_flags():
    s = MuSeries.from_terms({0: 1, 3: Z}, order=4)
    assert not s.exact_remainder_dropped
    assert (s * s).exact_remainder_dropped
    assert not MuSeries.from_terms({0: 1, 2: 1}, order=4).__mul__(MuSeries.constant(2, 4)).exact_remainder_dropped
    assert s.shift(2).coefficient(2) == 1
    assert s.truncate(2).exact_remainder_dropped
    with pytest.raises(IndexError):
        s.coefficient(5)


def test_series_evaluate():
    s = MuSeries.from_terms({0: 1, 2: Z}, order=3)
    assert s.evaluate(2.0, 0.5) == pytest.approx(1 + 0.25 * 2)


# -- constraints and conformality ------------------------------------------------------------------------


@pytest.mark.parametrize("a", [3, 6, Fraction(1, 2)])
def test_constraints_hold(a):
    res = check_constraints(a)
    assert res.ok and bool(res)
    assert len(res.checked) == 9


def test_constraints_b_value():
    co = family_coefficients(3)
    assert 2 * J * (J - 1) * co["b"] == 9


def test_constraints_perturbation_reported():
    res = check_constraints(3, perturb={"a1": (1, 0, 0)})
    assert not res.ok
    rem = dict(res.violations)
    # <a1 + e1, a1 + e1> = 2 <a1, e1> + 1 with <a1, e1> = 1/(2 mu^2)
    assert rem["<a1,a1> = 0"] == "mu^-2 + 1"


def test_family_coefficients_match_numeric_vectors():
    co = family_coefficients(3)
    mu = 0.7
    vecs = FourEndedFamilyParams(mu, 3.0).vectors
    for name, v in zip(("a1", "a2", "a3", "a4"), vecs):
        got = np.array([c.evaluate(mu) for c in co[name]])
        assert np.allclose(got, v, atol=1e-13)


@pytest.mark.parametrize("a", [3, 6])
def test_conformality_exact(a):
    assert conformality_exact(a).ok


def test_conformality_broken_by_a4():
    res = conformality_exact(3, a4_override=(0, 0, 0))
    assert not res.ok
    assert res.violations[0][1] == "81/4*z^2*mu^6 - 81/2*z^5*mu^3 + 81/4*z^8"


# -- Weierstrass identities ---------------------------------------------------------------------------


def test_weierstrass_enneper_pair():
    res = check_weierstrass_identities([0, 1], [1])
    assert res.ok
    assert res.details["Omega"] == ConjPolynomial.const(-2)
    assert res.details["conformal_factor_sq"] == (1 + Z * ZB) ** 2


def test_weierstrass_generic_pair():
    assert check_weierstrass_identities([0, 0, 1], [1, 1]).ok


def test_weierstrass_cyclotomic_coefficients():
    assert check_weierstrass_identities([0, 1, I], [1, J]).ok


def test_weierstrass_gcd_precondition():
    res = check_weierstrass_identities([0, 1], [0, 1])
    assert not res.ok
    assert res.violations[0][0] == "precondition gcd(P, Q) = 1"


def test_exact_gcd():
    # (z - 1)(z + 2) and (z - 1)(z + 3) share z - 1
    g = exact_gcd([-2, 1, 1], [-3, 2, 1])
    assert len(g) == 2
    assert g[0] / g[1] == -1
    assert len(exact_gcd([0, 1], [1])) == 1


# -- blow-up series -----------------------------------------------------------------------------------


@pytest.mark.parametrize("a, p", [(3, DEFAULT_POINT), (3, SECOND_POINT), (6, DEFAULT_POINT), (6, SECOND_POINT)])
def test_certify_blowup(a, p):
    res = certify_blowup(a, p)
    assert res.ok, res.violations
    # the next correction vanishes identically
    assert res.details["mu^10 nonconstant"] == ("0", "0", "0")


def test_certify_blowup_needs_order_nine():
    with pytest.raises(ValueError):
        certify_blowup(3, DEFAULT_POINT, order=8)


def test_blowup_mu9_is_minus_enneper():
    series = blowup_series(3, DEFAULT_POINT)
    E = enneper_bubble(3)
    for c, e in zip(series.nonconstant(9), E):
        assert c == -e
    for k in (7, 8):
        assert all(c.is_zero() for c in series.nonconstant(k))


def test_enneper_bubble_matches_numeric():
    z = 0.4 - 0.3j
    for a, ref in ((3, enneper()), (6, enneper_scaled(4.0, 0.5))):
        got = np.array([c.evaluate(z) for c in enneper_bubble(a)])
        assert np.allclose(got, ref.phi(np.array([z]))[0], atol=1e-14)


def test_norm_series_fixture():
    # frozen from the exact recomputation (S = mu^6 |Psi(mu^3 z) - p|^2)
    s = norm_series(3, DEFAULT_POINT, order=7)
    expected = {
        0: ConjPolynomial.const(9),
        4: ConjPolynomial.const(Fraction(81, 2)),
        5: ConjPolynomial.const(-36),
        6: 4 - 27 * Z - 27 * ZB + 9 * Z**3 + 9 * ZB**3,
    }
    for k in range(8):
        assert s.coefficient(k) == expected.get(k, ConjPolynomial()), k
    s2 = norm_series(3, SECOND_POINT, order=7)
    assert s2.coefficient(3) == 6
    assert s2.coefficient(5) == -54
    assert s2.coefficient(6) == 11 - 27 * Z - 27 * ZB + 9 * Z**3 + 9 * ZB**3
    assert s2.coefficient(7) == Fraction(-27, 2)


def test_scaled_holomorphic_part_matches_numeric():
    mu = 0.1
    model = family_psi_mu(FourEndedFamilyParams(mu, 3.0))
    f = scaled_holomorphic_part(3, order=20)
    rng = np.random.default_rng(4)
    for z in rng.uniform(0.1, 1.5, 5) * np.exp(1j * rng.uniform(0, 6, 5)):
        numeric = mu**3 * model.F(np.array([mu**3 * z]))[0]
        exact = np.array([c.evaluate(z, mu) for c in f])
        assert np.allclose(exact, numeric, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("a, p", [(3, DEFAULT_POINT), (6, SECOND_POINT)])
def test_embedding_consistency(a, p):
    # order 20 puts the dropped tail far below 1e-10 at mu = 0.1
    mu = 0.1
    series = blowup_series(a, p, order=20)
    model = inverted_family(float(a), tuple(float(x) for x in p))(mu)
    rng = np.random.default_rng(8)
    for z in rng.uniform(0.1, 2, 5) * np.exp(1j * rng.uniform(0, 6, 5)):
        exact = np.array(series.evaluate(z, mu))
        numeric = model.phi(np.array([mu**3 * z]))[0]
        assert np.max(np.abs(exact - numeric)) < 1e-10


def test_check_result_serialization():
    d = check_constraints(3).as_dict()
    assert d["ok"] is True and d["violations"] == []
    assert d["name"] == "constraints"
