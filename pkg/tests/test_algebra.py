import cmath
from fractions import Fraction

import numpy as np
import pytest
import scipy.signal
from hypothesis import given, settings
from hypothesis import strategies as st

from bubblelab.algebra import (
    I,
    J,
    ONE,
    ZERO,
    ZETA,
    ComplexPolynomial,
    CycScalar,
    PartialFractions,
    PoleTerm,
    RationalFunction,
    Z,
    cyc_arith,
    partial_fractions,
    ratfunc_derive,
    ratfunc_derive_quotient,
    ratfunc_eval,
)
from bubblelab.errors import ClusteredRootsError, PeriodError, PoleError

CUBE_ROOTS = [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]


def rf(num, den=(1.0,)):
    return RationalFunction.from_coeffs(num, den)


# well-conditioned coefficients: exact zeros or magnitude at least 1e-3
coef = st.one_of(st.just(0.0), st.floats(1e-3, 3), st.floats(-3, -1e-3))


# -- polynomials -------------------------------------------------------------


def test_polynomial_trims_and_degree():
    p = ComplexPolynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert ComplexPolynomial([0]).is_zero()
    assert p.leading == 2


def test_polynomial_arithmetic():
    p = ComplexPolynomial([1, 1])
    q = ComplexPolynomial([-1, 1])
    assert (p * q).allclose(ComplexPolynomial([-1, 0, 1]))
    assert (p + q).allclose(2 * Z)
    assert (p**3).allclose(ComplexPolynomial([1, 3, 3, 1]))


def test_polynomial_calculus():
    p = ComplexPolynomial([1, 2, 3])
    assert p.derivative().allclose(ComplexPolynomial([2, 6]))
    assert p.antiderivative().derivative().allclose(p)


def test_polynomial_divmod():
    q, r = ComplexPolynomial([1, 0, 0, 1]).divmod(ComplexPolynomial([1, 1]))
    assert q.allclose(ComplexPolynomial([1, -1, 1]))
    assert r.is_zero() or abs(r(0)) < 1e-12


def test_taylor_at_matches_shift():
    p = ComplexPolynomial([1, 2, 3, 4])
    c = p.taylor_at(1.5)
    w = 0.3
    assert abs(sum(ck * w**k for k, ck in enumerate(c)) - p(1.5 + w)) < 1e-12


def test_roots_of_cube_roots_of_unity():
    p = ComplexPolynomial([-1, 0, 0, 1])
    roots = sorted(p.roots, key=cmath.phase)
    assert np.allclose(roots, sorted(CUBE_ROOTS, key=cmath.phase), atol=1e-14)


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5))
@settings(max_examples=50, deadline=None)
def test_from_roots_roundtrip(roots):
    p = ComplexPolynomial.from_roots(roots)
    for r in roots:
        assert abs(p(r)) <= 1e-9 * max(1.0, np.max(np.abs(p.coeffs)))


# -- rational functions --------------------------------------------------------


def test_rational_reduction_cancels_common_factor():
    R = rf([-1, 0, 1], [-1, 1])
    assert R.is_polynomial
    assert abs(R(3.0) - 4.0) < 1e-12


def test_ratfunc_eval_examples():
    assert ratfunc_eval(rf([0, 1], [-1, 1]), 2.0) == pytest.approx(2.0)
    assert ratfunc_eval(rf([3], [-1, 0, 0, 1]), 0.0) == pytest.approx(-3.0)
    with pytest.raises(PoleError):
        ratfunc_eval(rf([1], [0, 1]), 0.0)


def test_pole_error_is_zero_division():
    with pytest.raises(ZeroDivisionError):
        ratfunc_eval(rf([1], [-1, 1]), 1.0)


@pytest.mark.parametrize(
    "R, expected",
    [
        (rf([1], [0, 1]), lambda z: -1 / z**2),
        (rf([0, 0, 1]), lambda z: 2 * z),
        (rf([1, 2], [3, 0, 1]), lambda z: (2 * (3 + z**2) - (1 + 2 * z) * 2 * z) / (3 + z**2) ** 2),
    ],
)
def test_ratfunc_derive_examples(R, expected):
    dR = ratfunc_derive(R)
    for z in (0.3 + 0.2j, 1.7 - 0.4j, -2.1j):
        assert abs(dR(z) - expected(z)) < 1e-10 * max(1, abs(expected(z)))


def test_omega_of_normalized_enneper_pair():
    P, Q = rf([0, 1]), rf([1])
    w = P * ratfunc_derive(Q) - ratfunc_derive(P) * Q
    assert abs(w(0.0) + 1) < 1e-14
    assert abs(2 * w(0.4 + 0.1j) + 2) < 1e-14


@given(
    st.lists(coef, min_size=1, max_size=4),
    st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=3, unique=True),
)
@settings(max_examples=40, deadline=None)
def test_derive_routes_and_central_difference_agree(num, poles):
    sep = min((abs(a - b) for i, a in enumerate(poles) for b in poles[i + 1 :]), default=1.0)
    if sep < 0.2 or num[-1] == 0:
        return
    den = ComplexPolynomial.from_roots(poles)
    R = RationalFunction(ComplexPolynomial(num), den)
    d1, d2 = ratfunc_derive(R), ratfunc_derive_quotient(R)
    h = 1e-5
    for z in (2.7 + 0.3j, -2.5 - 1.1j, 0.2 + 2.6j):
        if min(abs(z - p) for p in poles) < 0.3:
            continue
        fd = (R(z + h) - R(z - h)) / (2 * h)
        scale = max(abs(d2(z)), 1e-3)
        assert abs(d1(z) - d2(z)) <= 1e-8 * scale
        assert abs(fd - d1(z)) <= 1e-6 * scale


# -- partial fractions -------------------------------------------------------------


def test_partial_fractions_simple_pair():
    pf = partial_fractions(rf([1], [-1, 0, 1]))
    res = pf.residues()
    assert res[min(res, key=lambda p: abs(p - 1))] == pytest.approx(0.5)
    assert res[min(res, key=lambda p: abs(p + 1))] == pytest.approx(-0.5)
    assert pf.polynomial.is_zero()


def test_partial_fractions_cube_roots_residue_oracle():
    pf = partial_fractions(rf([3], [-1, 0, 0, 1]))
    assert len(pf.terms) == 3
    for t in pf.terms:
        assert t.order == 1
        assert abs(t.coeff - 1 / t.pole**2) < 1e-12
        assert min(abs(t.pole - w) for w in CUBE_ROOTS) < 1e-14


def test_partial_fractions_polynomial_only():
    pf = partial_fractions(rf([0, 1]))
    assert pf.terms == ()
    assert pf.polynomial.allclose(Z)


def test_partial_fractions_double_pole():
    # 1/((z-1)^2 (z+2)) = A/(z-1) + B/(z-1)^2 + C/(z+2)
    R = RationalFunction(ComplexPolynomial([1]), ComplexPolynomial.from_roots([1, 1, -2]))
    pf = partial_fractions(R)
    orders = sorted((t.order, round(t.pole.real)) for t in pf.terms)
    assert orders == [(1, -2), (1, 1), (2, 1)]
    for t in pf.terms:
        if t.order == 2:
            assert abs(t.coeff - 1 / 3) < 1e-9
        elif round(t.pole.real) == 1:
            assert abs(t.coeff + 1 / 9) < 1e-9
        else:
            assert abs(t.coeff - 1 / 9) < 1e-9


def test_partial_fractions_against_scipy_residue():
    num = [2.0, -1.0, 0.5]
    roots = [0.5, -1.0 + 1.0j, -1.0 - 1.0j, 2.0]
    den = ComplexPolynomial.from_roots(roots)
    pf = partial_fractions(RationalFunction(ComplexPolynomial(num), den))
    # scipy wants highest-degree-first coefficients
    r, p, k = scipy.signal.residue(num[::-1], np.asarray(den.coeffs)[::-1])
    ours = pf.residues()
    for ri, pi in zip(r, p):
        key = min(ours, key=lambda q: abs(q - pi))
        assert abs(ours[key] - ri) < 1e-9


def test_clustered_roots_rejected():
    # too far apart to merge, too close to resolve to 1e-9
    den = ComplexPolynomial.from_roots([0.3, 0.3 + 1e-4])
    with pytest.raises(ClusteredRootsError):
        partial_fractions(RationalFunction(ComplexPolynomial([1]), den))


def test_unresolvable_roots_merge_into_multiple_pole():
    den = ComplexPolynomial.from_roots([0.3, 0.3 + 1e-12])
    pf = partial_fractions(RationalFunction(ComplexPolynomial([1]), den))
    assert [t.order for t in pf.terms] == [2]
    assert abs(pf.terms[0].pole - 0.3) < 1e-10


def test_antiderivative_rejects_logarithm():
    pf = PartialFractions(ComplexPolynomial([0]), (PoleTerm(0j, 1, 1.0),))
    with pytest.raises(PeriodError):
        pf.antiderivative()


def test_antiderivative_of_double_pole():
    pf = PartialFractions(ComplexPolynomial([1.0]), (PoleTerm(1.0, 2, 3.0),))
    F = pf.antiderivative()
    z, h = 0.3 + 0.4j, 1e-6
    assert abs((F(z + h) - F(z - h)) / (2 * h) - pf(z)) < 1e-7


@given(
    st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=5, unique=True),
    st.lists(coef, min_size=1, max_size=7),
)
@settings(max_examples=60, deadline=None)
def test_reassembly_property(poles, num):
    sep = min((abs(a - b) for i, a in enumerate(poles) for b in poles[i + 1 :]), default=1.0)
    if sep < 0.05 or num[-1] == 0:
        return
    R = RationalFunction(ComplexPolynomial(num), ComplexPolynomial.from_roots(poles))
    pf = partial_fractions(R)  # check=True asserts 1e-9 reassembly internally
    if len(R.poles) == 0:
        return
    rng = np.random.default_rng(0)
    zs = rng.uniform(-3, 3, 10) + 1j * rng.uniform(-3, 3, 10)
    for z in zs:
        if min(abs(z - p) for p in R.poles) < 0.05:
            continue
        assert abs(pf(z) - R(z)) <= 1e-9 * max(1.0, abs(R(z)))


def test_to_rational_roundtrip():
    R = rf([1, 0, 2], [2, 0, 0, 1])
    back = partial_fractions(R).to_rational()
    for z in (0.5j, 1.3 + 0.2j):
        assert abs(back(z) - R(z)) < 1e-12


# -- cyclotomic field -----------------------------------------------------------------


def test_i_squared_and_j_cubed():
    assert cyc_arith(I, I, "mul") == -1
    assert J**3 == ONE
    assert ZETA**12 == ONE
    assert ZETA**6 == -1


def test_b_parameter_exact():
    a = CycScalar(3)
    b = 3 * a / (2 * J * (J - 1))
    assert 2 * J * (J - 1) * b == 9
    assert abs(b.to_complex() - 9 / (2 * (J.to_complex()) * (J.to_complex() - 1))) < 1e-14


def test_embedding_values():
    assert abs(I.to_complex() - 1j) < 1e-15
    assert abs(J.to_complex() - cmath.exp(2j * cmath.pi / 3)) < 1e-15


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        cyc_arith(ZERO, None, "inv")


def test_conj_examples():
    assert I.conj() == -I
    assert J.conj() == J * J
    assert cyc_arith(ZETA, None, "conj") == ZETA**11


def test_unknown_op():
    with pytest.raises(ValueError):
        cyc_arith(ONE, ONE, "pow")


fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
cyc = st.builds(CycScalar, fracs, fracs, fracs, fracs)


@given(cyc, cyc, cyc)
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + ZERO == a and a * ONE == a
    if not a.is_zero():
        assert a * a.inv() == ONE


@given(cyc, cyc)
@settings(max_examples=60, deadline=None)
def test_embedding_is_ring_homomorphism(a, b):
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-12 * (1 + abs(a.to_complex() * b.to_complex()))
    assert abs((a + b).to_complex() - (a.to_complex() + b.to_complex())) < 1e-12 * (1 + abs(a.to_complex()) + abs(b.to_complex()))
    assert abs(a.conj().to_complex() - a.to_complex().conjugate()) < 1e-12 * (1 + abs(a.to_complex()))


@given(cyc, cyc)
@settings(max_examples=40, deadline=None)
def test_conj_is_involutive_ring_map(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()


def test_rationals_stored_reduced():
    x = CycScalar(Fraction(2, 4), 0, Fraction(6, 3), 0)
    assert x.c[0] == Fraction(1, 2) and x.c[0].denominator == 2
    assert x.c[2] == 2


def test_immutable():
    with pytest.raises(AttributeError):
        ONE.c = (0, 0, 0, 0)
