import math

import numpy as np
import pytest
from scipy import integrate

from bubblelab.algebra import ComplexPolynomial, RationalFunction
from bubblelab.energy import (
    KINDS,
    QuadratureSpec,
    densities,
    energy_report,
    gauss_map_degree,
    integrate_density,
)
from bubblelab.errors import NonConvergent
from bubblelab.surfaces import (
    FourEndedFamilyParams,
    RoundSphere,
    Topology,
    enneper,
    enneper_scaled,
    family_psi_mu,
    invert,
    lopez,
    plane,
)

PI = math.pi
P0 = (0.0, 0.0, 2.0)
TOL = 1e-3


def psi(mu=0.3):
    return family_psi_mu(FourEndedFamilyParams(mu))


MODELS = {
    "plane": plane,
    "enneper": enneper,
    "enneper-scaled": lambda: enneper_scaled(2.0, 0.5),
    "lopez": lopez,
    "psi-mu": psi,
    "inverted-psi-mu": lambda: invert(psi(), P0),
    "inverted-lopez": lambda: invert(lopez(), P0),
    "sphere": lambda: RoundSphere((0, 0, 1), 2.0),
}


@pytest.fixture(scope="module")
def reports():
    return {name: energy_report(build()) for name, build in MODELS.items()}


@pytest.mark.parametrize(
    "name, W, K, A2tf",
    [
        ("psi-mu", 0.0, -12 * PI, 24 * PI),
        ("inverted-psi-mu", 16 * PI, 4 * PI, 24 * PI),
        ("inverted-lopez", 16 * PI, 8 * PI, 16 * PI),
        ("enneper", 0.0, -4 * PI, 8 * PI),
        ("lopez", 0.0, -8 * PI, 16 * PI),
        ("sphere", 4 * PI, 4 * PI, 0.0),
    ],
)
def test_reference_energies(reports, name, W, K, A2tf):
    r = reports[name]
    assert r.willmore == pytest.approx(W, rel=5e-3, abs=1e-9)
    assert r.gauss_integral == pytest.approx(K, rel=5e-3)
    assert r.tracefree == pytest.approx(A2tf, rel=5e-3, abs=1e-9)


@pytest.mark.parametrize("name", list(MODELS))
def test_gauss_bonnet(reports, name):
    r = reports[name]
    assert abs(r.gauss_integral - r.gauss_bonnet_predicted) <= 2 * TOL * max(abs(r.gauss_integral), 1e-12)


@pytest.mark.parametrize("name", list(MODELS))
def test_identity_residuals(reports, name):
    r = reports[name]
    scale = max(r.total_curv, r.tracefree, 1e-12)
    assert all(abs(x) < 2 * TOL * scale for x in r.identity_residuals)


@pytest.mark.parametrize("name", list(MODELS))
def test_error_estimates_nonnegative(reports, name):
    assert all(e >= 0 for e in reports[name].errors)


def test_end_order_convention():
    # Enneper's end has multiplicity 3; b = multiplicity + 1 reproduces -4 pi
    assert Topology(2, (), (4,)).gauss_bonnet() == pytest.approx(-4 * PI)
    assert Topology(2, (), (2,)).gauss_bonnet() == pytest.approx(0.0)
    assert Topology(2, (), (4, 2)).inverted() == Topology(2, (2,), ())


def test_enneper_curvature_against_closed_form():
    # K e^(2 lam) = -4 / (1 + r^2)^2 integrates to -4 pi
    value, err = integrate_density(enneper(), "K", QuadratureSpec.for_model(enneper()))
    assert value == pytest.approx(-4 * PI, rel=5e-3)
    z = np.array([0.3 + 0.4j, 2.0])
    assert np.allclose(densities(enneper(), z)[3], -4 / (1 + np.abs(z) ** 2) ** 2)


def test_lopez_tracefree_against_scipy_quadrature():
    # independent route: scipy adaptive quadrature in polar coordinates, r = e^t
    model = lopez()

    def ring(t):
        r = math.exp(t)
        th = np.linspace(0, 2 * PI, 64, endpoint=False)
        z = r * np.exp(1j * th)
        return float(np.mean(densities(model, z)[2])) * 2 * PI * r * r

    value, _ = integrate.quad(ring, -12, 12, limit=400, epsabs=1e-10)
    ours, _ = integrate_density(model, "A2_tracefree", QuadratureSpec.for_model(model))
    assert value == pytest.approx(16 * PI, rel=1e-6)
    assert ours == pytest.approx(value, rel=2e-3)


@pytest.mark.parametrize("name", ["inverted-lopez", "inverted-psi-mu", "enneper"])
def test_chart_split_independence(name):
    model = MODELS[name]()
    vals = []
    for R0 in (0.8, 1.0, 1.25):
        spec = QuadratureSpec.for_model(model, chart_split_radius=R0)
        r = energy_report(model, spec=spec)
        vals.append(np.array([r.willmore, r.total_curv, r.tracefree, r.gauss_integral]))
    for v in vals[1:]:
        scale = np.maximum(np.abs(vals[0]), 1e-9)
        assert np.all(np.abs(v - vals[0]) < 2 * TOL * scale + 1e-9)


@pytest.mark.parametrize("base", ["lopez", "psi-mu", "enneper"])
def test_tracefree_energy_is_inversion_invariant(reports, base):
    inv = energy_report(invert(MODELS[base](), (0.1, -0.2, 2.5)))
    assert inv.tracefree == pytest.approx(reports[base].tracefree, rel=2 * TOL)


def test_minimal_h2_short_circuit():
    spec = QuadratureSpec.for_model(lopez())
    assert integrate_density(lopez(), "H2", spec) == (0.0, 0.0)


def test_unknown_density_kind():
    with pytest.raises(ValueError):
        integrate_density(plane(), "H3", QuadratureSpec())


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureSpec(singular_points=((0.5, "pole"), (0.5, "pole")))


def test_nonconvergent_when_depth_exhausted():
    model = invert(lopez(), P0)
    spec = QuadratureSpec.for_model(model, rel_tol=1e-12, max_depth=2)
    with pytest.raises(NonConvergent):
        energy_report(model, spec=spec)


def test_report_is_deterministic():
    a = energy_report(invert(lopez(), P0)).as_dict()
    b = energy_report(invert(lopez(), P0)).as_dict()
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_report_units_of_pi(reports):
    d = reports["inverted-lopez"].as_dict(units_of_pi=True)
    assert set(d) == {
        "model",
        "W",
        "E",
        "E_tracefree",
        "K_integral",
        "gauss_bonnet_predicted",
        "residuals",
        "error_estimates",
        "panels_used",
        "seconds",
    }
    assert d["W"] == pytest.approx(16, rel=5e-3)
    assert len(d["residuals"]) == 3 and len(d["error_estimates"]) == len(KINDS)


@pytest.mark.parametrize("name, degree", [("enneper", 1), ("lopez", 2), ("psi-mu", 3)])
def test_gauss_map_degree_oracle(reports, name, degree):
    g = MODELS[name]().gauss_map()
    assert gauss_map_degree(g) == degree
    assert reports[name].gauss_integral == pytest.approx(-4 * PI * degree, rel=5e-3)


def test_gauss_map_degree_rejects_constant():
    with pytest.raises(ValueError):
        gauss_map_degree(RationalFunction(ComplexPolynomial([2.0]), ComplexPolynomial([1.0])))
