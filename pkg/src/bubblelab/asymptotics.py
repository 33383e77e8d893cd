"""Blow-up and residue diagnostics near concentration and branch points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateFit, SingularPoint
from .surfaces import (
    FourEndedFamilyParams,
    ImmersionModel,
    PolarGrid,
    enneper_scaled,
    family_psi_mu,
    invert,
)

DEFAULT_P = (0.0, 0.0, 2.0)


@dataclass(frozen=True)
class RadialWeight:
    """chi(z) = sqrt(epsilon^2 + |z|^2)."""

    epsilon: float

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    def __call__(self, z):
        return np.sqrt(self.epsilon**2 + np.abs(z) ** 2)


@dataclass(frozen=True)
class ResidueFit:
    radii: np.ndarray
    values: np.ndarray
    slope: float
    alpha: int
    r2: float

    def rows(self):
        return [(float(r), float(v)) for r, v in zip(self.radii, self.values)]


@dataclass(frozen=True)
class MultiplicityFit:
    radii: np.ndarray
    circle_means: np.ndarray
    theta_estimate: float

    def rows(self):
        return [(float(r), float(v)) for r, v in zip(self.radii, self.circle_means)]


@dataclass(frozen=True)
class ConcentrationResult:
    epsilon: float
    argmax: complex
    peak: float


def _circle(center, r: float, n: int) -> np.ndarray:
    """n points on a circle; center None means the circle |z| = 1/r around infinity."""
    ang = 2 * np.pi * np.arange(n) / n
    if center is None:
        return np.exp(1j * ang) / r
    return center + r * np.exp(1j * ang)


def _linear_fit(x, y) -> tuple[float, float, float]:
    """Least-squares slope, intercept and coefficient of determination."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(icpt), min(max(r2, 0.0), 1.0)


def _omega_weight(model: ImmersionModel, z) -> np.ndarray:
    with np.errstate(all="ignore"):
        fr = model.frames(np.asarray(z, dtype=complex))
        val = np.abs(fr.Omega) / fr.conf_factor
    return np.where(np.isfinite(val), val, 0.0)


def default_concentration_grid(r_max: float = 1.0) -> PolarGrid:
    return PolarGrid(0j, r_max * 1e-8, r_max, rings=160, sectors=48, spacing="geometric")


def concentration_speed(family, mu: float | None = None, grid: PolarGrid | None = None) -> ConcentrationResult:
    """epsilon = 2 / max |Omega| e^(-lam) over the grid, refined locally.

    `family` is a model or a callable mu -> model.  Returns +inf when Omega
    vanishes identically on the grid.
    """
    model = family(mu) if callable(family) and not isinstance(family, ImmersionModel) else family
    grid = grid or default_concentration_grid()
    pts = np.concatenate([[grid.center], grid.points()])
    vals = _omega_weight(model, pts)
    k = int(np.argmax(vals))
    peak, arg = float(vals[k]), complex(pts[k])
    if peak <= 0:
        return ConcentrationResult(math.inf, arg, 0.0)
    step = max(np.min(np.abs(pts[np.abs(pts - arg) > 0] - arg)), 1e-300)

    def neg(v):
        return -float(_omega_weight(model, np.array([complex(v[0], v[1])]))[0])

    res = minimize(
        neg,
        [arg.real, arg.imag],
        method="Nelder-Mead",
        options={"xatol": step * 1e-6, "fatol": peak * 1e-13, "initial_simplex": _simplex(arg, step)},
    )
    if -res.fun > peak * (1 + 1e-12):
        peak, arg = float(-res.fun), complex(res.x[0], res.x[1])
    return ConcentrationResult(2.0 / peak, arg, peak)


def _simplex(z: complex, step: float):
    return np.array([[z.real, z.imag], [z.real + step, z.imag], [z.real, z.imag + step]])


def inverted_family(a: complex = 3.0, p=DEFAULT_P) -> Callable[[float], ImmersionModel]:
    """mu -> inversion of the four-ended family at p."""
    return lambda mu: invert(family_psi_mu(FourEndedFamilyParams(mu, a)), p)


def bubble_limit(a: complex = 3.0) -> ImmersionModel:
    """Limit of (Phi_mu(mu^3 z) - Phi_mu(0)) / (-mu^9): Enneper with data (a^2/9, 3z/a)."""
    return enneper_scaled(a**2 / 9, 3 / a)


def surface_distance_estimate(model: ImmersionModel, p, radius: float = 50.0, n: int = 400) -> float:
    """Minimum of |Phi - p| over a dense polar sample of |z| <= radius.

    A sampled estimate of the distance from p to the surface (it can only
    overestimate the true distance).
    """
    g = PolarGrid(0j, 1e-6, radius, rings=n, sectors=n, spacing="geometric")
    with np.errstate(all="ignore"):
        phi = model.phi(g.points())
    d = np.linalg.norm(phi - np.asarray(p, float), axis=-1)
    return float(np.nanmin(d))


@dataclass(frozen=True)
class BlowupTable:
    mus: tuple[float, ...]
    sup_errors: tuple[float, ...]
    order: float
    intercept: float
    R: float
    a: complex
    p: tuple[float, float, float]
    min_distance: tuple[float, ...]

    @property
    def admissible(self) -> bool:
        """Whether every sampled distance from p to the surface exceeds 1."""
        return all(d > 1.0 for d in self.min_distance)

    def rows(self):
        return list(zip(self.mus, self.sup_errors))


def blowup_grid(R: float, n: int = 64) -> np.ndarray:
    """64 x 64 polar grid on |z| <= R: radii R k/n, k = 1..n, n angles, plus 0."""
    radii = R * np.arange(1, n + 1) / n
    ang = 2 * np.pi * np.arange(n) / n
    return np.concatenate([[0j], (radii[:, None] * np.exp(1j * ang)[None, :]).ravel()])


def blowup_compare(mu_list, R: float = 2.0, a: complex = 3.0, p=DEFAULT_P, check_distance: bool = True) -> BlowupTable:
    """Sup over |z| <= R of |(Phi_mu(mu^3 z) - Phi_mu(0)) / (-mu^9) - bubble(z)| for each mu.

    Also fits the order of decay of the sup error against mu (log-log slope)
    and records the sampled distance from p to each surface; the comparison
    itself only needs p off the surface.
    """
    mus = [float(m) for m in mu_list]
    if any(b >= a_ for a_, b in zip(mus, mus[1:])):
        raise ValueError("mu_list must be strictly decreasing")
    if R < 1:
        raise ValueError("R must be at least 1")
    bubble = bubble_limit(a)
    z = blowup_grid(R)
    ref = bubble.phi(z) - bubble.phi(np.array([0j]))
    errs, dists = [], []
    for mu in mus:
        model = invert(family_psi_mu(FourEndedFamilyParams(mu, a)), p)
        if check_distance:
            dists.append(surface_distance_estimate(model.base, p))
        vals = model.phi(np.concatenate([[0j], mu**3 * z]))
        scaled = (vals[1:] - vals[0]) / (-(mu**9))
        errs.append(float(np.max(np.linalg.norm(scaled - ref, axis=-1))))
    if len(mus) >= 2:
        order, icpt, _ = _linear_fit(np.log(mus), np.log(errs))
    else:
        order, icpt = math.nan, math.nan
    return BlowupTable(tuple(mus), tuple(errs), order, icpt, R, a, tuple(float(x) for x in p), tuple(dists))


def multiplicity_estimate(model: ImmersionModel, center, radii, n: int = 256) -> MultiplicityFit:
    """Circle means of r d_r lam, i.e. (1/2pi) times the flux of d_r lam.

    center None probes the point at infinity on circles |z| = 1/r (so the
    radii are w-chart radii).  The radial derivative uses central differences
    with step r/200; theta_estimate extrapolates the means linearly in r to 0.
    """
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    means = []
    for r in radii:
        h = r / 200.0
        if center is None:
            # lam as a function of the z-radius rho = 1/r; rho d_rho lam
            rho = 1.0 / r
            hr = rho / 200.0
            ang = np.exp(1j * 2 * np.pi * np.arange(n) / n)
            lp = _lam(model, (rho + hr) * ang)
            lm = _lam(model, (rho - hr) * ang)
            means.append(float(np.mean(rho * (lp - lm) / (2 * hr))))
        else:
            ang = np.exp(1j * 2 * np.pi * np.arange(n) / n)
            lp = _lam(model, center + (r + h) * ang)
            lm = _lam(model, center + (r - h) * ang)
            means.append(float(np.mean(r * (lp - lm) / (2 * h))))
    means = np.array(means)
    if len(radii) >= 2:
        slope, icpt, _ = _linear_fit(radii, means)
        theta = icpt
    else:
        theta = means[-1]
    return MultiplicityFit(radii, means, float(theta))


def _lam(model: ImmersionModel, z) -> np.ndarray:
    with np.errstate(all="ignore"):
        lam = np.log(model.frames(z).conf_factor)
    if not np.all(np.isfinite(lam)):
        raise SingularPoint(f"{model.name}: probe circle meets a singular point")
    return lam


def harnack_ratio(model: ImmersionModel, epsilon: float, theta: float, grid) -> tuple[float, float]:
    """(min, max) of e^lam / chi^theta over grid points (PolarGrid or array)."""
    z = grid.points() if isinstance(grid, PolarGrid) else np.asarray(grid, dtype=complex)
    with np.errstate(all="ignore"):
        conf = model.frames(z).conf_factor
    if not np.all(np.isfinite(conf)) or np.any(conf <= 0):
        raise SingularPoint(f"{model.name}: Harnack grid meets a singular point")
    ratio = conf / RadialWeight(epsilon)(z) ** theta
    return float(np.min(ratio)), float(np.max(ratio))


def harnack_grid(r_min: float, r_max: float = 1.0, rings: int = 80, sectors: int = 61) -> PolarGrid:
    """Geometric polar grid; an odd sector count keeps nodes off the rays at angles 2pi/3 and 4pi/3."""
    return PolarGrid(0j, r_min, r_max, rings=rings, sectors=sectors, spacing="geometric")


def _probe(model: ImmersionModel, probe: str, p, z) -> np.ndarray:
    with np.errstate(all="ignore"):
        fr = model.frames(z)
    if probe == "mean_curvature":
        vals = fr.H
    elif probe == "support":
        p = np.zeros(3) if p is None else np.asarray(p, dtype=float)
        vals = np.sum(fr.normal * (fr.phi - p), axis=-1)
    else:
        raise ValueError(f"unknown probe {probe!r}")
    if not np.all(np.isfinite(vals)):
        raise SingularPoint(f"{model.name}: probe circle meets a singular point")
    return np.abs(vals)


def second_residue_fit(model: ImmersionModel, center, probe: str = "mean_curvature", p=None, radii=None, n: int = 256) -> ResidueFit:
    """Fit sup_circle |probe| ~ C r^(-alpha); alpha = round(-slope).

    center None probes infinity with w-chart radii (circles |z| = 1/r).
    """
    if radii is None:
        radii = np.geomspace(1e-1, 1e-3, 9)
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    if len(radii) < 2 or radii[0] / radii[-1] < 100 * (1 - 1e-9):
        raise ValueError("radii must span at least two decades")
    sups = np.array([np.max(_probe(model, probe, p, _circle(center, r, n))) for r in radii])
    tiny = np.finfo(float).tiny * 1e10
    if np.any(sups <= tiny):
        raise DegenerateFit(f"{model.name}: probe vanishes on the circles")
    slope, _, r2 = _linear_fit(np.log(radii), np.log(sups))
    return ResidueFit(radii, sups, slope, int(round(-slope)), r2)


def _hvec_and_normal(model: ImmersionModel, z):
    with np.errstate(all="ignore"):
        fr = model.frames(z)
    return fr.H[..., None] * fr.normal, fr.normal


def first_residue(model: ImmersionModel, radius: float, center: complex = 0j, n: int = 512, return_scale: bool = False):
    """(1/4pi) times the flux of grad H - 3 pi_n(grad H) + grad^perp n x H through a circle.

    Here H is the mean-curvature vector H n, grad^perp = (-d_y, d_x) and
    pi_n the normal projection; derivatives by central differences with
    step radius/100 and the contour integral by an n-point trapezoid rule.
    With return_scale, also returns the sup of |grad H| on the circle.
    """
    if model.minimal:
        return (np.zeros(3), 0.0) if return_scale else np.zeros(3)
    h = radius / 100.0
    ang = 2 * np.pi * np.arange(n) / n
    z = center + radius * np.exp(1j * ang)
    Hp, _ = _hvec_and_normal(model, z + h)
    Hm, _ = _hvec_and_normal(model, z - h)
    Hu, _ = _hvec_and_normal(model, z + 1j * h)
    Hd, _ = _hvec_and_normal(model, z - 1j * h)
    Hv, n0 = _hvec_and_normal(model, z)
    _, np_ = _hvec_and_normal(model, z + h)
    _, nm = _hvec_and_normal(model, z - h)
    _, nu = _hvec_and_normal(model, z + 1j * h)
    _, nd = _hvec_and_normal(model, z - 1j * h)
    dHx, dHy = (Hp - Hm) / (2 * h), (Hu - Hd) / (2 * h)
    dnx, dny = (np_ - nm) / (2 * h), (nu - nd) / (2 * h)
    if not all(np.all(np.isfinite(a)) for a in (dHx, dHy, dnx, dny, Hv)):
        raise SingularPoint(f"{model.name}: residue circle meets a singular point")

    def proj(v):
        return np.sum(v * n0, axis=-1, keepdims=True) * n0

    Xx = dHx - 3 * proj(dHx) - np.cross(dny, Hv)
    Xy = dHy - 3 * proj(dHy) + np.cross(dnx, Hv)
    integrand = np.cos(ang)[:, None] * Xx + np.sin(ang)[:, None] * Xy
    gamma = integrand.sum(axis=0) * (2 * np.pi / n) * radius / (4 * np.pi)
    if return_scale:
        scale = float(np.max(np.sqrt(np.sum(dHx**2 + dHy**2, axis=-1))))
        return gamma, scale
    return gamma


def willmore_residual(model: ImmersionModel, z: complex, h: float) -> float:
    """|e^(-2 lam) Delta_flat H + 2 |Omega|^2 e^(-4 lam) H| with a 5-point Laplacian."""
    if model.minimal:
        return 0.0
    z = complex(z)
    pts = np.array([z, z + h, z - h, z + 1j * h, z - 1j * h])
    with np.errstate(all="ignore"):
        fr = model.frames(pts)
    H = fr.H
    if not np.all(np.isfinite(H)):
        raise SingularPoint(f"{model.name}: stencil meets a singular point")
    lap = (H[1] + H[2] + H[3] + H[4] - 4 * H[0]) / h**2
    e2l = fr.conf_factor[0] ** 2
    return float(abs(lap / e2l + 2 * abs(fr.Omega[0]) ** 2 / e2l**2 * H[0]))
