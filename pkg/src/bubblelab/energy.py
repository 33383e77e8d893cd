"""Curvature energies by adaptive two-chart quadrature over the Riemann sphere.

The sphere is covered by the disk |z| <= R0 and the disk |w| <= 1/R0 with
w = 1/z; in the second chart each flat density picks up the factor |w|^-4.
Both disks are integrated in polar coordinates with tensor Gauss-Legendre
panels that are split into four until the coarse/fine differences are small.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import RationalFunction
from .errors import NonConvergent
from .surfaces.core import ImmersionModel, Topology

KINDS = ("H2", "A2", "A2_tracefree", "K")
NODES = 7
_GL_X, _GL_W = np.polynomial.legendre.leggauss(NODES)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-3
    max_depth: int = 18
    singular_points: tuple[tuple[complex | None, str], ...] = ()
    chart_split_radius: float = 1.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        finite = [c for c, _ in self.singular_points if c is not None]
        for i, a in enumerate(finite):
            for b in finite[i + 1 :]:
                if abs(a - b) < 1e-12:
                    raise ValueError("singular points must be pairwise distinct")

    @classmethod
    def for_model(cls, model: ImmersionModel, **kwargs) -> QuadratureSpec:
        pts = tuple((s.center, s.kind) for s in model.singularities)
        return cls(singular_points=pts, **kwargs)


def densities(model: ImmersionModel, z: np.ndarray) -> np.ndarray:
    """Flat-chart densities (H^2, |A|^2, |Å|^2, K) times e^(2 lam), shape (4, ...)."""
    with np.errstate(all="ignore"):
        fr = model.frames(z)
        e2l = fr.conf_factor**2
        tracefree = 2.0 * np.abs(fr.Omega) ** 2 / e2l
        if model.minimal:
            h2 = np.zeros_like(e2l)
            k = -0.5 * tracefree
        else:
            h2 = fr.H**2 * e2l
            k = fr.K * e2l
        full = 2.0 * h2 + tracefree
    out = np.stack([h2, full, tracefree, k])
    return np.where(np.isfinite(out), out, 0.0)


@dataclass
class _Panel:
    chart: str
    r0: float
    r1: float
    t0: float
    t1: float
    depth: int
    value: np.ndarray = field(default=None)
    children_values: np.ndarray = field(default=None)

    def split(self):
        rm = 0.5 * (self.r0 + self.r1) if self.r0 > 0 else self.r1 / 4.0
        tm = 0.5 * (self.t0 + self.t1)
        return [
            _Panel(self.chart, r0, r1, t0, t1, self.depth + 1)
            for r0, r1 in ((self.r0, rm), (rm, self.r1))
            for t0, t1 in ((self.t0, tm), (tm, self.t1))
        ]

    @property
    def error(self) -> np.ndarray:
        return np.abs(self.value - self.children_values.sum(axis=0))


def _nodes(panels):
    """Quadrature nodes (complex points in the panel's chart) and weights."""
    r0 = np.array([p.r0 for p in panels])[:, None, None]
    r1 = np.array([p.r1 for p in panels])[:, None, None]
    t0 = np.array([p.t0 for p in panels])[:, None, None]
    t1 = np.array([p.t1 for p in panels])[:, None, None]
    x = _GL_X[None, :, None]
    y = _GL_X[None, None, :]
    r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * x
    t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * y
    w = (0.25 * (r1 - r0) * (t1 - t0)) * _GL_W[None, :, None] * _GL_W[None, None, :] * r
    pts = r * np.exp(1j * t)
    return np.broadcast_to(pts, w.shape), w


def _integrate_panels(model, panels, kinds_mask):
    """Rule values, shape (len(panels), 4), for a batch of panels."""
    if not panels:
        return np.zeros((0, 4))
    out = np.zeros((len(panels), 4))
    for chart in ("z", "w"):
        idx = [i for i, p in enumerate(panels) if p.chart == chart]
        if not idx:
            continue
        pts, w = _nodes([panels[i] for i in idx])
        if chart == "z":
            vals = densities(model, pts)
        else:
            vals = densities(model, 1.0 / pts) / np.abs(pts)[None] ** 4
        vals = vals * kinds_mask[:, None, None, None]
        out[idx] = np.einsum("kpij,pij->pk", vals, w)
    return out


def _initial_panels(spec: QuadratureSpec):
    R0 = spec.chart_split_radius
    panels = []
    for chart, R in (("z", R0), ("w", 1.0 / R0)):
        radii = {0.0, R}
        radii.update(R * 2.0**-k for k in range(1, 11))
        angles = set(np.linspace(0, 2 * np.pi, 9)[:-1])
        for c, _ in spec.singular_points:
            if c is None or c == 0:
                continue
            q = c if chart == "z" else 1.0 / c
            if abs(q) < R:
                radii.add(abs(q))
                angles.add(float(np.angle(q)) % (2 * np.pi))
        rs = sorted(radii)
        ts = sorted(angles) + [2 * np.pi]
        ts = [ts[0]] + [b for a, b in zip(ts, ts[1:]) if b - a > 1e-12]
        for r0, r1 in zip(rs, rs[1:]):
            for t0, t1 in zip(ts, ts[1:]):
                panels.append(_Panel(chart, r0, r1, t0, t1, 0))
    return panels


def _evaluate(model, panels, mask):
    """Fill value and children_values for panels lacking them."""
    todo = [p for p in panels if p.children_values is None]
    if not todo:
        return
    need_value = [p for p in todo if p.value is None]
    vals = _integrate_panels(model, need_value, mask)
    for p, v in zip(need_value, vals):
        p.value = v
    kids = [k for p in todo for k in p.split()]
    kv = _integrate_panels(model, kids, mask).reshape(len(todo), 4, 4)
    for p, v in zip(todo, kv):
        p.children_values = v


@dataclass(frozen=True)
class QuadratureResult:
    values: np.ndarray
    errors: np.ndarray
    panels: int


def integrate_all(model: ImmersionModel, spec: QuadratureSpec, kinds=KINDS) -> QuadratureResult:
    """Integrate the requested densities together with adaptive refinement."""
    mask = np.array([1.0 if k in kinds else 0.0 for k in KINDS])
    if model.minimal:
        mask[0] = 0.0
    panels = _initial_panels(spec)
    _evaluate(model, panels, mask)
    for _ in range(10_000):
        fine = np.array([p.children_values.sum(axis=0) for p in panels])
        errs = np.array([p.error for p in panels])
        total = fine.sum(axis=0)
        err = errs.sum(axis=0)
        scale = np.maximum(np.abs(total), 1e-2 * np.max(np.abs(total)) + 1e-14)
        tol = spec.rel_tol * scale
        if np.all(err <= tol):
            return QuadratureResult(total, err, len(panels))
        per_panel = tol / len(panels)
        bad = np.any(errs > per_panel[None, :], axis=1)
        # always refine at least the worst panel
        worst = int(np.argmax(np.max(errs / tol[None, :], axis=1)))
        bad[worst] = True
        new = []
        for p, b in zip(panels, bad):
            if not b:
                new.append(p)
                continue
            if p.depth >= spec.max_depth:
                raise NonConvergent(f"{model.name}: panel depth {spec.max_depth} reached, error {err} > {tol}")
            kids = p.split()
            for k, v in zip(kids, p.children_values):
                k.value = v
            new.extend(kids)
        panels = new
        _evaluate(model, panels, mask)
    raise NonConvergent(f"{model.name}: refinement loop did not terminate")


def integrate_density(model: ImmersionModel, kind: str, spec: QuadratureSpec) -> tuple[float, float]:
    """Integral of one density kind ('H2', 'A2', 'A2_tracefree' or 'K') and its error estimate."""
    if kind not in KINDS:
        raise ValueError(f"unknown density {kind!r}; expected one of {KINDS}")
    if kind == "H2" and model.minimal:
        return 0.0, 0.0
    res = integrate_all(model, spec, kinds=(kind,))
    i = KINDS.index(kind)
    return float(res.values[i]), float(res.errors[i])


@dataclass(frozen=True)
class EnergyReport:
    model: str
    willmore: float
    total_curv: float
    tracefree: float
    gauss_integral: float
    errors: tuple[float, float, float, float]
    gauss_bonnet_predicted: float | None
    identity_residuals: tuple[float, float, float]
    panels_used: int
    seconds: float

    def as_dict(self, units_of_pi: bool = False) -> dict:
        s = 1.0 / math.pi if units_of_pi else 1.0
        gb = None if self.gauss_bonnet_predicted is None else self.gauss_bonnet_predicted * s
        return {
            "model": self.model,
            "W": self.willmore * s,
            "E": self.total_curv * s,
            "E_tracefree": self.tracefree * s,
            "K_integral": self.gauss_integral * s,
            "gauss_bonnet_predicted": gb,
            "residuals": [r * s for r in self.identity_residuals],
            "error_estimates": [e * s for e in self.errors],
            "panels_used": self.panels_used,
            "seconds": self.seconds,
        }


def energy_report(model: ImmersionModel, topology: Topology | None = None, spec: QuadratureSpec | None = None) -> EnergyReport:
    """W, E, tracefree energy, integral of K, Gauss-Bonnet prediction and identity residuals.

    Residuals: E - 4W + 2 int K, Etf - 2W + 2 int K and E - Etf - 2W, all
    zero for exact integrals since |A|^2 = 4H^2 - 2K = |Å|^2 + 2H^2.
    """
    topology = topology if topology is not None else model.topology
    spec = spec if spec is not None else QuadratureSpec.for_model(model)
    start = time.perf_counter()
    res = integrate_all(model, spec)
    w, e, etf, k = (float(x) for x in res.values)
    gb = topology.gauss_bonnet() if topology is not None else None
    residuals = (e - 4 * w + 2 * k, etf - 2 * w + 2 * k, e - etf - 2 * w)
    return EnergyReport(
        model=model.name,
        willmore=w,
        total_curv=e,
        tracefree=etf,
        gauss_integral=k,
        errors=tuple(float(x) for x in res.errors),
        gauss_bonnet_predicted=gb,
        identity_residuals=residuals,
        panels_used=res.panels,
        seconds=time.perf_counter() - start,
    )


def gauss_map_degree(g: RationalFunction) -> int:
    """Degree of a nonconstant rational map of the sphere."""
    if g.degree == 0:
        raise ValueError("Gauss map must be nonconstant")
    return g.degree
