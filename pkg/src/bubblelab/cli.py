"""Command-line entry point.

Every command prints a report (JSON by default, CSV on request) carrying
the schema version and an echo of the resolved configuration.  Numbers are
always emitted; a failed check gives exit code 2.  Usage and runtime errors
exit with 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import verify as vf
from .elliptic import EllipticContext, eisenstein_g2, lattice_symmetry_residual
from .energy import QuadratureSpec, energy_report
from .errors import BubbleLabError
from .surfaces import (
    FourEndedFamilyParams,
    ImmersionModel,
    PolarGrid,
    chen_gackstatter_local,
    enneper,
    export_mesh,
    family_psi_mu,
    invert,
    lopez,
    plane,
)

SCHEMA_VERSION = "1.0"
BASE_MODELS = ("psi-mu", "lopez", "enneper", "chen-gackstatter", "plane")
COMMANDS = ("energies", "blowup", "residue", "multiplicity", "harnack", "first-residue", "residual", "verify", "g2", "mesh")
G2_CLOSED_FORM = math.gamma(0.25) ** 8 / (16 * math.pi**2)

# built-in defaults; a --config file overrides these and flags override both
DEFAULTS = {
    "model": None,
    "mu": None,
    "a": "3",
    "p": "0,0,2",
    "tol": 1e-3,
    "probe": None,
    "center": None,
    "radii": None,
    "mus": None,
    "R": 2.0,
    "z": "0.5",
    "hs": "1e-2,5e-3,2.5e-3",
    "order": 10,
    "truncation": 200,
    "rings": 32,
    "sectors": 48,
    "r_min": None,
    "r_max": None,
    "chart": "z",
    "expect": [],
    "expect_rtol": 5e-3,
    "bound": 100.0,
    "baseline": None,
    "output": None,
    "format": "json",
    "no_timestamp": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- configuration -------------------------------------------------------------


def _floats(text: str, n: int | None = None) -> tuple[float, ...]:
    try:
        vals = tuple(float(Fraction(x.strip())) if "/" in x else float(x) for x in str(text).split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} numbers, got {text!r}")
    return vals


def _fractions(text: str, n: int | None = None) -> tuple[Fraction, ...]:
    try:
        vals = tuple(Fraction(x.strip()) for x in str(text).split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected exact rationals, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} rationals, got {text!r}")
    return vals


def _complex(text: str) -> complex:
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"not a complex number: {text!r}") from exc


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    mu: float | None = None
    a: str = "3"
    p: tuple[float, float, float] = (0.0, 0.0, 2.0)
    tolerance: float = 1e-3
    output: str | None = None
    format: str = "json"
    options: dict = field(default_factory=dict)
    p_text: str = "0,0,2"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        if self.model is not None:
            base = self.model.split(":", 1)[1] if self.model.startswith("inverted:") else self.model
            if base not in BASE_MODELS:
                raise UsageError(f"unknown model {self.model!r}; bases are {', '.join(BASE_MODELS)}")
            if base == "psi-mu" and self.mu is None:
                raise UsageError("--mu is required for psi-mu")
            if base != "psi-mu" and self.mu is not None:
                raise UsageError("--mu only applies to psi-mu")
        if self.mu is not None and not self.mu > 0:
            raise UsageError("--mu must be positive")

    @property
    def a_value(self) -> complex:
        return complex(Fraction(self.a)) if "/" in self.a else _complex(self.a)

    def echo(self) -> dict:
        out = {
            "command": self.command,
            "model": self.model,
            "mu": self.mu,
            "a": self.a,
            "p": list(self.p),
            "tolerance": self.tolerance,
            "format": self.format,
        }
        out.update({k: v for k, v in sorted(self.options.items())})
        return out


def build_model(selector: str, mu: float | None = None, a: complex = 3.0, p=(0.0, 0.0, 2.0)) -> ImmersionModel:
    if selector.startswith("inverted:"):
        return invert(build_model(selector.split(":", 1)[1], mu, a, p), p)
    if selector == "psi-mu":
        return family_psi_mu(FourEndedFamilyParams(mu, a))
    if selector == "lopez":
        return lopez(a)
    if selector == "enneper":
        return enneper()
    if selector == "plane":
        return plane()
    if selector == "chen-gackstatter":
        return chen_gackstatter_local(EllipticContext.square_lattice())
    raise UsageError(f"unknown model {selector!r}")


def _default_center(selector: str):
    """Branch point (or end) probed by residue and multiplicity commands."""
    base = selector.split(":", 1)[-1]
    if base in ("enneper",):
        return None
    return 0j


def _parse_center(text, selector):
    if text is None:
        return _default_center(selector)
    if str(text).lower() in ("inf", "infinity"):
        return None
    return _complex(text)


# -- commands --------------------------------------------------------------------


@dataclass
class Outcome:
    result: dict
    rows: list[dict]
    checks: list[tuple[str, bool, str]] = field(default_factory=list)


def _require_model(cfg: RunConfig, default: str | None = None) -> str:
    sel = cfg.model or default
    if sel is None:
        raise UsageError(f"{cfg.command} needs --model")
    if cfg.model is None:
        cfg.model = sel
        RunConfig.__post_init__(cfg)
    return sel


def cmd_energies(cfg: RunConfig) -> Outcome:
    sel = _require_model(cfg)
    if sel.endswith("chen-gackstatter"):
        raise UsageError("chen-gackstatter is a local chart around its end; global energies are not available")
    model = build_model(sel, cfg.mu, cfg.a_value, cfg.p)
    rep = energy_report(model, spec=QuadratureSpec.for_model(model, rel_tol=cfg.tolerance))
    d = rep.as_dict(units_of_pi=True)
    d["units"] = "pi"
    checks = []
    scale = max(abs(d["E"]), abs(d["W"]), 1.0)
    for name, r in zip(("E-4W+2K", "Etf-2W+2K", "E-Etf-2W"), d["residuals"]):
        checks.append((f"identity {name}", abs(r) <= 10 * cfg.tolerance * scale, f"{r:.3g}"))
    if d["gauss_bonnet_predicted"] is not None:
        gb, k = d["gauss_bonnet_predicted"], d["K_integral"]
        checks.append(("gauss-bonnet", abs(k - gb) <= 5 * cfg.tolerance * max(abs(gb), 1.0), f"{k:.6g} vs {gb:.6g}"))
    row = {k: d[k] for k in ("model", "W", "E", "E_tracefree", "K_integral", "gauss_bonnet_predicted")}
    rows = [row]
    base_sel = cfg.options.get("baseline")
    if base_sel:
        base_mu = cfg.mu if base_sel.split(":")[-1] == "psi-mu" else None
        base = build_model(base_sel, base_mu, cfg.a_value, cfg.p)
        b = energy_report(base, spec=QuadratureSpec.for_model(base, rel_tol=cfg.tolerance)).as_dict(units_of_pi=True)
        d["baseline"] = b
        for key in ("W", "E", "E_tracefree", "K_integral"):
            d[f"{key}_gap"] = d[key] - b[key]
        rows.append({k: b[k] for k in row})
    return Outcome(d, rows, checks)


def cmd_blowup(cfg: RunConfig) -> Outcome:
    mus = _floats(cfg.options["mus"] or "0.2,0.1,0.05")
    tb = asy.blowup_compare(mus, R=cfg.options["R"], a=cfg.a_value, p=cfg.p)
    lo, hi = 0.8, 1.2
    d = {
        "mus": list(tb.mus),
        "sup_errors": list(tb.sup_errors),
        "order": tb.order,
        "R": tb.R,
        "min_distance": list(tb.min_distance),
        "admissible": tb.admissible,
        "expected_order_range": [lo, hi],
    }
    rows = [{"mu": m, "sup_error": e, "min_distance": dd} for m, e, dd in zip(tb.mus, tb.sup_errors, tb.min_distance)]
    checks = [("order in [0.8, 1.2]", lo <= tb.order <= hi, f"{tb.order:.4f}")]
    return Outcome(d, rows, checks)


def _radii(cfg, default) -> np.ndarray:
    text = cfg.options["radii"]
    return np.array(_floats(text)) if text else default


def cmd_residue(cfg: RunConfig) -> Outcome:
    sel = _require_model(cfg)
    model = build_model(sel, cfg.mu, cfg.a_value, cfg.p)
    probe = cfg.options["probe"] or ("support" if model.minimal else "mean_curvature")
    probe = probe.replace("-", "_")
    center = _parse_center(cfg.options["center"], sel)
    radii = _radii(cfg, np.geomspace(1e-1, 1e-3, 9))
    fit = asy.second_residue_fit(model, center, probe, cfg.p if probe == "support" else None, radii)
    d = {
        "alpha": fit.alpha,
        "slope": fit.slope,
        "r2": fit.r2,
        "probe": probe,
        "center": "inf" if center is None else str(center),
    }
    rows = [{"radius": r, "sup_probe": v} for r, v in fit.rows()]
    checks = [("slope within 0.1 of -alpha", abs(fit.slope + fit.alpha) <= 0.1, f"{fit.slope:.4f}")]
    return Outcome(d, rows, checks)


def cmd_multiplicity(cfg: RunConfig) -> Outcome:
    sel = _require_model(cfg)
    model = build_model(sel, cfg.mu, cfg.a_value, cfg.p)
    center = _parse_center(cfg.options["center"], sel)
    fit = asy.multiplicity_estimate(model, center, _radii(cfg, np.geomspace(1e-2, 1e-3, 5)))
    d = {"theta": fit.theta_estimate, "center": "inf" if center is None else str(center)}
    rows = [{"radius": r, "circle_mean": v} for r, v in fit.rows()]
    nearest = round(fit.theta_estimate)
    checks = [("theta within 0.05 of an integer", abs(fit.theta_estimate - nearest) <= 0.05, f"{fit.theta_estimate:.5f}")]
    return Outcome(d, rows, checks)


def cmd_harnack(cfg: RunConfig) -> Outcome:
    mus = _floats(cfg.options["mus"] or "0.1,0.05,0.02")
    fam = asy.inverted_family(cfg.a_value, cfg.p)
    rows = []
    for mu in mus:
        model = fam(mu)
        eps = asy.concentration_speed(model).epsilon
        lo, hi = asy.harnack_ratio(model, eps, 2.0, asy.harnack_grid(eps * 1e-2))
        rows.append({"mu": mu, "epsilon": eps, "min": lo, "max": hi, "ratio": hi / lo})
    worst = max(r["ratio"] for r in rows)
    bound = cfg.options["bound"]
    d = {"theta": 2.0, "rows": rows, "max_ratio": worst, "bound": bound}
    return Outcome(d, rows, [(f"max/min <= {bound:g} for every mu", worst <= bound, f"{worst:.4g}")])


def cmd_first_residue(cfg: RunConfig) -> Outcome:
    sel = _require_model(cfg, "inverted:lopez")
    model = build_model(sel, cfg.mu, cfg.a_value, cfg.p)
    center = _parse_center(cfg.options["center"], sel)
    if center is None:
        raise UsageError("first-residue needs a finite center")
    rows = []
    for r in _radii(cfg, np.array([0.05, 0.1, 0.2, 0.5])):
        gamma, scale = asy.first_residue(model, float(r), center, return_scale=True)
        norm = float(np.linalg.norm(gamma))
        rows.append({"radius": float(r), "gamma_x": gamma[0], "gamma_y": gamma[1], "gamma_z": gamma[2], "norm": norm, "grad_H_scale": scale, "relative": norm / scale if scale else 0.0})
    worst = max(r["relative"] for r in rows)
    d = {"rows": rows, "max_relative": worst}
    return Outcome(d, rows, [("|gamma0| < 1e-3 of the grad H scale", worst < 1e-3, f"{worst:.3g}")])


def cmd_residual(cfg: RunConfig) -> Outcome:
    sel = _require_model(cfg, "inverted:lopez")
    model = build_model(sel, cfg.mu, cfg.a_value, cfg.p)
    z = _complex(cfg.options["z"])
    hs = _floats(cfg.options["hs"])
    vals = [asy.willmore_residual(model, z, h) for h in hs]
    ratios = [v0 / v1 if v1 else math.nan for v0, v1 in zip(vals, vals[1:])]
    rows = [{"h": h, "residual": v} for h, v in zip(hs, vals)]
    d = {"z": str(z), "rows": rows, "ratios": ratios, "minimal": model.minimal}
    if model.minimal:
        checks = [("residual is zero on a minimal model", all(v == 0 for v in vals), str(vals))]
    else:
        checks = [("halving ratio 4 +- 1", all(abs(r - 4) <= 1 for r in ratios), str([round(r, 3) for r in ratios]))]
    return Outcome(d, rows, checks)


def cmd_verify(cfg: RunConfig) -> Outcome:
    a = _fractions(cfg.a, 1)[0]
    p = _fractions(cfg.p_text, 3)
    order = int(cfg.options["order"])
    results = [
        vf.check_constraints(a),
        vf.conformality_exact(a),
        vf.check_weierstrass_identities((0, 1), (1,)),
        vf.check_weierstrass_identities((0, 0, 1), (1, 1)),
        vf.certify_blowup(a, p, order),
    ]
    rows, checks = [], []
    for res in results:
        failed = dict(res.violations)
        for tag in res.checked:
            ok = tag not in failed
            rows.append({"check": res.name, "identity": tag, "ok": ok, "remainder": failed.get(tag, "0")})
        checks.append((res.name, res.ok, "; ".join(f"{t}: {r}" for t, r in res.violations) or "exact"))
    norm = vf.norm_series(a, p, 7)
    d = {
        "a": str(a),
        "p": [str(x) for x in p],
        "order": order,
        "checks": [r.as_dict() for r in results],
        "norm_series_coefficients": {f"mu^{k}": str(norm.coefficient(k)) for k in range(8)},
    }
    return Outcome(d, rows, checks)


def cmd_g2(cfg: RunConfig) -> Outcome:
    n = int(cfg.options["truncation"])
    raw = eisenstein_g2(n, tail_correction=False)
    corr = eisenstein_g2(n)
    half = eisenstein_g2(max(n // 2, 10))
    d = {
        "truncation": n,
        "g2": corr,
        "g2_box_sum": raw,
        "g2_closed_form": G2_CLOSED_FORM,
        "A": math.sqrt(3 * math.pi / (2 * corr)),
        "symmetry_residual": lattice_symmetry_residual(n),
        "difference_vs_half_truncation": corr - half,
        "error_vs_closed_form": corr - G2_CLOSED_FORM,
    }
    ok = abs(corr - half) < 1e-6
    return Outcome(d, [d], [("g2(N) vs g2(N/2) within 1e-6", ok, f"{corr - half:.3g}")])


def cmd_mesh(cfg: RunConfig) -> Outcome:
    sel = _require_model(cfg)
    if not cfg.output:
        raise UsageError("mesh needs --output PATH.obj")
    model = build_model(sel, cfg.mu, cfg.a_value, cfg.p)
    o = cfg.options
    r_min = o["r_min"] if o["r_min"] is not None else 0.05
    r_max = o["r_max"] if o["r_max"] is not None else (0.4 if sel.endswith("chen-gackstatter") else 2.0)
    grid = PolarGrid(0j, r_min, r_max, rings=int(o["rings"]), sectors=int(o["sectors"]), spacing="geometric", chart=o["chart"])
    path = export_mesh(model, grid, cfg.output)
    d = {"path": str(path), "vertices": len(grid.points()), "faces": len(grid.triangles())}
    return Outcome(d, [d], [])


HANDLERS = {
    "energies": cmd_energies,
    "blowup": cmd_blowup,
    "residue": cmd_residue,
    "multiplicity": cmd_multiplicity,
    "harnack": cmd_harnack,
    "first-residue": cmd_first_residue,
    "residual": cmd_residual,
    "verify": cmd_verify,
    "g2": cmd_g2,
    "mesh": cmd_mesh,
}


# -- reporting -------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, complex):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _strip_timing(x):
    if isinstance(x, dict):
        return {k: _strip_timing(v) for k, v in x.items() if k != "seconds"}
    if isinstance(x, list):
        return [_strip_timing(v) for v in x]
    return x


def _expectations(outcome: Outcome, specs: list[str], rtol: float) -> list[tuple[str, bool, str]]:
    checks = []
    for spec in specs:
        if "=" not in spec:
            raise UsageError(f"--expect takes KEY=VALUE, got {spec!r}")
        key, val = spec.split("=", 1)
        if key not in outcome.result:
            raise UsageError(f"--expect: no field {key!r} in this report")
        got = float(outcome.result[key])
        want = float(val)
        ok = abs(got - want) <= rtol * max(abs(want), 1.0)
        checks.append((f"{key} = {want:g} (rtol {rtol:g})", ok, f"{got:.6g}"))
    return checks


def render(cfg: RunConfig, outcome: Outcome, timestamp: bool) -> str:
    verdict = {
        "passed": all(ok for _, ok, _ in outcome.checks),
        "checks": [{"name": n, "passed": ok, "detail": det} for n, ok, det in outcome.checks],
    }
    if cfg.format == "json":
        report = {"schema_version": SCHEMA_VERSION, "config": cfg.echo(), "result": outcome.result, "verdict": verdict}
        if timestamp:
            report["timestamp"] = datetime.now(timezone.utc).isoformat()
        else:
            report = _strip_timing(report)
        return json.dumps(_jsonable(report), indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write(f"# config={json.dumps(_jsonable(cfg.echo()), sort_keys=True)}\n")
    if timestamp:
        buf.write(f"# timestamp={datetime.now(timezone.utc).isoformat()}\n")
    rows = [_jsonable(r) for r in outcome.rows]
    if not timestamp:
        rows = [_strip_timing(r) for r in rows]
    fields = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


# -- argument parsing ---------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", help="psi-mu | lopez | enneper | chen-gackstatter | plane | inverted:<base>")
    common.add_argument("--mu", type=float, help="family parameter (psi-mu only)")
    common.add_argument("--a", help="family parameter a (default 3)")
    common.add_argument("--p", help="inversion center x,y,z (default 0,0,2)")
    common.add_argument("--tol", type=float, help="quadrature relative tolerance (default 1e-3)")
    common.add_argument("--probe", help="support | mean-curvature")
    common.add_argument("--center", help="complex point or 'inf'")
    common.add_argument("--radii", help="comma-separated circle radii")
    common.add_argument("--mus", help="comma-separated mu values")
    common.add_argument("--R", type=float, help="blow-up comparison radius (default 2)")
    common.add_argument("--z", help="point for the Willmore residual (default 0.5)")
    common.add_argument("--hs", help="finite-difference steps (default 1e-2,5e-3,2.5e-3)")
    common.add_argument("--order", type=int, help="series truncation order for verify (default 10)")
    common.add_argument("--truncation", type=int, help="lattice box size for g2 (default 200)")
    common.add_argument("--rings", type=int)
    common.add_argument("--sectors", type=int)
    common.add_argument("--r-min", dest="r_min", type=float)
    common.add_argument("--r-max", dest="r_max", type=float)
    common.add_argument("--chart", choices=("z", "w"))
    common.add_argument("--expect", action="append", help="KEY=VALUE check on a numeric result field (repeatable)")
    common.add_argument("--expect-rtol", dest="expect_rtol", type=float, help="relative tolerance for --expect (default 5e-3)")
    common.add_argument("--bound", type=float, help="Harnack ratio bound (default 100)")
    common.add_argument("--baseline", help="second model for energies; reports <field>_gap differences")
    common.add_argument("--output", help="write the report (or OBJ mesh) to this path")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--no-timestamp", dest="no_timestamp", action="store_true", default=None)
    common.add_argument("--config", help="JSON file of option defaults (flags override)")
    parser = _Parser(prog="bubblelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=f"{name} report")
    return parser


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    out = {}
    for k, v in data.items():
        key = k.replace("-", "_")
        key = "tol" if key == "tolerance" else key
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {k!r}")
        out[key] = v
    return out


def resolve(argv) -> tuple[RunConfig, dict]:
    ns = _parser().parse_args(argv)
    merged = dict(DEFAULTS)
    merged.update(_load_config(ns.config))
    for k in DEFAULTS:
        v = getattr(ns, k, None)
        if v is not None:
            merged[k] = v
    p_text = merged["p"]
    if isinstance(p_text, (list, tuple)):
        p_text = ",".join(str(x) for x in p_text)
    p = _floats(p_text, 3)
    mu = merged["mu"]
    cfg = RunConfig(
        command=ns.command,
        model=merged["model"],
        mu=float(mu) if mu is not None else None,
        a=str(merged["a"]),
        p=p,
        p_text=str(p_text),
        tolerance=float(merged["tol"]),
        output=merged["output"],
        format=merged["format"],
        options={k: merged[k] for k in ("probe", "center", "radii", "mus", "R", "z", "hs", "order", "truncation", "rings", "sectors", "r_min", "r_max", "chart", "bound", "baseline")},
    )
    return cfg, merged


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg, merged = resolve(argv)
        outcome = HANDLERS[cfg.command](cfg)
        outcome.checks.extend(_expectations(outcome, list(merged["expect"] or []), float(merged["expect_rtol"])))
        text = render(cfg, outcome, timestamp=not merged["no_timestamp"])
    except UsageError as exc:
        print(f"bubblelab: error: {exc}", file=sys.stderr)
        return 1
    except (BubbleLabError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"bubblelab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.output and cfg.command != "mesh":
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    failed = [n for n, ok, _ in outcome.checks if not ok]
    if failed:
        print("bubblelab: checks failed: " + ", ".join(failed), file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
