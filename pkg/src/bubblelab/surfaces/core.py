"""Core types for conformal immersions of planar domains into R^3.

Conventions, for a conformal immersion Phi of a domain with coordinate
z = x + i y:

* Phi_z = (Phi_x - i Phi_y) / 2 and the conformal factor is e^(2 lam) = 2 |Phi_z|^2.
* The unit normal n is Phi_x x Phi_y normalized.
* Omega = 2 <Phi_zz, n> (complex bilinear pairing) and H = 2 e^(-2 lam) <Phi_zzbar, n>,
  so that the flat Laplacian satisfies Delta Phi = 2 H e^(2 lam) n.
* Gauss curvature K = H^2 - |Omega|^2 e^(-4 lam).

All evaluation entry points accept arrays of complex points; vector-valued
quantities carry a trailing axis of length 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import SingularPoint

SINGULAR_TOL = 1e-10


def bilinear(a, b):
    """Complex bilinear pairing sum_k a_k b_k over the last axis."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def hermitian_sq(a):
    """sum_k |a_k|^2 over the last axis."""
    a = np.asarray(a)
    return np.sum((a * np.conj(a)).real, axis=-1)


@dataclass(frozen=True)
class Topology:
    """Euler characteristic, branch orders a_i and end orders b_j.

    A branch point of multiplicity a+1 contributes a, an end of multiplicity
    b-1 contributes b (a simple planar end has b = 2).
    """

    euler_char: int = 2
    branch_orders: tuple[int, ...] = ()
    end_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if any(x < 1 for x in self.branch_orders + self.end_orders):
            raise ValueError("branch and end orders must be >= 1")

    def gauss_bonnet(self) -> float:
        return 2.0 * math.pi * (self.euler_char + sum(self.branch_orders) - sum(self.end_orders))

    def inverted(self) -> Topology:
        """Topology after an inversion centred off the surface.

        Each end with order b becomes a branch point with order b - 2 (or a
        regular point when b = 2); compact surfaces keep their branch points.
        """
        branches = self.branch_orders + tuple(b - 2 for b in self.end_orders if b > 2)
        return Topology(self.euler_char, branches, ())


@dataclass(frozen=True)
class Singularity:
    """A distinguished point of the parameter domain.

    center is a complex number, or None for the point at infinity.  kind is
    'end' (Phi blows up), 'branch' (Phi_z vanishes) or 'pole' (the formula for
    Phi is singular although the surface may extend smoothly).  order is the
    end order b or the branch order a; 0 for a removable 'pole'.
    """

    center: complex | None
    kind: str
    order: int = 0

    @property
    def at_infinity(self) -> bool:
        return self.center is None


@dataclass(frozen=True)
class Jet:
    """Phi and its derivatives Phi_z, Phi_zz, Phi_zzbar at a batch of points."""

    phi: np.ndarray
    phi_z: np.ndarray
    phi_zz: np.ndarray
    phi_zzbar: np.ndarray


@dataclass(frozen=True)
class GeometryFrame:
    """Pointwise geometric data; every field is a scalar or an array."""

    z: np.ndarray
    phi: np.ndarray
    phi_z: np.ndarray
    phi_zz: np.ndarray
    normal: np.ndarray
    conf_factor: np.ndarray
    H: np.ndarray
    Omega: np.ndarray
    K: np.ndarray

    @property
    def lam(self):
        return np.log(self.conf_factor)

    @property
    def area_density(self):
        return self.conf_factor**2

    @property
    def tracefree_sq(self):
        """|Å|^2 = 2 |Omega|^2 e^(-4 lam)."""
        return 2.0 * np.abs(self.Omega) ** 2 / self.conf_factor**4

    @property
    def second_fundamental_sq(self):
        """|A|^2 = 4 H^2 - 2 K."""
        return 4.0 * self.H**2 - 2.0 * self.K


def frame_from_jet(z, jet: Jet) -> GeometryFrame:
    phi_z = jet.phi_z
    e2l = 2.0 * hermitian_sq(phi_z)
    conf = np.sqrt(e2l)
    phi_x = 2.0 * phi_z.real
    phi_y = -2.0 * phi_z.imag
    cross = np.cross(phi_x, phi_y)
    with np.errstate(invalid="ignore", divide="ignore"):
        n = cross / np.linalg.norm(cross, axis=-1)[..., None]
        omega = 2.0 * bilinear(jet.phi_zz, n)
        H = 2.0 * bilinear(jet.phi_zzbar, n).real / e2l
        K = H**2 - np.abs(omega) ** 2 / e2l**2
    return GeometryFrame(
        z=np.asarray(z),
        phi=jet.phi,
        phi_z=phi_z,
        phi_zz=jet.phi_zz,
        normal=n,
        conf_factor=conf,
        H=H,
        Omega=omega,
        K=K,
    )


class ImmersionModel:
    """Base class: subclasses implement `jet` on arrays of points."""

    name: str = "model"
    minimal: bool = False
    topology: Topology | None = None
    singularities: tuple[Singularity, ...] = ()

    def jet(self, z) -> Jet:
        raise NotImplementedError

    def phi(self, z):
        return self.jet(z).phi

    def frames(self, z) -> GeometryFrame:
        """Vectorized frame evaluation without regularity checks."""
        z = np.asarray(z, dtype=complex)
        return frame_from_jet(z, self.jet(z))

    def finite_singularities(self) -> list[complex]:
        return [s.center for s in self.singularities if s.center is not None]

    def check_regular(self, z: complex) -> None:
        for c in self.finite_singularities():
            if abs(z - c) <= SINGULAR_TOL * max(1.0, abs(c)):
                raise SingularPoint(f"{self.name}: z = {z} is a singular point")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def frame(model: ImmersionModel, z: complex) -> GeometryFrame:
    """Frame at one regular point, with scalar fields."""
    z = complex(z)
    model.check_regular(z)
    with np.errstate(all="ignore"):
        fr = model.frames(np.array([z]))
    conf = float(fr.conf_factor[0])
    if not np.isfinite(conf) or conf <= 1e-300 or not np.all(np.isfinite(fr.normal[0])):
        raise SingularPoint(f"{model.name}: degenerate frame at z = {z}")
    return GeometryFrame(
        z=z,
        phi=fr.phi[0],
        phi_z=fr.phi_z[0],
        phi_zz=fr.phi_zz[0],
        normal=fr.normal[0],
        conf_factor=conf,
        H=float(fr.H[0]),
        Omega=complex(fr.Omega[0]),
        K=float(fr.K[0]),
    )


def support_function(model: ImmersionModel, p, z):
    """<n(z), Phi(z) - p>; scalar z is checked for regularity."""
    p = np.asarray(p, dtype=float)
    if np.ndim(z) == 0:
        fr = frame(model, z)
        return float(np.dot(fr.normal, fr.phi - p))
    fr = model.frames(z)
    return np.sum(fr.normal * (fr.phi - p), axis=-1)


__all__ = [
    "GeometryFrame",
    "ImmersionModel",
    "Jet",
    "Singularity",
    "Topology",
    "bilinear",
    "frame",
    "frame_from_jet",
    "hermitian_sq",
    "support_function",
]
