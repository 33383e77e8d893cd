"""Inversions, rigid motions and the round sphere."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CenterOnSurface
from .core import ImmersionModel, Jet, Singularity, Topology, bilinear

CENTER_TOL = 1e-8


@dataclass(frozen=True)
class InversionSpec:
    """Center p of the inversion x -> (x - p) / |x - p|^2."""

    p: tuple[float, float, float]

    @property
    def point(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)


def invert_point(x, p) -> np.ndarray:
    u = np.asarray(x, dtype=float) - np.asarray(p, dtype=float)
    return u / np.sum(u * u, axis=-1, keepdims=True)


class InvertedModel(ImmersionModel):
    """Composite x -> (x - p)/|x - p|^2 applied to a base model.

    Derivatives follow from the chain rule with u = Phi - p and s = |u|^2:
    Phi~_z = u_z/s - u s_z/s^2 and so on.  The cross-product normal of the
    composite is minus the reflection of the base normal across u, and
    H~ = -(s H + 2 <u, n>).
    """

    minimal = False

    def __init__(self, base: ImmersionModel, p):
        self.base = base
        self.p = np.asarray(p, dtype=float)
        self.name = f"inverted:{base.name}"
        self.topology = base.topology.inverted() if base.topology is not None else None
        sing = []
        for s in base.singularities:
            if s.kind == "end":
                if s.order > 2:
                    sing.append(Singularity(s.center, "branch", s.order - 2))
                else:
                    sing.append(Singularity(s.center, "pole", 0))
            else:
                sing.append(s)
        self.singularities = tuple(sing)

    def jet(self, z) -> Jet:
        b = self.base.jet(z)
        u = b.phi - self.p
        s = np.sum(u * u, axis=-1)
        if np.any(s < CENTER_TOL**2):
            raise CenterOnSurface(f"inversion center {self.p} lies on the surface")
        uz, uzz, uzb = b.phi_z, b.phi_zz, b.phi_zzbar
        s_z = 2.0 * bilinear(u, uz)
        s_zz = 2.0 * (bilinear(uz, uz) + bilinear(u, uzz))
        s_zzb = 2.0 * (np.sum(np.abs(uz) ** 2, axis=-1) + bilinear(u, uzb.real))
        S = s[..., None]
        Sz, Szz, Szzb = s_z[..., None], s_zz[..., None], s_zzb[..., None]
        phi = u / S
        phi_z = uz / S - u * Sz / S**2
        phi_zz = uzz / S - 2 * uz * Sz / S**2 - u * Szz / S**2 + 2 * u * Sz**2 / S**3
        phi_zzb = (
            uzb / S
            - (uz * np.conj(Sz) + np.conj(uz) * Sz) / S**2
            - u * Szzb / S**2
            + 2 * u * np.abs(Sz) ** 2 / S**3
        )
        return Jet(phi=phi, phi_z=phi_z, phi_zz=phi_zz, phi_zzbar=phi_zzb.real)


def invert(model: ImmersionModel, spec) -> InvertedModel:
    p = spec.point if isinstance(spec, InversionSpec) else spec
    return InvertedModel(model, p)


class RigidMotion(ImmersionModel):
    """x -> R x + t applied to a base model."""

    def __init__(self, base: ImmersionModel, rotation, translation=(0.0, 0.0, 0.0)):
        self.base = base
        self.R = np.asarray(rotation, dtype=float)
        self.t = np.asarray(translation, dtype=float)
        self.name = f"moved:{base.name}"
        self.minimal = base.minimal
        self.topology = base.topology
        self.singularities = base.singularities

    def jet(self, z) -> Jet:
        b = self.base.jet(z)
        R = self.R
        return Jet(
            phi=b.phi @ R.T + self.t,
            phi_z=b.phi_z @ R.T,
            phi_zz=b.phi_zz @ R.T,
            phi_zzbar=b.phi_zzbar @ R.T,
        )


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about a (not necessarily unit) axis."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * kx + (1 - np.cos(angle)) * kx @ kx


class RoundSphere(ImmersionModel):
    """Inverse stereographic parametrization of a round sphere.

    Phi = center + radius * (2x, 2y, |z|^2 - 1) / (1 + |z|^2); z = infinity is
    the north pole.
    """

    def __init__(self, center=(0.0, 0.0, 0.0), radius: float = 1.0):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.name = "sphere"
        self.topology = Topology(2, (), ())
        self.singularities = (Singularity(None, "pole", 0),)

    def jet(self, z) -> Jet:
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        d = 1.0 + (z * zb).real
        r = self.radius
        unit = np.stack([2 * z.real, 2 * z.imag, d - 2.0], axis=-1) / d[..., None]
        D2, D3 = (d**2)[..., None], (d**3)[..., None]
        phi_z = np.stack([1 - zb**2, -1j * (1 + zb**2), 2 * zb], axis=-1) / D2
        phi_zz = np.stack([-2 * zb * (1 - zb**2), 2j * zb * (1 + zb**2), -4 * zb**2], axis=-1) / D3
        phi_zzb = -2.0 * unit / D2
        return Jet(
            phi=self.center + r * unit,
            phi_z=r * phi_z,
            phi_zz=r * phi_zz,
            phi_zzbar=r * phi_zzb,
        )


def inverted_sphere_oracle(center, radius: float, p) -> tuple[np.ndarray, float]:
    """Center and radius of the image of a round sphere under inversion at p."""
    c = np.asarray(center, dtype=float) - np.asarray(p, dtype=float)
    d2 = float(np.dot(c, c))
    denom = d2 - radius**2
    if abs(denom) < 1e-14:
        raise CenterOnSurface("inversion center lies on the sphere")
    return c / denom, radius / abs(denom)
