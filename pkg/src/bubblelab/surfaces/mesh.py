"""OBJ export of a model sampled on a polar grid."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import SingularPoint
from .core import ImmersionModel


@dataclass(frozen=True)
class PolarGrid:
    """rings + 1 circles between r_min and r_max, each with `sectors` vertices.

    spacing is 'linear' or 'geometric'; chart 'w' samples w = 1/z instead.
    """

    center: complex = 0j
    r_min: float = 0.1
    r_max: float = 1.0
    rings: int = 8
    sectors: int = 16
    spacing: str = "linear"
    chart: str = "z"

    def radii(self) -> np.ndarray:
        if self.spacing == "geometric":
            return np.geomspace(self.r_min, self.r_max, self.rings + 1)
        return np.linspace(self.r_min, self.r_max, self.rings + 1)

    def points(self) -> np.ndarray:
        """Ring-major parameter points (z chart), shape ((rings+1) * sectors,)."""
        ang = 2 * np.pi * np.arange(self.sectors) / self.sectors
        local = (self.radii()[:, None] * np.exp(1j * ang)[None, :]).ravel()
        if self.chart == "w":
            return 1.0 / (local + self.center)
        return self.center + local

    def triangles(self) -> np.ndarray:
        """Zero-based triangles, two per quad between consecutive rings."""
        s = self.sectors
        tris = []
        for i in range(self.rings):
            for k in range(s):
                a, b = i * s + k, i * s + (k + 1) % s
                c, d = a + s, b + s
                tris.append((a, b, d))
                tris.append((a, d, c))
        return np.array(tris, dtype=int).reshape(-1, 3)


def mesh_vertices(model: ImmersionModel, grid: PolarGrid) -> np.ndarray:
    pts = grid.points()
    for z in pts:
        model.check_regular(complex(z))
    with np.errstate(all="ignore"):
        verts = model.phi(pts)
    if not np.all(np.isfinite(verts)):
        raise SingularPoint(f"{model.name}: mesh grid touches a singular point")
    return verts


def export_mesh(model: ImmersionModel, grid: PolarGrid, path) -> Path:
    """Write an ASCII OBJ file: 'v x y z' lines then 1-based 'f i j k' lines."""
    verts = mesh_vertices(model, grid)
    tris = grid.triangles() + 1
    lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in verts]
    lines += [f"f {i} {j} {k}" for i, j, k in tris]
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
