"""Weierstrass elliptic function of the square lattice Z + iZ.

Only the Laurent germ at the origin is implemented:

    wp(z) = 1/z^2 + sum_{k>=2} c_k z^(2k-2),

with c_2 = g2/20, c_3 = 0 (g3 vanishes on the square lattice) and the usual
quadratic recursion for higher coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .errors import OutOfDomain

DOMAIN_RADIUS = 0.5
DEFAULT_DEPTH = 24
DEFAULT_TRUNCATION = 200
# sum over nonzero lattice points of |w|^-4; bounds |c_k| / (2k - 1) for k >= 2
_ABS_G4 = 6.0268120


def _shell_sum(k: int) -> complex:
    """Sum of w^-4 over lattice points with max(|m|, |n|) = k."""
    m = np.arange(-k, k + 1)
    inner = m[1:-1]
    w = np.concatenate([m + 1j * k, m - 1j * k, k + 1j * inner, -k + 1j * inner])
    return complex(np.sum(1.0 / w**4))


def eisenstein_g2(truncation: int = DEFAULT_TRUNCATION, tail_correction: bool = True) -> float:
    """g2 = 60 * sum over nonzero lattice points of w^-4.

    The box sum over max(|m|, |n|) <= truncation converges like truncation^-2.
    With `tail_correction`, the remaining shells are added through the model
    s_k = a/k^3 + b/k^5 fitted to two outer shells (Hurwitz zeta tail).
    """
    if truncation < 10:
        raise ValueError("truncation must be at least 10")
    shells = np.array([_shell_sum(k) for k in range(1, truncation + 1)])
    total = np.sum(shells)
    # square-lattice symmetry kills the imaginary part
    if abs(total.imag) > 1e-10:
        raise AssertionError(f"lattice sum not real: imaginary part {total.imag:.3g}")
    value = total.real
    if tail_correction:
        k1, k2 = truncation, truncation // 2
        mat = np.array([[k1**-3.0, k1**-5.0], [k2**-3.0, k2**-5.0]])
        a, b = np.linalg.solve(mat, [shells[k1 - 1].real, shells[k2 - 1].real])
        value += a * hurwitz_zeta(3, truncation + 1) + b * hurwitz_zeta(5, truncation + 1)
    return float(60.0 * value)


def lattice_symmetry_residual(truncation: int = DEFAULT_TRUNCATION) -> float:
    """|Im| of 60 * (box sum of w^-4); zero up to rounding on the square lattice."""
    total = sum(_shell_sum(k) for k in range(1, truncation + 1))
    return float(60.0 * abs(total.imag))


def laurent_coefficients(g2: float, depth: int) -> list[float]:
    """c_2 .. c_depth of wp for invariants (g2, 0)."""
    c = {2: g2 / 20.0, 3: 0.0}
    for k in range(4, depth + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    return [c[k] for k in range(2, depth + 1)]


@dataclass(frozen=True)
class EllipticContext:
    g2: float
    depth: int = DEFAULT_DEPTH
    g3: float = field(default=0.0, init=False)
    laurent_coeffs: tuple[float, ...] = field(init=False)
    A: float = field(init=False)

    def __post_init__(self):
        if self.depth < 2:
            raise ValueError("depth must be at least 2")
        object.__setattr__(self, "laurent_coeffs", tuple(laurent_coefficients(self.g2, self.depth)))
        object.__setattr__(self, "A", math.sqrt(3.0 * math.pi / (2.0 * self.g2)))

    @classmethod
    def square_lattice(cls, truncation: int = DEFAULT_TRUNCATION, depth: int = DEFAULT_DEPTH):
        return cls(eisenstein_g2(truncation), depth)

    def coeff(self, k: int) -> float:
        return self.laurent_coeffs[k - 2]

    def series(self, z):
        """wp on arrays, without domain checks."""
        z = np.asarray(z, dtype=complex)
        z2 = z * z
        acc = np.zeros_like(z)
        for c in reversed(self.laurent_coeffs):
            acc = acc * z2 + c
        return 1.0 / z2 + acc * z2

    def series_prime(self, z):
        z = np.asarray(z, dtype=complex)
        z2 = z * z
        acc = np.zeros_like(z)
        for k in range(self.depth, 1, -1):
            acc = acc * z2 + (2 * k - 2) * self.coeff(k)
        return -2.0 / (z2 * z) + acc * z

    def truncation_bound(self, z: complex, derivative: bool = False) -> float:
        """Upper bound on the dropped tail, from |c_k| <= (2k-1) * sum |w|^-4."""
        r = abs(z)
        total = 0.0
        for k in range(self.depth + 1, self.depth + 400):
            if derivative:
                term = _ABS_G4 * (2 * k - 1) * (2 * k - 2) * r ** (2 * k - 3)
            else:
                term = _ABS_G4 * (2 * k - 1) * r ** (2 * k - 2)
            total += term
            if term < 1e-30:
                break
        return total


def _check_domain(z: complex) -> complex:
    z = complex(z)
    if z == 0 or abs(z) > DOMAIN_RADIUS:
        raise OutOfDomain(f"|z| = {abs(z):.3g} outside 0 < |z| <= {DOMAIN_RADIUS}")
    return z


def wp_eval(ctx: EllipticContext, z: complex, with_bound: bool = False):
    z = _check_domain(z)
    value = complex(ctx.series(z))
    return (value, ctx.truncation_bound(z)) if with_bound else value


def wp_prime_eval(ctx: EllipticContext, z: complex, with_bound: bool = False):
    z = _check_domain(z)
    value = complex(ctx.series_prime(z))
    return (value, ctx.truncation_bound(z, derivative=True)) if with_bound else value
