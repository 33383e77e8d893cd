"""Numerical and exact tools for minimal bubbles on Willmore surfaces.

Subpackages: algebra (polynomials, partial fractions, Q(zeta_12)),
elliptic (square-lattice Weierstrass function), surfaces (immersion models
and transforms), energy (curvature integrals), asymptotics (blow-up and
residue diagnostics), verify (exact certificates) and cli.
"""

__version__ = "0.1.0"
