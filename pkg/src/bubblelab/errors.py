"""Exception types shared across the package."""


class BubbleLabError(Exception):
    """Base class for all package errors."""


class PoleError(BubbleLabError, ZeroDivisionError):
    """Evaluation requested at a pole of a rational function."""


class ClusteredRootsError(BubbleLabError):
    """Denominator roots too close to be separated reliably."""


class PeriodError(BubbleLabError):
    """Weierstrass data whose primitive would contain logarithms."""


class OutOfDomain(BubbleLabError, ValueError):
    """Point outside the domain where a local expansion is valid."""


class SingularPoint(BubbleLabError):
    """Frame requested at a pole, end or branch point."""


class CenterOnSurface(BubbleLabError):
    """Inversion center lies on (or numerically at) the surface."""


class NonConvergent(BubbleLabError):
    """Adaptive quadrature exhausted its depth budget."""


class DegenerateFit(BubbleLabError):
    """Probe values vanish, so no power-law exponent can be fitted."""


class NonUnitLeadingTerm(BubbleLabError):
    """Series inversion attempted on a series whose leading term is not a unit."""
