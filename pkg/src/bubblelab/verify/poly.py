"""Sparse exact polynomials with coefficients in Q(zeta_12).

Exponent tuples may be negative, so the same class covers Laurent
polynomials in mu.  ConjPolynomial is the two-variable case (z, zbar) with
formal complex conjugation.
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra.cyclotomic import CycScalar


def _scalar(x) -> CycScalar:
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return CycScalar(x)
    raise TypeError(f"exact scalar required, got {type(x).__name__}")


class ExactPoly:
    """Immutable map from exponent tuples to nonzero CycScalar coefficients."""

    __slots__ = ("terms", "names")

    def __init__(self, terms=None, names: tuple[str, ...] = ("z", "zbar")):
        clean = {}
        for exp, c in (terms or {}).items():
            c = _scalar(c)
            if len(exp) != len(names):
                raise ValueError(f"exponent {exp} does not match variables {names}")
            if not c.is_zero():
                clean[tuple(exp)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "names", tuple(names))

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    def _new(self, terms):
        return type(self)(terms, self.names) if type(self) is ExactPoly else type(self)(terms)

    @classmethod
    def constant(cls, c, names=("z", "zbar")):
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def variable(cls, k: int, power: int = 1, names=("z", "zbar")):
        exp = [0] * len(names)
        exp[k] = power
        return cls({tuple(exp): 1}, names)

    def _coerce(self, other):
        if isinstance(other, ExactPoly):
            if other.names != self.names:
                raise ValueError(f"variable mismatch {self.names} vs {other.names}")
            return other
        if isinstance(other, (int, Fraction, CycScalar)):
            return self._new({(0,) * len(self.names): other})
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> CycScalar:
        return self.terms.get((0,) * len(self.names), CycScalar(0))

    def without_constant(self):
        zero = (0,) * len(self.names)
        return self._new({e: c for e, c in self.terms.items() if e != zero})

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = self._new({(0,) * len(self.names): 1})
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, k: int = 0):
        """Formal partial derivative in variable k."""
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return self._new(out)

    def shift(self, k: int, power: int):
        """Multiply by variable k raised to an integer power."""
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] += power
            out[tuple(ne)] = c
        return self._new(out)

    def map_coefficients(self, fn):
        return self._new({e: fn(c) for e, c in self.terms.items()})

    def evaluate(self, *values) -> complex:
        if len(values) != len(self.names):
            raise ValueError(f"expected {len(self.names)} values")
        total = 0j
        for e, c in self.terms.items():
            t = c.to_complex()
            for v, k in zip(values, e):
                t *= complex(v) ** k
            total += t
        return total

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[e]
            mono = "*".join(f"{n}^{k}" if k != 1 else n for n, k in zip(self.names, e) if k)
            cs = str(c)
            if not c.is_rational() and mono:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class ConjPolynomial(ExactPoly):
    """Polynomial in z and zbar; conj swaps the two and conjugates coefficients."""

    __slots__ = ()

    def __init__(self, terms=None, names=("z", "zbar")):
        super().__init__(terms, ("z", "zbar"))

    @classmethod
    def z(cls, power: int = 1) -> ConjPolynomial:
        return cls({(power, 0): 1})

    @classmethod
    def zbar(cls, power: int = 1) -> ConjPolynomial:
        return cls({(0, power): 1})

    @classmethod
    def const(cls, c) -> ConjPolynomial:
        return cls({(0, 0): c})

    def conj(self) -> ConjPolynomial:
        return ConjPolynomial({(j, i): c.conj() for (i, j), c in self.terms.items()})

    def d_z(self) -> ConjPolynomial:
        return self.derivative(0)

    def is_real(self) -> bool:
        return self == self.conj()

    def evaluate(self, z) -> complex:
        z = complex(z)
        return super().evaluate(z, z.conjugate())


def dot(u, v):
    """Bilinear pairing sum(u_k v_k), no conjugation."""
    total = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        total = total + a * b
    return total


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
