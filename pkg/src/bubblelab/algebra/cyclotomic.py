"""Exact arithmetic in the twelfth cyclotomic field.

Elements are stored as rational coordinates over 1, z, z^2, z^3 where z is a
primitive twelfth root of unity, reduced with z^4 = z^2 - 1.  The embedding
into the complex numbers sends z to exp(i*pi/6).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational

_EMBED = cmath.exp(1j * cmath.pi / 6)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational required, got {type(x).__name__}")


class CycScalar:
    """Immutable element of Q(zeta_12)."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        object.__setattr__(self, "c", (_frac(c0), _frac(c1), _frac(c2), _frac(c3)))

    def __setattr__(self, name, value):
        raise AttributeError("CycScalar is immutable")

    @classmethod
    def of(cls, x) -> CycScalar:
        if isinstance(x, CycScalar):
            return x
        return cls(x)

    @classmethod
    def zeta_power(cls, k: int) -> CycScalar:
        k %= 12
        sign = 1
        if k >= 6:
            k -= 6
            sign = -1
        if k < 4:
            base = [0, 0, 0, 0]
            base[k] = sign
            return cls(*base)
        # z^4 = z^2 - 1, z^5 = z^3 - z
        return cls(-sign, 0, sign, 0) if k == 4 else cls(0, -sign, 0, sign)

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycScalar(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return CycScalar(*(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(*(-x for x in self.c))

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        prod = [Fraction(0)] * 7
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b):
                    if y:
                        prod[i + k] += x * y
        # fold z^6 = -1, z^5 = z^3 - z, z^4 = z^2 - 1
        c0 = prod[0] - prod[6] - prod[4]
        c1 = prod[1] - prod[5]
        c2 = prod[2] + prod[4]
        c3 = prod[3] + prod[5]
        return CycScalar(c0, c1, c2, c3)

    __rmul__ = __mul__

    def conj(self) -> CycScalar:
        """Complex conjugation, sending zeta to zeta**-1 = zeta**11."""
        c0, c1, c2, c3 = self.c
        zc = CycScalar.zeta_power(11)
        z2c = CycScalar.zeta_power(10)
        z3c = CycScalar.zeta_power(9)
        return CycScalar(c0) + zc * c1 + z2c * c2 + z3c * c3

    def norm_matrix(self):
        """Matrix of multiplication by self on the power basis (columns)."""
        cols = [(self * CycScalar.zeta_power(k)).c for k in range(4)]
        return [[cols[j][i] for j in range(4)] for i in range(4)]

    def inv(self) -> CycScalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_12)")
        m = self.norm_matrix()
        rhs = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
        return CycScalar(*_solve(m, rhs))

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def to_complex(self) -> complex:
        c0, c1, c2, c3 = (float(x) for x in self.c)
        return c0 + _EMBED * (c1 + _EMBED * (c2 + _EMBED * c3))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __repr__(self):
        return "CycScalar(" + ", ".join(str(x) for x in self.c) + ")"

    def __str__(self):
        parts = []
        for k, x in enumerate(self.c):
            if x:
                basis = ["", "ζ", "ζ²", "ζ³"][k]
                if basis and abs(x) == 1:
                    parts.append(("-" if x < 0 else "+") + basis)
                else:
                    parts.append(f"{'+' if x > 0 else '-'}{abs(x)}{basis}")
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def _coerce(x):
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return CycScalar(x)
    return None


def _solve(m, rhs):
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


ZERO = CycScalar(0)
ONE = CycScalar(1)
ZETA = CycScalar(0, 1)
I = CycScalar.zeta_power(3)
J = CycScalar.zeta_power(4)


def cyc_arith(a: CycScalar, b: CycScalar | None, op: str) -> CycScalar:
    """Dispatch one field operation by name: add, mul, conj or inv."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown operation {op!r}")
