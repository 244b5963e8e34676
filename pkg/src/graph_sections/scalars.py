"""Scalar fields: exact rationals, exact Gaussian rationals, and floats.

Every field object knows how to coerce inputs into its elements, test for
zero, compare magnitudes, and serialize elements as text.  Rationals are
plain :class:`fractions.Fraction` values and serialize as ``"p/q"`` (or
``"p"`` for integers), which is exactly ``str(Fraction)``.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

from .errors import FloatModeUnsupported

__all__ = [
    "GaussianRational",
    "Field",
    "RationalField",
    "GaussianField",
    "FloatField",
    "RATIONAL",
    "GAUSSIAN",
    "field_from_name",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot make an exact rational from {x!r}")


class GaussianRational:
    """Exact element of Q(i), stored as two normalized fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _lift(cls, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other, 0)
        if isinstance(other, complex):
            raise TypeError("complex floats are not exact")
        if isinstance(other, numbers.Rational):
            return cls(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        im = abs(self.im)
        if self.re == 0:
            return f"{'-' if sign == '-' else ''}{im}i"
        return f"{self.re}{sign}{im}i"

    @classmethod
    def parse(cls, text: str) -> GaussianRational:
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational")
        if not s.endswith("i"):
            return cls(Fraction(s), 0)
        body = s[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        if split > 0:
            re_part, im_part = body[:split], body[split:]
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Fraction(re_part), Fraction(im_part))


class Field:
    """Common interface of the three scalar modes."""

    name = "abstract"
    exact = True

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def parse(self, text):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def magnitude(self, x):
        """Key used to compare moduli; monotone in ``|x|``."""
        raise NotImplementedError

    def same_magnitude(self, x, y) -> bool:
        return self.magnitude(x) == self.magnitude(y)

    def is_real_nonnegative(self, x) -> bool:
        raise NotImplementedError

    def require_exact(self, what: str = "this operation"):
        if not self.exact:
            raise FloatModeUnsupported(f"{what} requires an exact scalar mode")

    def __repr__(self):
        return f"<{self.name} field>"


class RationalField(Field):
    name = "rational"

    def coerce(self, x) -> Fraction:
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise ValueError(f"{x} is not real")
            return x.re
        if isinstance(x, float):
            raise TypeError("refusing to coerce a float into an exact field")
        return _frac(x)

    def parse(self, text) -> Fraction:
        return Fraction(str(text).strip())

    def magnitude(self, x) -> Fraction:
        return abs(x)

    def is_real_nonnegative(self, x) -> bool:
        return x >= 0


class GaussianField(Field):
    name = "gaussian"

    def coerce(self, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return GaussianRational.parse(x)
        if isinstance(x, float):
            raise TypeError("refusing to coerce a float into an exact field")
        return GaussianRational(_frac(x), 0)

    def parse(self, text) -> GaussianRational:
        return GaussianRational.parse(str(text))

    def magnitude(self, x) -> Fraction:
        # squared modulus keeps comparisons inside Q
        return self.coerce(x).norm()

    def is_real_nonnegative(self, x) -> bool:
        x = self.coerce(x)
        return x.im == 0 and x.re >= 0


class FloatField(Field):
    """Binary floats with an absolute comparison tolerance ``eps``."""

    exact = False

    def __init__(self, eps: float = 1e-9):
        self.eps = float(eps)
        self.name = "float"

    def coerce(self, x) -> float:
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise ValueError(f"{x} is not real")
            x = x.re
        if isinstance(x, str):
            x = Fraction(x)
        return float(x)

    def parse(self, text) -> float:
        return self.coerce(str(text).strip())

    def format(self, x) -> str:
        return repr(float(x))

    def is_zero(self, x) -> bool:
        return abs(x) <= self.eps

    def magnitude(self, x) -> float:
        return abs(x)

    def same_magnitude(self, x, y) -> bool:
        return abs(abs(x) - abs(y)) <= self.eps

    def is_real_nonnegative(self, x) -> bool:
        return x >= -self.eps

    def __repr__(self):
        return f"<float field eps={self.eps}>"


RATIONAL = RationalField()
GAUSSIAN = GaussianField()


def field_from_name(name: str, eps: float = 1e-9) -> Field:
    if name == "rational":
        return RATIONAL
    if name == "gaussian":
        return GAUSSIAN
    if name == "float":
        return FloatField(eps)
    raise ValueError(f"unknown scalar mode {name!r}")
