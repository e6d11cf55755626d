"""Exact scalar types: rationals, Gaussian rationals and real quadratic fields.

Rationals are plain :class:`fractions.Fraction`.  The two extension types below
interoperate with ``int`` and ``Fraction`` operands; mixing a Gaussian rational
with a quadratic element (or two quadratic fields with different radicands) is a
``TypeError``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Fraction",
    "GaussianRational",
    "QuadraticElement",
    "as_exact",
    "conj",
    "is_exact",
    "to_complex",
    "to_float",
    "exact_sqrt",
    "encode_scalar",
    "decode_scalar",
]


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def _squarefree(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


class GaussianRational:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational(other, 0)
        return None

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return not self.im and self.re == other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational(self.re * other, self.im * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational(self.re / other, self.im / other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        p = self * o.conjugate()
        return GaussianRational(p.re / nrm, p.im / nrm)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1


class QuadraticElement:
    """An element a + b*sqrt(m) of the real quadratic field Q(sqrt(m))."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a=0, b=0, m: int = 2):
        if not isinstance(m, int) or not _squarefree(m):
            raise ValueError(f"radicand must be a squarefree integer > 1, got {m!r}")
        self.a = _q(a)
        self.b = _q(b)
        self.m = m

    def _coerce(self, other):
        if isinstance(other, QuadraticElement):
            if other.m != self.m:
                raise TypeError(f"cannot mix Q(sqrt({self.m})) and Q(sqrt({other.m}))")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadraticElement(other, 0, self.m)
        return None

    def __repr__(self):
        return f"QuadraticElement({self.a}, {self.b}, m={self.m})"

    def __eq__(self, other):
        if isinstance(other, QuadraticElement) and other.m != self.m:
            return self.b == 0 and other.b == 0 and self.a == other.a
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __neg__(self):
        return QuadraticElement(-self.a, -self.b, self.m)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(self.a + o.a, self.b + o.b, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(self.a - o.a, self.b - o.b, self.m)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadraticElement(self.a * other, self.b * other, self.m)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(
            self.a * o.a + self.m * self.b * o.b, self.a * o.b + self.b * o.a, self.m
        )

    __rmul__ = __mul__

    def galois_conjugate(self) -> QuadraticElement:
        return QuadraticElement(self.a, -self.b, self.m)

    def conjugate(self) -> QuadraticElement:
        # real field: complex conjugation is the identity
        return self

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.m * self.b * self.b

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadraticElement(self.a / other, self.b / other, self.m)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        nrm = o.field_norm()
        if nrm == 0:
            raise ZeroDivisionError(f"division by zero in Q(sqrt({self.m}))")
        p = self * o.galois_conjugate()
        return QuadraticElement(p.a / nrm, p.b / nrm, self.m)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __complex__(self):
        return complex(float(self))


EXACT_TYPES = (Fraction, GaussianRational, QuadraticElement)


def is_exact(x) -> bool:
    return isinstance(x, EXACT_TYPES) or (isinstance(x, int) and not isinstance(x, bool))


def as_exact(x):
    """Normalise an exact scalar (ints become Fractions); floats pass through."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, EXACT_TYPES):
        return x
    if isinstance(x, (float, complex)):
        return x
    if hasattr(x, "dtype"):  # numpy scalar
        return x.item()
    raise TypeError(f"unsupported scalar {x!r}")


def conj(x):
    if isinstance(x, (GaussianRational, complex)):
        return x.conjugate()
    return x


def to_float(x) -> float:
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise TypeError("non-real Gaussian rational")
        return float(x.re)
    return float(x)


def to_complex(x) -> complex:
    return complex(x)


def exact_sqrt(q) -> Fraction | None:
    """Square root of a non-negative rational when it is a rational square."""
    q = _q(q)
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


def _enc_q(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def encode_scalar(x):
    """JSON encoding: rationals, Gaussian rationals, quadratic elements, floats."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return _enc_q(Fraction(x))
    if isinstance(x, Fraction):
        return _enc_q(x)
    if isinstance(x, GaussianRational):
        return {"re": _enc_q(x.re), "im": _enc_q(x.im)}
    if isinstance(x, QuadraticElement):
        return {"a": _enc_q(x.a), "b": _enc_q(x.b), "m": x.m}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if hasattr(x, "dtype"):
        return encode_scalar(x.item())
    return float(x)


def _dec_q(obj) -> Fraction:
    if isinstance(obj, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
            raise ValueError(f"malformed rational {obj!r}")
        return Fraction(num, den)
    raise ValueError(f"malformed rational {obj!r}")


def decode_scalar(obj):
    """Inverse of :func:`encode_scalar`; bare JSON ints decode as rationals."""
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        keys = set(obj)
        if keys == {"num", "den"}:
            return _dec_q(obj)
        if keys == {"re", "im"}:
            re, im = obj["re"], obj["im"]
            if isinstance(re, float) or isinstance(im, float):
                return complex(float(re), float(im))
            return GaussianRational(_dec_q(re), _dec_q(im))
        if keys == {"a", "b", "m"}:
            m = obj["m"]
            if not isinstance(m, int):
                raise ValueError(f"malformed quadratic element {obj!r}")
            return QuadraticElement(_dec_q(obj["a"]), _dec_q(obj["b"]), m)
    raise ValueError(f"malformed scalar {obj!r}")
