"""Exact scalars: rationals with an adjoined imaginary unit, and exact square roots.

All identity checking in this package is exact, so scalars are either plain
``int``/``Fraction`` values or :class:`GaussianRational` numbers (elements of
Q(i)).  Floating point only enters through explicitly requested "floating"
modes in the series layer.
"""

from __future__ import annotations

import math
from fractions import Fraction

_RATIONALS = (int, Fraction)


class GaussianRational:
    """A number ``re + im*i`` with rational real and imaginary parts.

    Arithmetic mixes freely with ``int`` and ``Fraction``; division stays
    exact.  There is no implicit conversion to float.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, _RATIONALS):
            return GaussianRational(value)
        return None

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
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONALS):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self):
        """Field norm re^2 + im^2 as a Fraction."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.im == 1:
            im_part = "i"
        elif self.im == -1:
            im_part = "-i"
        else:
            im_part = f"{self.im}i"
        if self.re == 0:
            return im_part
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im_part}"


I = GaussianRational(0, 1)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if not a square."""
    q = Fraction(q)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(c) -> GaussianRational | None:
    """Exact square root in Q(i), or None when c is not a square there.

    The returned root is canonical: positive real part, or zero real part
    and nonnegative imaginary part.
    """
    g = GaussianRational._coerce(c)
    if g is None:
        raise TypeError(f"not an exact scalar: {c!r}")
    if not g:
        return GaussianRational(0)
    if g.im == 0:
        if g.re > 0:
            r = rational_sqrt(g.re)
            return None if r is None else GaussianRational(r)
        r = rational_sqrt(-g.re)
        return None if r is None else GaussianRational(0, r)
    n = rational_sqrt(g.norm())
    if n is None:
        return None
    p = rational_sqrt((g.re + n) / 2)
    if p is None or p == 0:
        return None
    root = GaussianRational(p, g.im / (2 * p))
    if root * root != g:
        return None
    if root.re < 0 or (root.re == 0 and root.im < 0):
        root = -root
    return root


def norm2(x):
    """Squared magnitude usable on both exact and floating scalars."""
    if isinstance(x, GaussianRational):
        return x.norm()
    if isinstance(x, _RATIONALS):
        return Fraction(x) ** 2
    return abs(x) ** 2


def format_exact(x) -> str:
    """Canonical string for an exact scalar (used in JSON reports)."""
    if isinstance(x, (int, Fraction, GaussianRational)):
        return str(x)
    raise TypeError(f"not an exact scalar: {x!r}")
