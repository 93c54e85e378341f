"""Truncated power/Laurent series and 2x2 matrices over them.

A series is a sparse map exponent -> coefficient known modulo t^prec;
negative exponents are allowed (Laurent).  Coefficients are exact scalars
(int, Fraction, GaussianRational) or floating complex; plain scalars mixed
into arithmetic are treated as exactly-known constants, so they never lower
precision.  Precision propagates honestly: dividing by a series of positive
valuation costs absolute precision.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .scalars import GaussianRational, gaussian_sqrt, is_exact_scalar

_SCALARS = (int, Fraction, GaussianRational, float, complex)


class OddSquareClassError(ValueError):
    """Square root requested of a series whose square class is t (odd valuation)."""


class NonSquareCoefficientError(ValueError):
    """Exact square root requested but the leading coefficient is not a square in Q(i)."""


def _inv_scalar(c):
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


class TruncatedSeries:
    """Series known modulo t^prec; ``coeffs`` maps exponents < prec to nonzero values."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: dict, prec: int):
        self.coeffs = {e: c for e, c in coeffs.items() if e < prec and c != 0}
        self.prec = prec

    @classmethod
    def from_list(cls, values, order: int | None = None, start: int = 0) -> "TruncatedSeries":
        prec = start + len(values) if order is None else order + 1
        return cls({start + i: c for i, c in enumerate(values)}, prec)

    @classmethod
    def constant(cls, c, prec: int) -> "TruncatedSeries":
        return cls({0: c}, prec)

    @classmethod
    def zero(cls, prec: int) -> "TruncatedSeries":
        return cls({}, prec)

    @classmethod
    def var(cls, prec: int) -> "TruncatedSeries":
        return cls({1: 1}, prec)

    def coeff(self, e: int):
        if e >= self.prec:
            raise ValueError(f"coefficient of t^{e} unknown at precision {self.prec}")
        return self.coeffs.get(e, 0)

    def coeff_list(self, order: int, start: int = 0) -> list:
        return [self.coeff(e) for e in range(start, order + 1)]

    def valuation(self) -> int | None:
        """Smallest known exponent with nonzero coefficient; None if zero so far."""
        return min(self.coeffs) if self.coeffs else None

    @property
    def is_exact(self) -> bool:
        return all(is_exact_scalar(c) for c in self.coeffs.values())

    def _val_or_prec(self) -> int:
        v = self.valuation()
        return self.prec if v is None else v

    @staticmethod
    def _wrap(other, prec):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, _SCALARS):
            return TruncatedSeries({0: other}, prec)
        return None

    def __add__(self, other):
        o = self._wrap(other, self.prec)
        if o is None:
            return NotImplemented
        prec = min(self.prec, o.prec)
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        o = self._wrap(other, self.prec)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return TruncatedSeries({e: c * other for e, c in self.coeffs.items()}, self.prec)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        prec = min(self.prec + other._val_or_prec(), other.prec + self._val_or_prec())
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e < prec:
                    out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(out, prec)

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return self * other
        return NotImplemented

    def inverse(self) -> "TruncatedSeries":
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("series is zero to its known precision")
        lead = self.coeffs[v]
        rel = self.prec - v
        # monic part 1 + u, then invert by the coefficient recursion
        u = {e - v: c * _inv_scalar(lead) for e, c in self.coeffs.items() if e != v}
        inv = {0: 1}
        for k in range(1, rel):
            acc = 0
            for j, uj in u.items():
                if 0 < j <= k:
                    acc = acc + uj * inv.get(k - j, 0)
            if acc != 0:
                inv[k] = -acc
        lead_inv = _inv_scalar(lead)
        return TruncatedSeries({e - v: c * lead_inv for e, c in inv.items()}, self.prec - 2 * v)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            inv = _inv_scalar(other)
            return self * inv
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries({0: 1}, self.prec + 0)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t^k (k may be negative)."""
        return TruncatedSeries({e + k: c for e, c in self.coeffs.items()}, self.prec + k)

    def truncate(self, prec: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(self.prec, prec))

    def scale_variable(self, c) -> "TruncatedSeries":
        """Substitute t -> c*t (nonnegative exponents only)."""
        if any(e < 0 for e in self.coeffs):
            raise ValueError("variable scaling needs a power series")
        return TruncatedSeries({e: v * c**e for e, v in self.coeffs.items()}, self.prec)

    def map_coeffs(self, fn) -> "TruncatedSeries":
        return TruncatedSeries({e: fn(c) for e, c in self.coeffs.items()}, self.prec)

    def to_floating(self) -> "TruncatedSeries":
        return self.map_coeffs(complex)

    def is_zero_mod(self, order: int, tol=0) -> bool:
        if order >= self.prec:
            raise ValueError(f"cannot compare to order {order} at precision {self.prec}")
        if tol == 0:
            return all(c == 0 for e, c in self.coeffs.items() if e <= order)
        return all(abs(c) <= tol for e, c in self.coeffs.items() if e <= order)

    def eq_mod(self, other, order: int, tol=0) -> bool:
        o = self._wrap(other, self.prec)
        return (self - o).is_zero_mod(order, tol)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.prec == other.prec and self.coeffs == other.coeffs
        if isinstance(other, _SCALARS):
            return self.coeffs == TruncatedSeries({0: other}, self.prec).coeffs
        return NotImplemented

    def __repr__(self):
        if not self.coeffs:
            return f"O(t^{self.prec})"
        terms = " + ".join(f"({self.coeffs[e]})*t^{e}" for e in sorted(self.coeffs))
        return f"{terms} + O(t^{self.prec})"


def sqrt_series(s: TruncatedSeries) -> TruncatedSeries:
    """Square root with result^2 = s to the attainable precision.

    Requires even valuation (odd valuation signals the nontrivial square
    class t and raises OddSquareClassError).  In exact mode the leading
    coefficient must be a square in Q(i), otherwise
    NonSquareCoefficientError points at floating mode; floating mode takes
    the principal branch.
    """
    v = s.valuation()
    if v is None:
        return TruncatedSeries.zero(s.prec)
    if v % 2:
        raise OddSquareClassError(f"valuation {v} is odd: series is in the square class t")
    lead = s.coeffs[v]
    if s.is_exact:
        g = gaussian_sqrt(lead)
        if g is None:
            raise NonSquareCoefficientError(
                f"leading coefficient {lead} is not a square in Q(i); use floating mode"
            )
    else:
        g = cmath.sqrt(complex(lead))
    rel = s.prec - v
    u = {e - v: c * _inv_scalar(lead) for e, c in s.coeffs.items() if e != v}
    root = {0: 1}
    for k in range(1, rel):
        acc = u.get(k, 0)
        for j in range(1, k):
            acc = acc - root.get(j, 0) * root.get(k - j, 0)
        acc = acc * _inv_scalar(2)
        if acc != 0:
            root[k] = acc
    return TruncatedSeries({e + v // 2: c * g for e, c in root.items()}, s.prec - v // 2)


class Mat2:
    """A 2x2 matrix over any scalar-like ring (exact scalars or series)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def scale(self, k) -> "Mat2":
        return Mat2(self.a * k, self.b * k, self.c * k, self.d * k)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "Mat2":
        dt = self.det()
        if dt == 1:
            return self.adjugate()
        return self.adjugate().scale(_inv_scalar(dt) if isinstance(dt, int) else 1 / dt)

    def entries(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (
            self.a == other.a and self.b == other.b
            and self.c == other.c and self.d == other.d
        )

    def __repr__(self):
        return f"Mat2({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"
