"""Truncated expansion of free-group words in the free associative algebra.

A generator a_i maps to 1 + X_i, its inverse to the truncated geometric
series 1 - X_i + X_i^2 - ...; products are cut beyond a degree cap.  All
coefficients are exact (int or Fraction).  Degree-2 data of words with
trivial abelianization gives classes in the second exterior power of the
abelianization, the workhorse behind homology classes and the cubic part
of parallelogram functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import Word, abelianize


@dataclass(frozen=True)
class TruncatedTensorSeries:
    """Sparse element of the free associative algebra modulo degree > degree_cap.

    Keys of ``coeffs`` are tuples of 1-based variable indices (noncommuting
    monomials); absent keys mean coefficient zero, stored zeros are pruned.
    """

    rank: int
    degree_cap: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", {k: v for k, v in self.coeffs.items() if v != 0}
        )

    @classmethod
    def one(cls, rank: int, degree_cap: int) -> "TruncatedTensorSeries":
        return cls(rank, degree_cap, {(): 1})

    def coefficient(self, key: tuple):
        return self.coeffs.get(tuple(key), 0)

    def degree_part(self, d: int) -> dict:
        return {k: v for k, v in self.coeffs.items() if len(k) == d}

    def __add__(self, other: "TruncatedTensorSeries") -> "TruncatedTensorSeries":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TruncatedTensorSeries(self.rank, self.degree_cap, out)

    def __sub__(self, other: "TruncatedTensorSeries") -> "TruncatedTensorSeries":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return TruncatedTensorSeries(self.rank, self.degree_cap, out)

    def __mul__(self, other: "TruncatedTensorSeries") -> "TruncatedTensorSeries":
        self._check(other)
        cap = self.degree_cap
        out = {}
        for ku, cu in self.coeffs.items():
            for kv, cv in other.coeffs.items():
                if len(ku) + len(kv) <= cap:
                    key = ku + kv
                    out[key] = out.get(key, 0) + cu * cv
        return TruncatedTensorSeries(self.rank, cap, out)

    def inverse(self) -> "TruncatedTensorSeries":
        """Inverse of a series with constant coefficient 1."""
        if self.coefficient(()) != 1:
            raise ValueError("series inverse needs constant coefficient 1")
        n = TruncatedTensorSeries(
            self.rank, self.degree_cap, {k: -v for k, v in self.coeffs.items() if k}
        )
        result = TruncatedTensorSeries.one(self.rank, self.degree_cap)
        power = TruncatedTensorSeries.one(self.rank, self.degree_cap)
        for _ in range(self.degree_cap):
            power = power * n
            if not power.coeffs:
                break
            result = result + power
        return result

    def _check(self, other):
        if self.rank != other.rank or self.degree_cap != other.degree_cap:
            raise ValueError("rank/degree_cap mismatch")


def magnus_expand(w: Word, degree_cap: int, rank: int | None = None) -> TruncatedTensorSeries:
    """Product over the letters of w of the truncated images of a_i^{+-1}."""
    if degree_cap < 1:
        raise ValueError("degree_cap must be >= 1")
    if rank is None:
        rank = w.max_index
    if w.max_index > rank:
        raise ValueError(f"word uses generator beyond rank {rank}")
    result = TruncatedTensorSeries.one(rank, degree_cap)
    for gen, sign in w.letters:
        if sign == 1:
            factor = {(): 1, (gen,): 1}
        else:
            factor = {(gen,) * d: (-1) ** d for d in range(degree_cap + 1)}
        result = result * TruncatedTensorSeries(rank, degree_cap, factor)
    return result


# ---------------------------------------------------------------------------
# Degree-2 classes: sparse vectors in the second exterior power, stored as
# dicts keyed by strictly increasing 1-based index pairs.


def lambda2_class(w: Word, rank: int | None = None) -> dict:
    """Exterior-square class of a word with trivial abelianization.

    Reads the degree-2 coefficients c_ij of the expansion of w; under the
    precondition the matrix (c_ij) is antisymmetric, which is asserted, and
    the result is {(i, j): c_ij for i < j}.
    """
    if rank is None:
        rank = w.max_index
    if any(x != 0 for x in abelianize(w, rank)):
        raise ValueError("lambda2_class needs a word with zero abelianization")
    deg2 = magnus_expand(w, 2, rank).degree_part(2)
    for (i, j), c in deg2.items():
        if i == j and c != 0:
            raise ValueError("degree-2 matrix not antisymmetric")
        if i != j and deg2.get((j, i), 0) != -c:
            raise ValueError("degree-2 matrix not antisymmetric")
    return {
        (i, j): c for (i, j), c in deg2.items() if i < j and c != 0
    }


def lam2_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def lam2_scale(a: dict, c) -> dict:
    return {k: c * v for k, v in a.items() if c * v != 0}


def wedge2(u, v) -> dict:
    """Wedge of two coordinate vectors: coefficient u_i v_j - u_j v_i on (i, j)."""
    out = {}
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            c = u[i] * v[j] - u[j] * v[i]
            if c != 0:
                out[(i + 1, j + 1)] = c
    return out


def lam2_push(lam: dict, proj) -> dict:
    """Push a class forward along a linear map given by rows of ``proj``."""
    out = {}
    for (i, j), c in lam.items():
        u = [row[i - 1] for row in proj]
        v = [row[j - 1] for row in proj]
        out = lam2_add(out, lam2_scale(wedge2(u, v), c))
    return out
