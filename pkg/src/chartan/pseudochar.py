"""Pseudo-characters of dimension n: alternating sums over the symmetric group.

A central function T with T(1) = n is the trace of an n-dimensional
representation datum exactly when the signed sum over S_{n+1} of cycle
products of T vanishes on every (n+1)-tuple.  The linearization of that
identity at the constant function n is computed over dual numbers; the
equivalent closed form (ordered tuples of pairwise distinct indices,
weighted by (-1)^k / k!) is kept as a cross-checked second evaluator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .words import Permutation, Word

MAX_TUPLE = 8


@dataclass(frozen=True)
class DualNumber:
    """a + eps*b with eps^2 = 0."""

    a: object
    b: object

    def __add__(self, other):
        if isinstance(other, DualNumber):
            return DualNumber(self.a + other.a, self.b + other.b)
        return DualNumber(self.a + other, self.b)

    __radd__ = __add__

    def __neg__(self):
        return DualNumber(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, DualNumber) else DualNumber(-other, 0))

    def __mul__(self, other):
        if isinstance(other, DualNumber):
            return DualNumber(self.a * other.a, self.a * other.b + self.b * other.a)
        return DualNumber(self.a * other, self.b * other)

    __rmul__ = __mul__


@dataclass
class PseudoCharacterEvaluator:
    """Word evaluator into a commutative ring, declared dimension n."""

    evaluate: Callable[[Word], object]
    dimension: int

    def __call__(self, w: Word):
        return self.evaluate(w)

    def check_central(self, pairs: Sequence) -> bool:
        return all(self.evaluate(g * d) == self.evaluate(d * g) for g, d in pairs)


def frobenius_sum(T: PseudoCharacterEvaluator, words: Sequence[Word]):
    """Sum over S_{n+1} of sign(sigma) times the product of T over the cycles.

    Each cycle (including fixed points) is read in its stored cyclic order;
    centrality of T makes the starting point immaterial.
    """
    n = T.dimension
    words = list(words)
    if len(words) != n + 1:
        raise ValueError(f"need a tuple of {n + 1} words")
    if n + 1 > MAX_TUPLE:
        raise ValueError(f"tuple length capped at {MAX_TUPLE}")
    total = None
    for images in itertools.permutations(range(n + 1)):
        sigma = Permutation(images)
        term = sigma.sign()
        for cycle in sigma.cycles():
            prod = Word()
            for i in cycle:
                prod = prod * words[i]
            term = term * T.evaluate(prod)
        total = term if total is None else total + term
    return total


def signed_cycle_polynomial(length: int) -> list:
    """Coefficients of sum over S_l of sign(sigma) t^{#cycles(sigma)}.

    Equals the falling factorial t(t-1)...(t-l+1); computed here by direct
    enumeration.  Returned as coefficient list indexed by power of t.
    """
    if not 1 <= length <= MAX_TUPLE:
        raise ValueError(f"length must be between 1 and {MAX_TUPLE}")
    coeffs = [0] * (length + 1)
    for images in itertools.permutations(range(length)):
        sigma = Permutation(images)
        coeffs[len(sigma.cycles())] += sigma.sign()
    return coeffs


def falling_factorial_coeffs(length: int) -> list:
    """Coefficients of t(t-1)...(t-l+1), the closed form of the cycle sum."""
    poly = [0, 1]
    for k in range(1, length):
        shifted = [0] + poly
        scaled = [-k * c for c in poly] + [0]
        poly = [a + b for a, b in zip(shifted, scaled)]
    return poly + [0] * (length + 1 - len(poly))


def linearized_tangent_sum(f: Callable[[Word], object], words: Sequence[Word], n: int):
    """Coefficient of eps in the Frobenius sum of T = n + eps f.

    Vanishing on all (n+1)-tuples is the tangent condition at the trivial
    character of the dimension-n character space.
    """
    T = PseudoCharacterEvaluator(lambda w: DualNumber(Fraction(n), f(w)), n)
    return frobenius_sum(T, words).b


def paraln_closed_form(f: Callable[[Word], object], words: Sequence[Word], n: int):
    """Closed form of the linearized identity, normalized by -1/n!.

    Sums (-1)^k / k! f(g_{i_1} ... g_{i_k}) over ordered k-tuples of
    pairwise distinct indices in {0..n}; the distinct-index reading is
    forced by the cycle decomposition and is cross-checked against the
    dual-number computation in the tests.
    """
    words = list(words)
    if len(words) != n + 1:
        raise ValueError(f"need a tuple of {n + 1} words")
    total = 0
    for k in range(1, n + 2):
        weight = Fraction((-1) ** k, math.factorial(k))
        for tup in itertools.permutations(range(n + 1), k):
            prod = Word()
            for i in tup:
                prod = prod * words[i]
            total += weight * f(prod)
    return total


class SquareMatrix:
    """Exact n x n matrix with just the group operations needed for traces."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]

    def __mul__(self, other: "SquareMatrix") -> "SquareMatrix":
        return SquareMatrix(linalg.mat_mul(self.rows, other.rows))

    def inverse(self) -> "SquareMatrix":
        return SquareMatrix(linalg.inverse(self.rows))

    def trace(self):
        return sum(self.rows[i][i] for i in range(len(self.rows)))

    @classmethod
    def identity(cls, n: int) -> "SquareMatrix":
        return cls(linalg.eye(n))


def trace_pseudocharacter(matrices: Sequence[SquareMatrix]) -> PseudoCharacterEvaluator:
    """Trace of a matrix representation as a pseudo-character evaluator."""
    from .words import GroupHom, evaluate_hom

    n = len(matrices[0].rows)
    hom = GroupHom(tuple(matrices), SquareMatrix.identity(n))
    cache: dict = {}

    def evaluate(w: Word):
        if w not in cache:
            cache[w] = evaluate_hom(w, hom).trace()
        return cache[w]

    return PseudoCharacterEvaluator(evaluate, n)
