"""Seeded random generators shared by the fuzzing CLI and the test suite.

Every generator takes an explicit random.Random so trials can be derived
deterministically from (seed, trial index); parallel or re-ordered runs
then produce identical results.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .homology import Lambda3Form
from .parallelogram import ParallelogramFunction, QuadraticForm
from .series import Mat2
from .words import Word


def derived_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def random_reduced_word(rng: random.Random, rank: int, length: int) -> Word:
    letters = []
    while len(letters) < length:
        idx = rng.randrange(2 * rank)
        gen, sign = idx // 2 + 1, (1 if idx % 2 == 0 else -1)
        if letters and letters[-1] == (gen, -sign):
            continue
        letters.append((gen, sign))
    return Word(tuple(letters))


def random_fraction(rng: random.Random, span: int = 4, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_quadratic_form(rng: random.Random, n: int) -> QuadraticForm:
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = random_fraction(rng)
            m[i][j] = v
            m[j][i] = v
    return QuadraticForm(m)


def random_lambda3(rng: random.Random, n: int) -> Lambda3Form:
    coeffs = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                v = random_fraction(rng)
                if v != 0:
                    coeffs[(i, j, k)] = v
    return Lambda3Form(n, coeffs)


def random_parallelogram_function(rng: random.Random, n: int, homology=None) -> ParallelogramFunction:
    q = random_quadratic_form(rng, n)
    phi = random_lambda3(rng, n)
    if homology is not None:
        return ParallelogramFunction(homology, q, phi)
    return ParallelogramFunction.on_free_group(n, q, phi)


def random_unimodular_mat2(rng: random.Random, factors: int = 4, span: int = 3) -> Mat2:
    """Product of elementary shear matrices: exact integer entries, det 1."""
    m = Mat2.identity()
    for _ in range(factors):
        k = rng.randint(-span, span)
        if rng.randrange(2):
            m = m * Mat2(1, k, 0, 1)
        else:
            m = m * Mat2(1, 0, k, 1)
    return m


def random_integer_sl2_rep(rng: random.Random, rank: int) -> list:
    return [random_unimodular_mat2(rng) for _ in range(rank)]


def random_unimodular_rows(rng: random.Random, n: int, factors: int = 5, span: int = 2) -> list:
    """Integer n x n matrix of determinant +-1 (product of shears and swaps)."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(factors):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        k = rng.randint(-span, span)
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    return rows
