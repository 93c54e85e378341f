import math
import random
from fractions import Fraction

import pytest

import helpers
from chartan import sampling
from chartan.jets import build_parabolic_deformation, character_jet_from_rep
from chartan.parallelogram import QuadraticForm
from chartan.pseudochar import (
    DualNumber,
    PseudoCharacterEvaluator,
    SquareMatrix,
    falling_factorial_coeffs,
    frobenius_sum,
    linearized_tangent_sum,
    paraln_closed_form,
    signed_cycle_polynomial,
    trace_pseudocharacter,
)
from chartan.words import Word, abelianize


def gens(count):
    return [Word.generator(i + 1) for i in range(count)]


def abelian_square(rank):
    """Central function: square of the total exponent sum (a quadratic form)."""
    return lambda w: Fraction(sum(abelianize(w, rank))) ** 2


class TestFrobenius:
    def test_fixed_triple(self):
        mats = [
            SquareMatrix([[1, 1], [0, 1]]),
            SquareMatrix([[1, 0], [1, 1]]),
            SquareMatrix.identity(2),
        ]
        assert frobenius_sum(trace_pseudocharacter(mats), gens(3)) == 0

    def test_dimension_two_random(self):
        rng = random.Random(40)
        for _ in range(50):
            mats = [SquareMatrix(sampling.random_unimodular_rows(rng, 2)) for _ in range(3)]
            assert frobenius_sum(trace_pseudocharacter(mats), gens(3)) == 0

    def test_dimension_three_random(self):
        rng = random.Random(41)
        for _ in range(50):
            mats = [SquareMatrix(sampling.random_unimodular_rows(rng, 3)) for _ in range(4)]
            assert frobenius_sum(trace_pseudocharacter(mats), gens(4)) == 0

    def test_dimension_one(self):
        T = PseudoCharacterEvaluator(lambda w: Fraction(3) ** sum(abelianize(w, 2)), 1)
        assert frobenius_sum(T, gens(2)) == 0

    def test_nonpseudo_detected(self):
        T = PseudoCharacterEvaluator(abelian_square(2), 1)
        assert frobenius_sum(T, gens(2)) != 0

    def test_tuple_length_checked(self):
        T = PseudoCharacterEvaluator(lambda w: 0, 2)
        with pytest.raises(ValueError):
            frobenius_sum(T, gens(2))

    def test_words_not_just_generators(self):
        rng = random.Random(42)
        mats = [SquareMatrix(sampling.random_unimodular_rows(rng, 2)) for _ in range(2)]
        T = trace_pseudocharacter(mats)
        for _ in range(20):
            words = [sampling.random_reduced_word(rng, 2, rng.randint(0, 5)) for _ in range(3)]
            assert frobenius_sum(T, words) == 0

    def test_centrality_spot_check(self):
        rng = random.Random(43)
        mats = [SquareMatrix(sampling.random_unimodular_rows(rng, 2)) for _ in range(2)]
        T = trace_pseudocharacter(mats)
        pairs = [
            (
                sampling.random_reduced_word(rng, 2, 4),
                sampling.random_reduced_word(rng, 2, 4),
            )
            for _ in range(5)
        ]
        assert T.check_central(pairs)


class TestCyclePolynomial:
    def test_small_cases(self):
        assert signed_cycle_polynomial(1) == [0, 1]
        assert signed_cycle_polynomial(3) == [0, 2, -3, 1]

    def test_matches_falling_factorial(self):
        for length in range(1, 7):
            assert signed_cycle_polynomial(length) == falling_factorial_coeffs(length)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            signed_cycle_polynomial(0)
        with pytest.raises(ValueError):
            signed_cycle_polynomial(9)


class TestLinearized:
    def test_additive_vanishes(self):
        f = lambda w: Fraction(sum(abelianize(w, 2)))
        rng = random.Random(44)
        for _ in range(20):
            words = [sampling.random_reduced_word(rng, 2, rng.randint(0, 5)) for _ in range(2)]
            assert linearized_tangent_sum(f, words, 1) == 0

    def test_nonadditive_formula(self):
        f = abelian_square(2)
        g0, g1 = Word.generator(1), Word.generator(2)
        expected = f(g0) + f(g1) - f(g0 * g1)
        assert linearized_tangent_sum(f, [g0, g1], 1) == expected

    def test_zero_function(self):
        assert linearized_tangent_sum(lambda w: 0, gens(3), 2) == 0

    def test_vanishes_for_jet_coefficients(self):
        rng = random.Random(45)
        for _ in range(10):
            rep = helpers.random_unipotent_rep(rng, 2, 2)
            jet = character_jet_from_rep(rep, 2)
            for _ in range(10):
                words = [
                    sampling.random_reduced_word(rng, 2, rng.randint(0, 4))
                    for _ in range(3)
                ]
                assert linearized_tangent_sum(lambda w: jet.g(1, w), words, 2) == 0

    def test_vanishes_for_parallelogram_functions(self):
        rng = random.Random(46)
        for _ in range(10):
            f = sampling.random_parallelogram_function(rng, 3)
            words = [sampling.random_reduced_word(rng, 3, rng.randint(0, 5)) for _ in range(3)]
            assert linearized_tangent_sum(f, words, 2) == 0

    def test_closed_form_agrees_with_dual_numbers(self):
        # central input: the closed form equals the eps part divided by -n!
        rng = random.Random(47)
        f = abelian_square(3)
        for n in (1, 2, 3):
            for _ in range(10):
                words = [
                    sampling.random_reduced_word(rng, 3, rng.randint(0, 4))
                    for _ in range(n + 1)
                ]
                lin = linearized_tangent_sum(f, words, n)
                closed = paraln_closed_form(f, words, n)
                assert closed * (-math.factorial(n)) == lin


class TestDualNumber:
    def test_nilpotent_square(self):
        eps = DualNumber(0, 1)
        assert eps * eps == DualNumber(0, 0)

    def test_ring_ops(self):
        x = DualNumber(2, 3)
        y = DualNumber(5, -1)
        assert x + y == DualNumber(7, 2)
        assert x * y == DualNumber(10, 13)
        assert x - y == DualNumber(-3, 4)
