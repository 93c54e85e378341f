import random

import pytest
from hypothesis import given, strategies as st

from chartan.magnus import (
    TruncatedTensorSeries,
    lam2_add,
    lam2_push,
    lambda2_class,
    magnus_expand,
    wedge2,
)
from chartan.words import Word, abelianize, commutator, parse_word


def naive_cross_coefficient(word, i, j):
    """Independent oracle: coefficient of X_i X_j (i != j) from letter positions.

    Each letter contributes sign * X_gen at degree one, so the cross term is
    the signed count of position pairs p < q carrying generators (i, j).
    """
    total = 0
    letters = word.letters
    for p in range(len(letters)):
        for q in range(p + 1, len(letters)):
            if letters[p][0] == i and letters[q][0] == j:
                total += letters[p][1] * letters[q][1]
    return total


def random_word_rng(rng, rank, length):
    letters = []
    while len(letters) < length:
        idx = rng.randrange(2 * rank)
        gen, sign = idx // 2 + 1, (1 if idx % 2 == 0 else -1)
        if letters and letters[-1] == (gen, -sign):
            continue
        letters.append((gen, sign))
    return Word(tuple(letters))


class TestExpand:
    def test_commutator_degree2(self):
        s = magnus_expand(parse_word("[a,b]", ["a", "b"]), 2)
        assert s.coeffs == {(): 1, (1, 2): 1, (2, 1): -1}

    def test_inverse_letter(self):
        s = magnus_expand(Word.generator(1).inverse(), 2)
        assert s.coeffs == {(): 1, (1,): -1, (1, 1): 1}

    def test_degree1_is_abelianization(self):
        rng = random.Random(0)
        for _ in range(20):
            word = random_word_rng(rng, 3, rng.randint(0, 10))
            s = magnus_expand(word, 2, 3)
            vec = abelianize(word, 3)
            assert all(s.coefficient((i + 1,)) == vec[i] for i in range(3))

    def test_multiplicativity_200_pairs(self):
        rng = random.Random(1)
        for cap in (2, 3):
            for _ in range(100):
                u = random_word_rng(rng, 3, rng.randint(0, 8))
                v = random_word_rng(rng, 3, rng.randint(0, 8))
                lhs = magnus_expand(u * v, cap, 3)
                rhs = magnus_expand(u, cap, 3) * magnus_expand(v, cap, 3)
                assert lhs == rhs

    def test_inverse_matches_word_inverse(self):
        rng = random.Random(2)
        for _ in range(40):
            word = random_word_rng(rng, 3, rng.randint(0, 8))
            assert magnus_expand(word, 3, 3).inverse() == magnus_expand(word.inverse(), 3, 3)

    def test_unit_times_geometric(self):
        one = TruncatedTensorSeries(1, 2, {(): 1, (1,): 1})
        geo = TruncatedTensorSeries(1, 2, {(): 1, (1,): -1, (1, 1): 1})
        assert (one * geo).coeffs == {(): 1}

    def test_inverse_requires_unit(self):
        with pytest.raises(ValueError):
            TruncatedTensorSeries(1, 2, {(): 2}).inverse()


class TestLambda2:
    def test_commutator_class(self):
        lam = lambda2_class(parse_word("[a,b]", ["a", "b"]), 2)
        assert lam == {(1, 2): 1}

    def test_identity(self):
        assert lambda2_class(Word(), 2) == {}

    def test_six_letter_product(self):
        word = parse_word("c^-1 b^-1 a^-1 c b a", ["a", "b", "c"])
        assert lambda2_class(word, 3) == {(1, 2): -1, (1, 3): -1, (2, 3): -1}

    def test_nonzero_abelianization_rejected(self):
        with pytest.raises(ValueError):
            lambda2_class(Word.generator(1), 2)

    def test_matches_positional_oracle(self):
        rng = random.Random(3)
        count = 0
        while count < 30:
            u = random_word_rng(rng, 3, rng.randint(1, 6))
            word = commutator(u, random_word_rng(rng, 3, rng.randint(1, 6)))
            if not word:
                continue
            count += 1
            lam = lambda2_class(word, 3)
            for i in range(1, 4):
                for j in range(i + 1, 4):
                    assert lam.get((i, j), 0) == naive_cross_coefficient(word, i, j)

    def test_commutator_shift_property(self):
        rng = random.Random(4)
        for _ in range(40):
            u = random_word_rng(rng, 3, rng.randint(0, 6))
            v = random_word_rng(rng, 3, rng.randint(0, 6))
            w = commutator(
                random_word_rng(rng, 3, rng.randint(0, 6)),
                random_word_rng(rng, 3, rng.randint(0, 6)),
            )
            shifted = lambda2_class(commutator(u, v) * w, 3)
            expected = lam2_add(
                lambda2_class(w, 3), wedge2(abelianize(u, 3), abelianize(v, 3))
            )
            assert shifted == expected

    def test_antisymmetry_forced(self):
        rng = random.Random(5)
        for _ in range(30):
            u = random_word_rng(rng, 4, rng.randint(0, 6))
            v = random_word_rng(rng, 4, rng.randint(0, 6))
            word = commutator(u, v)
            deg2 = magnus_expand(word, 2, 4).degree_part(2)
            for (i, j), c in deg2.items():
                assert deg2.get((j, i), 0) == -c


class TestPush:
    def test_push_identity(self):
        lam = {(1, 2): 3}
        proj = [[1, 0], [0, 1]]
        assert lam2_push(lam, proj) == {(1, 2): 3}

    def test_push_swap(self):
        lam = {(1, 2): 1}
        proj = [[0, 1], [1, 0]]
        assert lam2_push(lam, proj) == {(1, 2): -1}
