"""Shared builders for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

from chartan.series import Mat2, TruncatedSeries
from chartan.words import Presentation

DATA = Path(__file__).parent / "data"


def load_presentation(name: str) -> Presentation:
    return Presentation.from_text((DATA / name).read_text())


CORPUS = [
    "f2.txt",
    "f3.txt",
    "f5.txt",
    "z2.txt",
    "z3.txt",
    "genus2.txt",
    "genus3.txt",
    "trefoil.txt",
    "tri333.txt",
]


def random_unipotent_rep(rng: random.Random, rank: int, order: int) -> list:
    """Random exact series rep with unipotent upper-triangular residual images.

    Built from elementary factors (upper shear by a polynomial, lower shear
    by a polynomial with zero constant term, diagonal unit), so determinants
    are exactly 1.
    """
    prec = order + 1
    mats = []
    for _ in range(rank):
        m = Mat2(
            TruncatedSeries.constant(1, prec),
            TruncatedSeries.zero(prec),
            TruncatedSeries.zero(prec),
            TruncatedSeries.constant(1, prec),
        )
        for _ in range(rng.randint(2, 4)):
            kind = rng.randrange(3)
            if kind == 0:
                p = TruncatedSeries({i: rng.randint(-2, 2) for i in range(3)}, prec)
                f = Mat2(
                    TruncatedSeries.constant(1, prec), p,
                    TruncatedSeries.zero(prec), TruncatedSeries.constant(1, prec),
                )
            elif kind == 1:
                p = TruncatedSeries({i: rng.randint(-2, 2) for i in range(1, 3)}, prec)
                f = Mat2(
                    TruncatedSeries.constant(1, prec), TruncatedSeries.zero(prec),
                    p, TruncatedSeries.constant(1, prec),
                )
            else:
                u = TruncatedSeries({0: 1, 1: rng.randint(-2, 2)}, prec)
                f = Mat2(
                    u, TruncatedSeries.zero(prec),
                    TruncatedSeries.zero(prec), u.inverse(),
                )
            m = m * f
        mats.append(m)
    return mats
