"""Solutions of the parallelogram identity f(xy) + f(xy^-1) = 2f(x) + 2f(y).

On a group these functions form the Zariski-tangent space at the trivial
SL2(C) character.  They decompose into a quadratic form on H_1 plus an
alternating 3-form part; this module evaluates them exactly on words,
characterizes which pairs (quadratic form, 3-form) descend from a free
group to a presented quotient, implements the identity catalog used by the
fuzzing suites, and exposes the induced action of H_1-trivial automorphisms.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .homology import HomologyData, Lambda3Form, compute_h1, reduce_relators
from .magnus import lam2_push, lambda2_class, wedge2
from .words import GroupHom, Presentation, Word, abelianize, evaluate_hom


@dataclass
class QuadraticForm:
    """Symmetric exact matrix; evaluates as x^T M x on coordinate vectors."""

    matrix: list

    def __post_init__(self):
        m = [list(row) for row in self.matrix]
        n = len(m)
        for row in m:
            if len(row) != n:
                raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise ValueError("matrix must be symmetric")
        self.matrix = m

    @classmethod
    def zeros(cls, n: int) -> "QuadraticForm":
        return cls([[0] * n for _ in range(n)])

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, x):
        total = 0
        for i, row in enumerate(self.matrix):
            for j, m in enumerate(row):
                if m != 0:
                    total += m * x[i] * x[j]
        return total

    def rank(self) -> int:
        return linalg.rank(self.matrix)

    @property
    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.matrix)


class ParallelogramFunction:
    """A parallelogram function given by (q, phi) on the H_1 free basis.

    The ambient is a presentation together with its homology data; a free
    group is the special case with no relators.  For genuine quotients the
    3-form must annihilate H_1 wedge (relator classes), which is checked at
    construction; that is exactly the condition making the word evaluation
    below well defined on the quotient.
    """

    def __init__(self, homology: HomologyData, q: QuadraticForm, phi: Lambda3Form, check: bool = True):
        r = homology.h1_rank
        if q.dim != r or phi.dim != r:
            raise ValueError(f"(q, phi) must live on the rank-{r} H_1 basis")
        self.homology = homology
        self.q = q
        self.phi = phi
        if check:
            for lam in homology.c_classes:
                for m in range(1, r + 1):
                    x = [0] * r
                    x[m - 1] = 1
                    if phi.eval_vec_lam2(x, lam) != 0:
                        raise ValueError("phi does not annihilate H_1 wedge relator classes")
        self._lifts = None

    @classmethod
    def on_free_group(cls, rank: int, q: QuadraticForm, phi: Lambda3Form) -> "ParallelogramFunction":
        names = tuple(f"x{i+1}" for i in range(rank))
        return cls(compute_h1(Presentation.free(names)), q, phi)

    @property
    def is_free_ambient(self) -> bool:
        return not self.homology.presentation.relators

    def __call__(self, w: Word):
        return eval_parallelogram(self, w)


def eval_parallelogram(f: ParallelogramFunction, w: Word):
    """Exact value of f on a word over the ambient generators.

    Writes w = u * v with u the canonical ordered product of lifted basis
    words (so v has zero exponent sums), takes e = the free H_1 coordinates
    and lam = the exterior-square class of v pushed to H_1; the value is
        q(e) + sum_{i<j<k} e_i e_j e_k phi_{ijk} + 2 phi(e wedge lam).
    """
    h = f.homology
    n = h.presentation.rank
    if w.max_index > n:
        raise IndexError(f"word uses generator beyond rank {n}")
    x = abelianize(w, n)
    y = linalg.mat_vec(h.coordinate_matrix, x) if n else []
    if f._lifts is None:
        f._lifts = h.lift_words()
    u = Word()
    for j in range(n):
        if y[j]:
            u = u * f._lifts[j] ** y[j]
    v = u.inverse() * w
    lam = lam2_push(lambda2_class(v, n), h.free_basis_projection)
    e = y[h.lattice_size:]
    total = f.q(e)
    for (i, j, k), c in f.phi.coeffs.items():
        total += e[i - 1] * e[j - 1] * e[k - 1] * c
    total += 2 * f.phi.eval_vec_lam2(e, lam)
    return total


def counting_f3(w: Word) -> int:
    """Signed count of ordered picks of the three generators from a rank-3 word.

    Over position triples p1 < p2 < p3 whose letters cover all three
    generators: add the product of letter signs when the generators read in
    position order are a cyclic rotation of (1, 2, 3), subtract it when they
    are a rotation of (1, 3, 2).
    """
    if w.max_index > 3:
        raise ValueError("counting_f3 needs a word over three generators")
    letters = w.letters
    plus = {(1, 2, 3), (2, 3, 1), (3, 1, 2)}
    total = 0
    for (g1, s1), (g2, s2), (g3, s3) in itertools.combinations(letters, 3):
        if {g1, g2, g3} != {1, 2, 3}:
            continue
        total += s1 * s2 * s3 * (1 if (g1, g2, g3) in plus else -1)
    return total


def epsilon_eval(f: Callable[[Word], object], words: Sequence[Word]):
    """Inclusion-exclusion evaluation of f on (g_1 - 1)...(g_n - 1)."""
    n = len(words)
    if n < 1:
        raise ValueError("need at least one word")
    total = 0
    for mask in range(1 << n):
        prod = Word()
        bits = 0
        for i in range(n):
            if mask >> i & 1:
                prod = prod * words[i]
                bits += 1
        total += (-1) ** (n - bits) * f(prod)
    return total


# ---------------------------------------------------------------------------
# Descent from the free group to a presented quotient.


def _unknown_layout(n: int):
    q_keys = [(i, j) for i in range(n) for j in range(i, n)]
    phi_keys = [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        for k in range(j + 1, n + 1)
    ]
    return q_keys, phi_keys


def _free_value_row(w: Word, n: int, q_keys, phi_keys):
    """Coefficients of the free-group evaluation of w, linear in (q, phi)."""
    x = abelianize(w, n)
    u = Word()
    for i in range(n):
        if x[i]:
            u = u * Word.generator(i + 1) ** x[i]
    lam = lambda2_class(u.inverse() * w, n)
    row = []
    for i, j in q_keys:
        row.append(x[i] * x[j] if i == j else 2 * x[i] * x[j])
    for i, j, k in phi_keys:
        cubic = x[i - 1] * x[j - 1] * x[k - 1]
        wedge = (
            x[i - 1] * lam.get((j, k), 0)
            - x[j - 1] * lam.get((i, k), 0)
            + x[k - 1] * lam.get((i, j), 0)
        )
        row.append(cubic + 2 * wedge)
    return row


@dataclass
class DescentSolution:
    dimension: int
    basis: list  # list of (QuadraticForm, Lambda3Form) pairs on the free generators


def descent_solve(p: Presentation) -> DescentSolution:
    """Pairs (q, phi) on the free generators whose evaluation descends to the quotient.

    For each reduced relator r the linear constraints are: the value on r
    vanishes; the value polarized against every generator a_m vanishes
    (f(a_m r) - f(a_m) - f(r) = 0); and phi kills every wedge of two
    generator classes with the class of r.  Single-relator constraints
    suffice for the whole normal closure because the evaluation is cyclic
    and its failure of additivity is exactly the trilinear part; this
    reduction is exercised against a brute-force f(xr) = f(x) check in the
    test suite.
    """
    n = p.rank
    q_keys, phi_keys = _unknown_layout(n)
    width = len(q_keys) + len(phi_keys)
    reduced, _ell, _log = reduce_relators(p)
    rows = []

    def sub(r1, r2):
        return [a - b for a, b in zip(r1, r2)]

    for r in reduced:
        if not r:
            continue
        row_r = _free_value_row(r, n, q_keys, phi_keys)
        rows.append(row_r)
        xr = abelianize(r, n)
        for m in range(1, n + 1):
            am = Word.generator(m)
            row = sub(_free_value_row(am * r, n, q_keys, phi_keys), row_r)
            row = sub(row, _free_value_row(am, n, q_keys, phi_keys))
            rows.append(row)
        for m1 in range(1, n + 1):
            for m2 in range(m1 + 1, n + 1):
                row = [0] * width
                for idx, (i, j, k) in enumerate(phi_keys):
                    u = [0] * n
                    v = [0] * n
                    u[m1 - 1] = 1
                    v[m2 - 1] = 1
                    det3 = linalg.det(
                        [
                            [u[i - 1], v[i - 1], xr[i - 1]],
                            [u[j - 1], v[j - 1], xr[j - 1]],
                            [u[k - 1], v[k - 1], xr[k - 1]],
                        ]
                    )
                    row[len(q_keys) + idx] = det3
                rows.append(row)
    kernel = linalg.kernel_basis(rows, width)
    basis = []
    for vec in kernel:
        m = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), val in zip(q_keys, vec):
            m[i][j] = val
            m[j][i] = val
        phi = {
            key: val
            for key, val in zip(phi_keys, vec[len(q_keys):])
            if val != 0
        }
        basis.append((QuadraticForm(m), Lambda3Form(n, phi)))
    return DescentSolution(len(kernel), basis)


# ---------------------------------------------------------------------------
# Identity catalog.  Elements of the group algebra are dicts Word -> scalar.


def _alg(w: Word) -> dict:
    return {w: 1}


def _alg_add(*terms) -> dict:
    out = {}
    for t in terms:
        for w, c in t.items():
            out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c != 0}


def _alg_scale(t: dict, c) -> dict:
    return {w: c * v for w, v in t.items() if c * v != 0}


def _eps(words: Sequence[Word]) -> dict:
    """Group-algebra expansion of (g_1 - 1)...(g_n - 1)."""
    acc = {Word(): 1}
    for g in words:
        nxt = {}
        for w, c in acc.items():
            wg = w * g
            nxt[wg] = nxt.get(wg, 0) + c
            nxt[w] = nxt.get(w, 0) - c
        acc = {w: c for w, c in nxt.items() if c != 0}
    return acc


def _pairing(u: dict, v: dict) -> dict:
    """Bilinear extension of (g, h) -> gh + gh^-1 - 2g - 2h."""
    out = {}

    def add(w, c):
        out[w] = out.get(w, 0) + c

    for g, cg in u.items():
        for h, ch in v.items():
            c = cg * ch
            add(g * h, c)
            add(g * h.inverse(), c)
            add(g, -2 * c)
            add(h, -2 * c)
    return {w: c for w, c in out.items() if c != 0}


def _apply(f: Callable[[Word], object], elem: dict):
    total = 0
    for w, c in elem.items():
        total += c * f(w)
    return total


@dataclass
class IdentityCheck:
    ok: bool
    residual: object


def _arity(words, n):
    if len(words) != n:
        raise ValueError(f"identity needs {n} words, got {len(words)}")


def verify_identity(
    identity: str,
    f: Callable[[Word], object],
    words: Sequence[Word],
    power: int = 2,
) -> IdentityCheck:
    """Evaluate one catalog identity exactly and report the residual.

    Identities over parallelogram functions: ``parallelogram`` (x, y),
    ``elementary`` (g, d; also checks the ``power`` exponent law),
    ``cubic`` (a, b, c, d), ``alternating3`` (a, b, c),
    ``commutator_shift`` (a, b, c), ``order5`` (five words).
    Identities over central functions: ``quartic_pairing`` (a, b, c, d)
    and ``pairing_kernel`` (a, b, c).
    """
    words = list(words)
    if identity == "parallelogram":
        _arity(words, 2)
        x, y = words
        residual = f(x * y) + f(x * y.inverse()) - 2 * f(x) - 2 * f(y)
    elif identity == "elementary":
        _arity(words, 2)
        g, d = words
        residuals = [
            f(g**power) - power * power * f(g),
            f(g * d) - f(d * g),
            f(g * d * g.inverse() * d.inverse()),
        ]
        residual = next((r for r in residuals if r != 0), residuals[0])
    elif identity == "cubic":
        _arity(words, 4)
        residual = epsilon_eval(f, words)
    elif identity == "alternating3":
        _arity(words, 3)
        a, b, c = words
        residual = epsilon_eval(f, (a, b, c)) + epsilon_eval(f, (a, c, b))
    elif identity == "commutator_shift":
        _arity(words, 3)
        a, b, c = words
        comm = b * c * b.inverse() * c.inverse()
        residual = f(a * comm) - f(a) - 2 * epsilon_eval(f, (a, b, c))
    elif identity == "order5":
        _arity(words, 5)
        residual = epsilon_eval(f, words)
    elif identity == "quartic_pairing":
        _arity(words, 4)
        a, b, c, d = words
        rhs_elem = _alg_add(
            _pairing(_eps((a, b, c)), _alg(d)),
            _pairing(_eps((b, c, d)), _alg(a)),
            _pairing(_eps((a, b, d)), _alg(c)),
            _pairing(_eps((c, a, d.inverse())), _alg(b)),
            _alg_scale(_pairing(_eps((a, d.inverse())), _eps((b, c))), -1),
            _alg_scale(_pairing(_eps((b, d)), _eps((c, a))), -1),
            _alg_scale(_pairing(_eps((d, c.inverse())), _eps((a, b))), -1),
        )
        residual = 2 * epsilon_eval(f, words) - _apply(f, rhs_elem)
    elif identity == "pairing_kernel":
        _arity(words, 3)
        a, b, c = words
        k1 = _alg_add(
            _pairing(_eps((a, b)), _alg(c)),
            _pairing(_eps((a, b.inverse())), _alg(c)),
            _alg_scale(_pairing(_eps((c, a)), _alg(b)), -1),
            _alg_scale(_pairing(_eps((c.inverse(), a)), _alg(b)), -1),
        )
        k2 = _alg_add(
            _pairing(_eps((b, c)), _alg(a)),
            _alg_scale(_pairing(_eps((c, b)), _alg(a)), -1),
            _pairing(_eps((b, a)), _alg(c)),
            _alg_scale(_pairing(_eps((a, b)), _alg(c)), -1),
            _alg_scale(_pairing(_eps((a, c.inverse())), _alg(b)), -1),
            _pairing(_eps((c.inverse(), a)), _alg(b)),
        )
        r1 = _apply(f, k1)
        r2 = _apply(f, k2)
        residual = r1 if r1 != 0 else r2
    else:
        raise ValueError(f"unknown identity {identity!r}")
    return IdentityCheck(residual == 0, residual)


IDENTITY_NAMES = (
    "parallelogram",
    "elementary",
    "cubic",
    "alternating3",
    "commutator_shift",
    "order5",
    "quartic_pairing",
    "pairing_kernel",
)


# ---------------------------------------------------------------------------
# Torelli-type action and trace functions.


def johnson_action(images: Sequence[Word], f: ParallelogramFunction) -> QuadraticForm:
    """Quadratic form by which an H_1-trivial endomorphism shifts f.

    ``images`` gives the endomorphism of the free ambient on its generators,
    required to fix every generator's abelianization.  With tau(a_i) the
    exterior-square class of images[i] * a_i^-1, the shift is
    x -> 2 phi(x wedge tau(x)); the polarized matrix is returned and the
    formula f(phi(w)) - f(w) = form(w) is asserted on sample words.
    """
    if not f.is_free_ambient:
        raise ValueError("johnson_action expects a free ambient")
    n = f.homology.presentation.rank
    if len(images) != n:
        raise ValueError("need one image per generator")
    taus = []
    for i, im in enumerate(images):
        if abelianize(im, n) != abelianize(Word.generator(i + 1), n):
            raise ValueError("endomorphism does not fix the abelianization")
        taus.append(lambda2_class(im * Word.generator(i + 1).inverse(), n))

    def phi_vec_tau(i, j):
        x = [0] * n
        x[i] = 1
        return f.phi.eval_vec_lam2(x, taus[j])

    matrix = [
        [phi_vec_tau(i, j) + phi_vec_tau(j, i) for j in range(n)] for i in range(n)
    ]
    form = QuadraticForm(matrix)

    hom = GroupHom(tuple(images), Word())
    rng = random.Random(20260810)
    samples = [Word.generator(i + 1) for i in range(n)]
    samples += [
        Word.from_letters(
            (rng.randrange(1, n + 1), rng.choice((1, -1))) for _ in range(6)
        )
        for _ in range(4)
    ]
    for w in samples:
        if f(evaluate_hom(w, hom)) - f(w) != form(abelianize(w, n)):
            raise AssertionError("action form disagrees with pointwise evaluation")
    return form


@dataclass
class CentralFunction:
    """A conjugation-invariant function with f(1) = 0 and f(g) = f(g^-1).

    The class axioms are spot-checked on seeded random words at construction.
    """

    evaluate: Callable[[Word], object]
    rank: int

    def __post_init__(self):
        rng = random.Random(97)
        if self.evaluate(Word()) != 0:
            raise ValueError("central function must vanish at the identity")
        for _ in range(4):
            g = Word.from_letters(
                (rng.randrange(1, self.rank + 1), rng.choice((1, -1))) for _ in range(5)
            )
            d = Word.from_letters(
                (rng.randrange(1, self.rank + 1), rng.choice((1, -1))) for _ in range(5)
            )
            if self.evaluate(g) != self.evaluate(g.inverse()):
                raise ValueError("central function must be inversion-invariant")
            if self.evaluate(g * d) != self.evaluate(d * g):
                raise ValueError("central function must be cyclic")

    def __call__(self, w: Word):
        return self.evaluate(w)


def qphi_to_json(q: QuadraticForm, phi: Lambda3Form) -> dict:
    """JSON form {"q": [["p/q", ...]], "phi": {"i,j,k": "p/q"}} (1-based triples)."""
    return {
        "q": [[str(Fraction(x)) for x in row] for row in q.matrix],
        "phi": {",".join(map(str, key)): str(Fraction(v)) for key, v in sorted(phi.coeffs.items())},
    }


def qphi_from_json(obj: dict) -> tuple:
    rows = obj.get("q", [])
    matrix = [[Fraction(x) for x in row] for row in rows]
    dim = len(matrix)
    phi_map = {}
    for key, v in obj.get("phi", {}).items():
        triple = tuple(int(part) for part in key.split(","))
        phi_map[triple] = Fraction(v)
        dim = max(dim, *triple)
    for row in matrix:
        row.extend([Fraction(0)] * (dim - len(row)))
    while len(matrix) < dim:
        matrix.append([Fraction(0)] * dim)
    return QuadraticForm(matrix), Lambda3Form(dim, phi_map)


def trace_central_function(rep: Sequence) -> CentralFunction:
    """Trace minus 2 of an exact unimodular 2x2 representation."""
    from .series import Mat2

    matrices = list(rep)
    for m in matrices:
        if m.det() != 1:
            raise ValueError("representation matrices must have determinant 1")
    hom = GroupHom(tuple(matrices), Mat2.identity())
    cache = {}

    def evaluate(w: Word):
        if w not in cache:
            cache[w] = evaluate_hom(w, hom).trace() - 2
        return cache[w]

    return CentralFunction(evaluate, len(matrices))
