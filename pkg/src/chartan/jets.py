"""Character jets, obstructions and lifting to matrix representations.

A jet of order N at the trivial character assigns to every word a trace
polynomial 2 + g_1 t + ... + g_N t^N compatible with the trace relation.
This module extracts jets from truncated matrix representations, checks the
order-n jet equations, computes the order-2/order-3 obstruction data,
builds the parabolic deformation realizing any rank<=2 bilinear form, and
solves the two-generator lifting system over formal Laurent series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .homology import Lambda3Form
from .parallelogram import QuadraticForm
from .scalars import GaussianRational, format_exact, is_exact_scalar, rational_sqrt
from .series import (
    Mat2,
    NonSquareCoefficientError,
    OddSquareClassError,
    TruncatedSeries,
    sqrt_series,
)
from .words import GroupHom, Word, evaluate_hom

DEFAULT_TOLERANCE = 1e-9


class DegenerateSystemError(ValueError):
    """The trace system determinant x^2+y^2+z^2-xyz-4 vanishes to the given order."""


class UnsupportedReducibleError(ValueError):
    """Reducible configuration with x = +-2 that would need a ramified extension."""


class JetConsistencyError(ValueError):
    """Input data does not come from a character jet (a post-check failed)."""


class PrecisionError(RuntimeError):
    """Working precision was exhausted before the requested order."""


def _is_zero(s: TruncatedSeries, order: int, tol) -> bool:
    return s.is_zero_mod(order, tol)


def _tolerance(exact: bool, tol) -> object:
    if tol is not None:
        return tol
    return 0 if exact else DEFAULT_TOLERANCE


# ---------------------------------------------------------------------------
# Jets from truncated representations.


class CharacterJet:
    """Trace evaluator of a truncated representation, constant term 2."""

    def __init__(self, order: int, matrices: Sequence[Mat2]):
        self.order = order
        self.rank = len(matrices)
        self._hom = GroupHom(tuple(matrices), Mat2.identity())
        self._cache: dict = {}

    def trace_series(self, w: Word) -> TruncatedSeries:
        if w not in self._cache:
            tr = evaluate_hom(w, self._hom).trace()
            if not isinstance(tr, TruncatedSeries):
                tr = TruncatedSeries.constant(tr, self.order + 1)
            self._cache[w] = tr.truncate(self.order + 1)
        return self._cache[w]

    def g(self, k: int, w: Word):
        """Plain coefficient g_k of the trace polynomial of w."""
        if not 0 <= k <= self.order:
            raise ValueError(f"coefficient index {k} outside jet order {self.order}")
        return self.trace_series(w).coeff(k)

    def coefficients(self, w: Word) -> list:
        return self.trace_series(w).coeff_list(self.order)


def character_jet_from_rep(rep: Sequence[Mat2], order: int, tol=None) -> CharacterJet:
    """Jet of a representation whose residual images are unipotent upper triangular."""
    matrices = []
    for m in rep:
        entries = {}
        for name in ("a", "b", "c", "d"):
            e = getattr(m, name)
            if not isinstance(e, TruncatedSeries):
                e = TruncatedSeries.constant(e, order + 1)
            if e.prec < order + 1:
                raise ValueError(f"entry precision {e.prec} below jet order {order}")
            entries[name] = e
        mm = Mat2(entries["a"], entries["b"], entries["c"], entries["d"])
        exact = all(entries[n].is_exact for n in entries)
        t = _tolerance(exact, tol)
        if not (mm.det() - 1).is_zero_mod(order, t):
            raise ValueError("representation matrix must have determinant 1")
        res_ok = (
            abs(complex(mm.a.coeff(0)) - 1) <= (t if t else 0)
            if not exact
            else mm.a.coeff(0) == 1
        )
        res_ok = res_ok and (
            mm.d.coeff(0) == 1 and mm.c.coeff(0) == 0
            if exact
            else abs(complex(mm.d.coeff(0)) - 1) <= t and abs(complex(mm.c.coeff(0))) <= t
        )
        if not res_ok:
            raise ValueError("residual image must be unipotent upper triangular")
        matrices.append(mm)
    return CharacterJet(order, matrices)


def verify_jet_equation(jet: CharacterJet, n: int, pairs: Sequence) -> tuple:
    """Order-n deformation equation in plain coefficients, checked per pair.

    g_n(gd) + g_n(gd^-1) = 2g_n(g) + 2g_n(d) + sum_{k=1}^{n-1} g_k(g) g_{n-k}(d)
    """
    if n > jet.order:
        raise ValueError(f"order {n} above jet order {jet.order}")
    residuals = []
    for g, d in pairs:
        res = (
            jet.g(n, g * d)
            + jet.g(n, g * d.inverse())
            - 2 * jet.g(n, g)
            - 2 * jet.g(n, d)
            - sum(jet.g(k, g) * jet.g(n - k, d) for k in range(1, n))
        )
        residuals.append(res)
    return all(r == 0 for r in residuals), residuals


def extract_bilinear(jet: CharacterJet, rank: int | None = None) -> list:
    """Symmetric matrix <a_i, a_j> = g_1(a_i a_j) - g_1(a_i) - g_1(a_j)."""
    n = jet.rank if rank is None else rank
    gens = [Word.generator(i + 1) for i in range(n)]
    mat = [
        [
            jet.g(1, gens[i] * gens[j]) - jet.g(1, gens[i]) - jet.g(1, gens[j])
            for j in range(n)
        ]
        for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            if mat[i][j] != mat[j][i]:
                raise JetConsistencyError("first-order pairing is not symmetric")
    return mat


@dataclass
class ObstructionReport:
    order2_extendable: bool
    order3_extendable: bool
    rank: int
    ambient: str  # "free" | "general"
    note: str


def obstruction_report(f1, ambient: str = "free") -> ObstructionReport:
    """Obstruction data of a first-order tangent vector f1 = (q, phi).

    Extension to order 2 forces the 3-form part to vanish; extension to
    order 3 additionally forces rank(q) <= 2.  Over a free ambient these
    necessary conditions are also sufficient (the parabolic deformation
    realizes any rank<=2 form); over a general ambient they are necessary.
    """
    q, phi = f1
    rank = q.rank()
    order2 = phi.is_zero
    order3 = order2 and rank <= 2
    note = (
        "conditions are necessary and sufficient over a free ambient"
        if ambient == "free"
        else "conditions are necessary; sufficiency is not decided for general ambients"
    )
    return ObstructionReport(order2, order3, rank, ambient, note)


# ---------------------------------------------------------------------------
# Factorization of a rank<=2 form and the parabolic deformation.


def _orthogonal_split(matrix):
    """Write the form as sum of d_k * (linear form)^2 by Gram-Schmidt splitting."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    splits = []
    while any(any(x != 0 for x in row) for row in m):
        u = None
        for i in range(n):
            if m[i][i] != 0:
                u = [Fraction(int(i == k)) for k in range(n)]
                break
        if u is None:
            found = next(
                (i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0
            )
            u = [Fraction(int(k in found)) for k in range(n)]
        a = sum(u[i] * m[i][j] * u[j] for i in range(n) for j in range(n))
        form = [sum(u[i] * m[i][k] for i in range(n)) / a for k in range(n)]
        splits.append((a, form))
        m = [
            [m[i][j] - a * form[i] * form[j] for j in range(n)] for i in range(n)
        ]
        if len(splits) > n:
            raise AssertionError("splitting failed to terminate")
    return splits


@dataclass
class FactoredForm:
    l1: list
    l2: list
    mode: str  # "exact" | "floating"


def factor_quadratic_form(q: QuadraticForm) -> FactoredForm:
    """Two linear forms with l1 * l2 = q, exact over Q(i) whenever possible.

    The form is split into d1 L1^2 + d2 L2^2 by symmetric elimination (with
    the usual e_i + e_j pivot when the diagonal vanishes); the two-square
    case factors exactly over the Gaussian rationals when -d2/d1 or its
    negative is a rational square, and falls back to floating complex
    coefficients otherwise.
    """
    if q.rank() > 2:
        raise ValueError("form has rank > 2 and is not a product of two linear forms")
    n = q.dim
    splits = _orthogonal_split(q.matrix)
    if not splits:
        return FactoredForm([0] * n, [0] * n, "exact")
    if len(splits) == 1:
        d, form = splits[0]
        return FactoredForm([d * x for x in form], list(form), "exact")
    (d1, f1), (d2, f2) = splits
    s = -d2 / d1
    root = rational_sqrt(s)
    if root is not None:
        l1 = [d1 * (a - root * b) for a, b in zip(f1, f2)]
        l2 = [a + root * b for a, b in zip(f1, f2)]
        return FactoredForm(l1, l2, "exact")
    root = rational_sqrt(-s)
    if root is not None:
        it = GaussianRational(0, root)
        l1 = [d1 * (a + it * b) for a, b in zip(f1, f2)]
        l2 = [a - it * b for a, b in zip(f1, f2)]
        return FactoredForm(l1, l2, "exact")
    sigma = complex(s) ** 0.5
    l1 = [complex(d1) * (complex(a) - sigma * complex(b)) for a, b in zip(f1, f2)]
    l2 = [complex(a) + sigma * complex(b) for a, b in zip(f1, f2)]
    return FactoredForm(l1, l2, "floating")


def build_parabolic_deformation(l1: Sequence, l2: Sequence, order: int) -> list:
    """Generator images (1, l1(a_i); 0, 1) * (1, 0; t l2(a_i), 1).

    The product has determinant exactly 1 and trace 2 + t l1(a_i) l2(a_i);
    on arbitrary words the trace is 2 + t * (l1 l2)(abelianization) + O(t^2).
    """
    if len(l1) != len(l2):
        raise ValueError("linear forms must have equal length")
    if order < 1:
        raise ValueError("order must be >= 1")
    prec = order + 1
    mats = []
    for u, v in zip(l1, l2):
        mats.append(
            Mat2(
                TruncatedSeries({0: 1, 1: u * v}, prec),
                TruncatedSeries({0: u}, prec),
                TruncatedSeries({1: v}, prec),
                TruncatedSeries({0: 1}, prec),
            )
        )
    return mats


# ---------------------------------------------------------------------------
# Exact 2x2 matrix identities.


def check_matrix_identities(kind: str, a: Mat2, b: Mat2) -> tuple:
    """TRACE_ID, GRAM or IRRED check on a pair of exact matrices."""
    if kind == "TRACE_ID":
        if a.det() != 1 or b.det() != 1:
            raise ValueError("trace identity needs unimodular matrices")
        residual = a.trace() * b.trace() - (a * b).trace() - (a * b.inverse()).trace()
        return residual == 0, residual
    if kind == "GRAM":
        if a.det() != 1 or b.det() != 1:
            raise ValueError("Gram identity needs unimodular matrices")
        mats = [Mat2.identity(), a, b, a * b]
        gram = [[(mats[i] * mats[j]).trace() for j in range(4)] for i in range(4)]
        value = linalg.det(gram)
        comm_trace = (a * b * a.inverse() * b.inverse()).trace()
        return value == -((comm_trace - 2) ** 2), value
    if kind == "IRRED":
        comm_trace = (a * b * a.inverse() * b.inverse()).trace()
        return comm_trace != 2, comm_trace
    raise ValueError(f"unknown identity kind {kind!r}")


# ---------------------------------------------------------------------------
# The two-generator lifting system.


@dataclass
class TraceTriple:
    """Traces (x, y, z) of (A, B, AB) as truncated series."""

    x: TruncatedSeries
    y: TruncatedSeries
    z: TruncatedSeries

    def delta(self) -> TruncatedSeries:
        """x^2 + y^2 + z^2 - xyz - 4; vanishing means a reducible character."""
        return (
            self.x * self.x
            + self.y * self.y
            + self.z * self.z
            - self.x * self.y * self.z
            - 4
        )


def _extend(s: TruncatedSeries, prec: int) -> TruncatedSeries:
    # zero-extension: pick the polynomial representative of the jet
    return TruncatedSeries(dict(s.coeffs), prec)


def _imaginary_unit(exact: bool):
    return GaussianRational(0, 1) if exact else 1j


def solve_trace_system(
    x: TruncatedSeries, y: TruncatedSeries, z: TruncatedSeries, order: int, tol=None
):
    """Solve a + d = y, b - c + d x = z, ad - bc = 1 over Laurent series.

    Eliminating d and c and completing the square in a leaves
    a'^2 + (1 - x^2/4) b'^2 = Delta / (4 - x^2); the solution branches on
    the square classes (valuation parity): even right side takes a' to be
    its square root; both classes odd divides them; odd right side with
    even coefficient splits into conjugate linear factors over Q(i).  An
    identically +-2 trace x makes the equation linear in b.  All three
    equations are verified to the requested order before returning.
    """
    exact = x.is_exact and y.is_exact and z.is_exact
    t = _tolerance(exact, tol)
    work = 8 * (order + 1)
    x, y, z = (_extend(s, work) for s in (x, y, z))
    delta = TraceTriple(x, y, z).delta()
    if _is_zero(delta, order, t):
        raise DegenerateSystemError(
            "x^2+y^2+z^2-xyz-4 vanishes to the requested order; use the reducible branch"
        )
    imag = _imaginary_unit(exact)
    half = Fraction(1, 2) if exact else 0.5
    if _is_zero(x - 2, order, t) or _is_zero(x + 2, order, t):
        # 1 - x^2/4 = 0: the quadratic degenerates to a linear equation in b
        denom = x * y * half - z
        b = (y * y * (half * half) - 1) / denom
        a = b * x * half + y * half
    else:
        coeff = 1 - x * x * (half * half)  # 1 - x^2/4
        shift = (x * y * half - z) / (2 * coeff)
        rhs = delta / (4 - x * x)
        v_rhs = rhs.valuation()
        v_coeff = coeff.valuation()
        if v_rhs % 2 == 0:
            a_prime = sqrt_series(rhs)
            b_prime = TruncatedSeries.zero(a_prime.prec)
        elif v_coeff % 2 == 1:
            b_prime = sqrt_series(rhs / coeff)
            a_prime = TruncatedSeries.zero(b_prime.prec)
        else:
            gamma = sqrt_series(coeff)
            a_prime = (rhs + 1) * half
            b_prime = (rhs - 1) / (2 * imag) / gamma
        b = b_prime - shift
        a = a_prime + b * x * half + y * half
    d = y - a
    c = b - z + d * x
    for res in (a + d - y, b - c + d * x - z, a * d - b * c - 1):
        if res.prec < order + 1:
            raise PrecisionError(
                f"achieved precision {res.prec} below requested order {order}"
            )
        if not _is_zero(res, order, t):
            raise AssertionError("back-substitution failed; solver bug")
    trunc = order + 1
    return tuple(s.truncate(max(trunc, s.valuation() + 1) if s.valuation() is not None else trunc) for s in (a, b, c, d))


def _pm2(s: TruncatedSeries, order: int, t) -> int | None:
    if _is_zero(s - 2, order, t):
        return 1
    if _is_zero(s + 2, order, t):
        return -1
    return None


@dataclass
class LiftResult:
    A: Mat2
    B: Mat2
    branch: str  # "irreducible" | "reducible" | "central"


def lift_two_generator_character(
    x: TruncatedSeries, y: TruncatedSeries, z: TruncatedSeries, order: int, tol=None
) -> LiftResult:
    """Matrices (A, B) over Laurent series with traces (x, y, z) to the given order.

    A nonvanishing discriminant takes the companion matrix (0, -1; 1, x)
    for A and solves the trace system for B.  A vanishing discriminant with
    x not identically +-2 uses the commuting shape (u, v; -v, u - vx) with
    (u, v) solved by Cramer (determinant 4 - x^2); identically central
    triples return the matching +-identity matrices; the remaining
    reducible shapes would need a ramified extension and are reported.
    """
    exact = x.is_exact and y.is_exact and z.is_exact
    t = _tolerance(exact, tol)
    for s in (x, y, z):
        if s.prec < order + 1:
            raise ValueError("input series precision below requested order")
    const_ok = all(
        (s.coeff(0) == 2 if exact else abs(complex(s.coeff(0)) - 2) <= (t or 0))
        for s in (x, y, z)
    )
    if not const_ok:
        raise ValueError("trivial residual character required: constant terms must be 2")
    work = 8 * (order + 1)
    xw, yw, zw = (_extend(s, work) for s in (x, y, z))
    delta = TraceTriple(xw, yw, zw).delta()
    prec = order + 1

    def companion(tr):
        return Mat2(
            TruncatedSeries.zero(prec),
            TruncatedSeries.constant(-1, prec),
            TruncatedSeries.constant(1, prec),
            tr.truncate(prec),
        )

    if not _is_zero(delta, order, t):
        a, b, c, d = solve_trace_system(x, y, z, order, tol=tol)
        return LiftResult(companion(xw), Mat2(a, b, c, d), "irreducible")

    ex = _pm2(xw, order, t)
    ey = _pm2(yw, order, t)
    if ex is not None and ey is not None:
        if _is_zero(zw - 2 * ex * ey, order, t):
            scalar = lambda v: TruncatedSeries.constant(v, prec)  # noqa: E731
            return LiftResult(
                Mat2(scalar(ex), scalar(0), scalar(0), scalar(ex)),
                Mat2(scalar(ey), scalar(0), scalar(0), scalar(ey)),
                "central",
            )
        raise UnsupportedReducibleError(
            "x and y are +-2 but z is not the matching central trace; "
            "a lift would need a ramified extension"
        )
    if ex is None:
        denom = 4 - xw * xw
        u = (yw * (2 - xw * xw) + xw * zw) / denom
        v = (2 * zw - xw * yw) / denom
        bmat = Mat2(u, v, -v, u - v * xw)
        detres = bmat.det() - 1
        if detres.prec < order + 1:
            raise PrecisionError("insufficient precision in the reducible branch")
        if not _is_zero(detres, order, t):
            raise JetConsistencyError(
                "reducible branch determinant differs from 1: input is not a character jet"
            )
        bmat = Mat2(*(e.truncate(prec) for e in (bmat.a, bmat.b, bmat.c, bmat.d)))
        return LiftResult(companion(xw), bmat, "reducible")
    raise UnsupportedReducibleError(
        "x is identically +-2 but the character is not central; "
        "a lift would need a ramified extension"
    )


def lift_residuals(result: LiftResult, triple: TraceTriple, order: int) -> dict:
    """Trace and determinant residual series of a lift, for reporting."""
    a, b = result.A, result.B
    return {
        "trace_A": (a.trace() - triple.x).truncate(order + 1),
        "trace_B": (b.trace() - triple.y).truncate(order + 1),
        "trace_AB": ((a * b).trace() - triple.z).truncate(order + 1),
        "det_A": (a.det() - 1).truncate(order + 1),
        "det_B": (b.det() - 1).truncate(order + 1),
    }


# ---------------------------------------------------------------------------
# JSON interchange for representations and trace triples.


def coeff_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, float)):
        return v
    raise ValueError(f"bad coefficient {v!r}")


def coeff_to_json(c):
    if is_exact_scalar(c):
        return format_exact(c)
    if isinstance(c, complex):
        return [c.real, c.imag]
    return c


def series_from_json(values: Sequence, order: int, start: int = 0) -> TruncatedSeries:
    coeffs = [coeff_from_json(v) for v in values]
    return TruncatedSeries({start + i: c for i, c in enumerate(coeffs)}, order + 1)


def series_to_json(s: TruncatedSeries, order: int | None = None) -> dict:
    top = s.prec - 1 if order is None else min(order, s.prec - 1)
    v = s.valuation()
    start = min(v if v is not None else 0, 0)
    return {"start": start, "coeffs": [coeff_to_json(s.coeff(e)) for e in range(start, top + 1)]}


def rep_from_json(obj: dict):
    order = int(obj["order"])
    names = list(obj["gens"])
    mats = []
    for name in names:
        rows = obj["gens"][name]
        entries = [series_from_json(rows[i][j], order) for i in range(2) for j in range(2)]
        mats.append(Mat2(*entries))
    return mats, order, names


def rep_to_json(mats: Sequence[Mat2], order: int, names: Sequence[str]) -> dict:
    out = {}
    for name, m in zip(names, mats):
        out[name] = [
            [m.a.coeff_list(order), m.b.coeff_list(order)],
            [m.c.coeff_list(order), m.d.coeff_list(order)],
        ]
        out[name] = [[[coeff_to_json(c) for c in entry] for entry in row] for row in out[name]]
    return {"order": order, "gens": out}


def triple_from_json(obj: dict):
    order = int(obj["order"])
    return (
        TraceTriple(
            series_from_json(obj["x"], order),
            series_from_json(obj["y"], order),
            series_from_json(obj["z"], order),
        ),
        order,
    )
