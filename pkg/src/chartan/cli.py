"""Command line front end: presentation analysis, identity fuzzing, deformations.

Exit codes: 0 success, 2 input error, 3 internal cross-check failure,
4 mathematical degeneracy.  Exact rational values are emitted as "p/q"
strings in JSON so nothing is silently rounded; reruns with the same seed
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__, jets, sampling
from .homology import compute_h1, e_space_basis, smoothness_verdict
from .parallelogram import (
    ParallelogramFunction,
    QuadraticForm,
    counting_f3,
    descent_solve,
    epsilon_eval,
    qphi_from_json,
    trace_central_function,
    verify_identity,
)
from .homology import Lambda3Form
from .pseudochar import (
    SquareMatrix,
    falling_factorial_coeffs,
    frobenius_sum,
    linearized_tangent_sum,
    signed_cycle_polynomial,
    trace_pseudocharacter,
)
from .scalars import GaussianRational, format_exact, norm2
from .words import ParseError, Presentation, Word, parse_word

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CROSSCHECK = 3
EXIT_DEGENERATE = 4


def _jsonable(obj):
    if isinstance(obj, (Fraction, GaussianRational)):
        return format_exact(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(obj):
    print(json.dumps(_jsonable(obj), sort_keys=True, indent=2))


def _env_tolerance():
    raw = os.environ.get("CHARTAN_TOL")
    return float(raw) if raw else None


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def parse_witness(text: str) -> list:
    """Witness file: a `f2gens: x y` line then one `im: <WORD>` line per generator."""
    names = None
    images = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("f2gens:"):
            names = tuple(line[len("f2gens:"):].split())
            if len(names) != 2:
                raise ParseError(f"line {lineno}: witness target needs two generators")
        elif line.startswith("im:"):
            if names is None:
                raise ParseError(f"line {lineno}: im before f2gens")
            images.append(parse_word(line[len("im:"):], names))
        else:
            raise ParseError(f"line {lineno}: expected 'f2gens:' or 'im:'")
    if names is None:
        raise ParseError("missing f2gens line")
    return images


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> int:
    presentation = Presentation.from_text(_read(args.path))
    witness = parse_witness(_read(args.witness)) if args.witness else None
    h = compute_h1(presentation)
    dim_e, _basis = e_space_basis(h)
    solution = descent_solve(presentation)
    r = h.h1_rank
    dim_q = r * (r + 1) // 2
    if solution.dimension != dim_q + dim_e:
        print(
            f"cross-check failed: descent dimension {solution.dimension} != "
            f"dim_Q + dim_E = {dim_q} + {dim_e}",
            file=sys.stderr,
        )
        return EXIT_CROSSCHECK
    verdict = smoothness_verdict(presentation, witness)
    names = presentation.generator_names
    from .words import format_word

    report = {
        "presentation": {
            "generators": list(names),
            "relators": [format_word(w, names) for w in presentation.relators],
        },
        "h1": {"rank": r, "torsion": list(h.torsion)},
        "dim_Q": dim_q,
        "dim_E": dim_e,
        "dim_P": dim_q + dim_e,
        "omega_dim": dim_e,
        "descent_dimension": solution.dimension,
        "h2_generator_upper_bound": len(h.trivial_abelianization_relators),
        "reduced_relators": {
            "ell": h.ell,
            "trivial_abelianization": [
                format_word(w, names) for w in h.trivial_abelianization_relators
            ],
        },
        "smoothness": {
            "verdict": verdict.verdict,
            "reason": verdict.reason,
            "n": verdict.n,
        },
        "seed": None,
        "version": __version__,
    }
    if args.json:
        _emit(report)
    else:
        print(f"generators: {' '.join(names)}  relators: {len(presentation.relators)}")
        print(f"H1 rank {r}, torsion {list(h.torsion)}")
        print(f"dim_Q = {dim_q}, dim_E = {dim_e}, dim_P = {dim_q + dim_e}")
        print(f"descent cross-check: {solution.dimension} == {dim_q + dim_e}: OK")
        print(f"H2 generator upper bound: {report['h2_generator_upper_bound']}")
        print(f"smoothness: {verdict.verdict} ({verdict.reason})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# check: seeded fuzz suites


def _residual_update(worst, value):
    return value if norm2(value) > norm2(worst) else worst


def _suite_identities(name, identity, n_words, args):
    rank = args.rank
    homology = compute_h1(Presentation.free(tuple(f"x{i+1}" for i in range(rank))))
    worst = 0
    failures = 0
    for trial in range(args.iters):
        rng = random.Random(sampling.derived_seed(args.seed, trial))
        f = sampling.random_parallelogram_function(rng, rank, homology)
        words = [
            sampling.random_reduced_word(rng, rank, rng.randint(0, args.length))
            for _ in range(n_words)
        ]
        if identity == "elementary":
            check = verify_identity(identity, f, words, power=rng.randint(-3, 3))
        else:
            check = verify_identity(identity, f, words)
        worst = _residual_update(worst, check.residual)
        failures += 0 if check.ok else 1
    return {"trials": args.iters, "failures": failures, "max_residual": worst}


def _suite_counting(args):
    phi = Lambda3Form(3, {(1, 2, 3): Fraction(1)})
    f = ParallelogramFunction.on_free_group(3, QuadraticForm.zeros(3), phi)
    worst = 0
    failures = 0
    for trial in range(args.iters):
        rng = random.Random(sampling.derived_seed(args.seed, trial))
        w = sampling.random_reduced_word(rng, 3, rng.randint(0, min(args.length, 14)))
        residual = f(w) - counting_f3(w)
        worst = _residual_update(worst, residual)
        failures += 0 if residual == 0 else 1
    return {"trials": args.iters, "failures": failures, "max_residual": worst}


def _suite_central(identity, n_words, args):
    worst = 0
    failures = 0
    for trial in range(args.iters):
        rng = random.Random(sampling.derived_seed(args.seed, trial))
        f = trace_central_function(sampling.random_integer_sl2_rep(rng, 4))
        words = [
            sampling.random_reduced_word(rng, 4, rng.randint(0, min(args.length, 8)))
            for _ in range(n_words)
        ]
        check = verify_identity(identity, f, words)
        worst = _residual_update(worst, check.residual)
        failures += 0 if check.ok else 1
    return {"trials": args.iters, "failures": failures, "max_residual": worst}


def _suite_matrix(kind, args):
    worst = 0
    failures = 0
    for trial in range(args.iters):
        rng = random.Random(sampling.derived_seed(args.seed, trial))
        a = sampling.random_unimodular_mat2(rng)
        b = sampling.random_unimodular_mat2(rng)
        if kind == "GRAM":
            ok, value = jets.check_matrix_identities("GRAM", a, b)
            residual = 0 if ok else 1
        else:
            ok, residual = jets.check_matrix_identities("TRACE_ID", a, b)
        worst = _residual_update(worst, residual if not ok else 0)
        failures += 0 if ok else 1
    return {"trials": args.iters, "failures": failures, "max_residual": worst}


def _suite_frobenius(args):
    n = args.n
    worst = 0
    failures = 0
    words = [Word.generator(i + 1) for i in range(n + 1)]
    for trial in range(args.iters):
        rng = random.Random(sampling.derived_seed(args.seed, trial))
        mats = [
            SquareMatrix(sampling.random_unimodular_rows(rng, n)) for _ in range(n + 1)
        ]
        value = frobenius_sum(trace_pseudocharacter(mats), words)
        worst = _residual_update(worst, value)
        failures += 0 if value == 0 else 1
    return {"trials": args.iters, "failures": failures, "max_residual": worst}


def _suite_cycles(args):
    failures = 0
    for length in range(1, 7):
        if signed_cycle_polynomial(length) != falling_factorial_coeffs(length):
            failures += 1
    return {"trials": 6, "failures": failures, "max_residual": 0 if not failures else 1}


def _suite_tangent(args):
    worst = 0
    failures = 0
    for trial in range(args.iters):
        rng = random.Random(sampling.derived_seed(args.seed, trial))
        l1 = [sampling.random_fraction(rng) for _ in range(2)]
        l2 = [sampling.random_fraction(rng) for _ in range(2)]
        rep = jets.build_parabolic_deformation(l1, l2, 2)
        jet = jets.character_jet_from_rep(rep, 2)
        words = [
            sampling.random_reduced_word(rng, 2, rng.randint(0, 5)) for _ in range(3)
        ]
        value = linearized_tangent_sum(lambda w: jet.g(1, w), words, 2)
        worst = _residual_update(worst, value)
        failures += 0 if value == 0 else 1
    return {"trials": args.iters, "failures": failures, "max_residual": worst}


SUITES = {
    "parallelogram": lambda a: _suite_identities("parallelogram", "parallelogram", 2, a),
    "counting": _suite_counting,
    "elementary": lambda a: _suite_identities("elementary", "elementary", 2, a),
    "cubic": lambda a: _suite_identities("cubic", "cubic", 4, a),
    "alternating3": lambda a: _suite_identities("alternating3", "alternating3", 3, a),
    "commutator_shift": lambda a: _suite_identities(
        "commutator_shift", "commutator_shift", 3, a
    ),
    "quartic_pairing": lambda a: _suite_central("quartic_pairing", 4, a),
    "pairing_kernel": lambda a: _suite_central("pairing_kernel", 3, a),
    "gram": lambda a: _suite_matrix("GRAM", a),
    "trace_id": lambda a: _suite_matrix("TRACE_ID", a),
    "frobenius": _suite_frobenius,
    "cycles": _suite_cycles,
    "tangent": _suite_tangent,
}


def cmd_check(args) -> int:
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        print(f"unknown suite name(s): {', '.join(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    results = {}
    all_ok = True
    for name in names:
        result = SUITES[name](args)
        result["ok"] = result["failures"] == 0
        worst = result["max_residual"]
        if not isinstance(worst, (float, complex)):
            result["max_residual"] = format_exact(worst)
        all_ok = all_ok and result["ok"]
        results[name] = result
    payload = {"suites": results, "seed": args.seed, "ok": all_ok, "version": __version__}
    if args.json:
        _emit(payload)
    else:
        for name, result in results.items():
            status = "PASS" if result["ok"] else "FAIL"
            print(
                f"suite {name}: {status} ({result['trials']} trials, "
                f"max residual {result['max_residual']})"
            )
        print("all suites passed" if all_ok else "some suites FAILED")
    return EXIT_OK if all_ok else 1


# ---------------------------------------------------------------------------
# deform


def cmd_deform(args) -> int:
    tol = _env_tolerance()
    if args.mode == "jet":
        mats, order, gen_names = jets.rep_from_json(_load_json(args.rep))
        jet = jets.character_jet_from_rep(mats, order, tol=tol)
        rng = random.Random(1)
        pairs = [
            (
                sampling.random_reduced_word(rng, jet.rank, 4),
                sampling.random_reduced_word(rng, jet.rank, 4),
            )
            for _ in range(10)
        ]
        orders_ok = {}
        for n in range(1, order + 1):
            ok, _res = jets.verify_jet_equation(jet, n, pairs)
            orders_ok[str(n)] = ok
        _emit(
            {
                "order": order,
                "traces": {
                    name: [jets.coeff_to_json(c) for c in jet.coefficients(Word.generator(i + 1))]
                    for i, name in enumerate(gen_names)
                },
                "jet_equation": orders_ok,
                "ok": all(orders_ok.values()),
            }
        )
        return EXIT_OK if all(orders_ok.values()) else EXIT_CROSSCHECK
    if args.mode == "obstruct":
        q, phi = qphi_from_json(_load_json(args.f1))
        report = jets.obstruction_report((q, phi), ambient=args.ambient)
        _emit(
            {
                "order2": report.order2_extendable,
                "order3": report.order3_extendable,
                "rank": report.rank,
                "ambient": report.ambient,
                "note": report.note,
            }
        )
        return EXIT_OK
    if args.mode == "parabolic":
        obj = _load_json(args.q)
        q, _phi = qphi_from_json(obj)
        factored = jets.factor_quadratic_form(q)
        rep = jets.build_parabolic_deformation(factored.l1, factored.l2, args.order)
        jet = jets.character_jet_from_rep(rep, args.order, tol=tol)
        rng = random.Random(1)
        ok = True
        for _ in range(100):
            w = sampling.random_reduced_word(rng, q.dim, rng.randint(0, 8))
            from .words import abelianize

            expected = q(abelianize(w, q.dim))
            got = jet.g(1, w)
            if factored.mode == "exact":
                ok = ok and got == expected
            else:
                ok = ok and abs(complex(got) - complex(expected)) <= (tol or jets.DEFAULT_TOLERANCE)
        gen_names = [f"x{i+1}" for i in range(q.dim)]
        _emit(
            {
                "mode": factored.mode,
                "l1": [jets.coeff_to_json(c) for c in factored.l1],
                "l2": [jets.coeff_to_json(c) for c in factored.l2],
                "rep": jets.rep_to_json(rep, args.order, gen_names),
                "trace_check": "PASS" if ok else "FAIL",
            }
        )
        return EXIT_OK if ok else EXIT_CROSSCHECK
    if args.mode == "lift":
        triple, file_order = jets.triple_from_json(_load_json(args.traces))
        order = args.order if args.order is not None else file_order
        result = jets.lift_two_generator_character(
            triple.x, triple.y, triple.z, order, tol=tol
        )
        residuals = jets.lift_residuals(result, triple, min(order, triple.x.prec - 1))
        ok = all(
            s.is_zero_mod(min(order, s.prec - 1), tol or (0 if s.is_exact else jets.DEFAULT_TOLERANCE))
            for s in residuals.values()
        )
        _emit(
            {
                "branch": result.branch,
                "A": [[jets.series_to_json(e, order) for e in row] for row in result.A.entries()],
                "B": [[jets.series_to_json(e, order) for e in row] for row in result.B.entries()],
                "residuals": {k: jets.series_to_json(v) for k, v in residuals.items()},
                "ok": ok,
            }
        )
        return EXIT_OK if ok else EXIT_CROSSCHECK
    raise AssertionError(f"unhandled deform mode {args.mode}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chartan",
        description="Tangent spaces and deformations of SL2(C) character varieties at the trivial character",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="analyze a presentation file")
    p_an.add_argument("path")
    p_an.add_argument("--json", action="store_true")
    p_an.add_argument("--witness", help="file with generator images in the rank-2 free group")
    p_an.set_defaults(func=cmd_analyze)

    p_ch = sub.add_parser("check", help="run seeded identity fuzz suites")
    p_ch.add_argument("--suite", default=",".join(SUITES))
    p_ch.add_argument("--rank", type=int, default=3)
    p_ch.add_argument("--iters", type=int, default=100)
    p_ch.add_argument("--len", dest="length", type=int, default=10)
    p_ch.add_argument("--seed", type=int, default=1)
    p_ch.add_argument("--n", type=int, default=2, help="dimension for the frobenius suite")
    p_ch.add_argument("--json", action="store_true")
    p_ch.set_defaults(func=cmd_check)

    p_de = sub.add_parser("deform", help="jet, obstruction, parabolic and lifting workflows")
    de_sub = p_de.add_subparsers(dest="mode", required=True)
    de_jet = de_sub.add_parser("jet")
    de_jet.add_argument("--rep", required=True)
    de_obs = de_sub.add_parser("obstruct")
    de_obs.add_argument("--f1", required=True)
    de_obs.add_argument("--ambient", choices=("free", "general"), default="free")
    de_par = de_sub.add_parser("parabolic")
    de_par.add_argument("--q", required=True)
    de_par.add_argument("--order", type=int, default=6)
    de_lift = de_sub.add_parser("lift")
    de_lift.add_argument("--traces", required=True)
    de_lift.add_argument("--order", type=int, default=None)
    p_de.set_defaults(func=cmd_deform)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (jets.DegenerateSystemError, jets.UnsupportedReducibleError) as exc:
        print(
            json.dumps(
                {"error": type(exc).__name__, "reason": str(exc)}, sort_keys=True, indent=2
            )
        )
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
