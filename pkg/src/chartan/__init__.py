"""Exact computations around SL2(C) character varieties at the trivial character.

Tangent vectors (solutions of f(xy) + f(xy^-1) = 2f(x) + 2f(y)), their
descent to finitely presented groups, homological obstruction data, jets
and lifting to formal matrix representations, and the dimension-n
pseudo-character linearization.  Everything numeric is exact unless a
floating mode is explicitly requested.
"""

__version__ = "0.1.0"

from .homology import (
    HomologyData,
    Lambda3Form,
    SmoothnessVerdict,
    compute_h1,
    e_space_basis,
    reduce_relators,
    smith_normal_form,
    smoothness_verdict,
)
from .jets import (
    CharacterJet,
    TraceTriple,
    build_parabolic_deformation,
    character_jet_from_rep,
    check_matrix_identities,
    extract_bilinear,
    factor_quadratic_form,
    lift_two_generator_character,
    obstruction_report,
    solve_trace_system,
    verify_jet_equation,
)
from .magnus import TruncatedTensorSeries, lambda2_class, magnus_expand
from .parallelogram import (
    CentralFunction,
    ParallelogramFunction,
    QuadraticForm,
    counting_f3,
    descent_solve,
    epsilon_eval,
    eval_parallelogram,
    johnson_action,
    trace_central_function,
    verify_identity,
)
from .pseudochar import (
    PseudoCharacterEvaluator,
    frobenius_sum,
    linearized_tangent_sum,
    signed_cycle_polynomial,
)
from .scalars import GaussianRational
from .series import Mat2, TruncatedSeries, sqrt_series
from .words import (
    GroupHom,
    Permutation,
    Presentation,
    Word,
    abelianize,
    commutator,
    evaluate_hom,
    format_word,
    is_surjective_to_f2,
    parse_word,
    random_word,
)
