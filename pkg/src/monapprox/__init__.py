"""Approximations of complete theories of finitely many unary predicates.

A theory is a vector of cell cardinalities in N ∪ {inf}; a family is a finite
union of boxes of such vectors. The package computes E-closures, accumulation
points, e-spectra, generating sets and e-categorical partitions exactly, and
ships a brute-force oracle that cross-checks every symbolic answer.
"""

from .boxes import ANY, NAT, OMEGA, Box, CardCount, ValueSet, fin, format_valueset, parse_valueset
from .categorical import (
    approximating_subfamily,
    build_accumulation_point,
    e_minimal_bounded,
    is_e_categorical,
    is_e_minimal,
    partition_e_categorical,
    spectrum_witnesses,
)
from .closure import (
    accumulation_count,
    accumulation_points,
    basic_box,
    closure,
    e_spectrum,
    is_accumulation_point,
    is_approximated_by,
    is_e_closed,
    stabilization_bound,
)
from .errors import (
    BudgetExceeded,
    FiniteFamilyError,
    LiteralSyntaxError,
    MonapproxError,
    NotAMemberError,
    NotEClosedError,
    NotSubfamilyError,
    PreconditionError,
    SentenceSyntaxError,
    SignatureError,
)
from .families import (
    Family,
    enumerate_members,
    family_cardinality,
    family_member,
    format_family,
    neighborhood,
    neighborhood_count,
    parse_family,
)
from .generating import (
    expand_with_markers,
    is_generating,
    is_relatively_finitely_axiomatizable,
    isolated_points,
    least_generating_set,
    t_complete_sentence,
)
from .logic import INF, Signature, TheoryVector, format_sentence, model_check, parse_sentence
from .normalform import basic_sentence, evaluate, holds, to_normal_form
from .theories import (
    complete_sentence,
    finite_approximation,
    format_theory,
    is_finite_model_theory,
    is_finitely_axiomatizable,
    is_pseudo_finite,
    parse_theory,
    restrict,
    restrict_and_pad,
)

__version__ = "0.1.0"
