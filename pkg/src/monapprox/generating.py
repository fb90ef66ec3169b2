"""Isolated points, generating sets and marker expansions."""

from __future__ import annotations

from .boxes import box_cardinality
from .closure import (
    accumulation_points,
    closure,
    is_e_closed,
    neighbourhood_size,
    stabilization_bound,
)
from .errors import NotAMemberError, NotEClosedError, NotSubfamilyError, PreconditionError
from .families import Family, difference, family_member, same_set, uncovered
from .logic import Formula, Signature, TheoryVector
from .normalform import basic_sentence

__all__ = [
    "isolated_points",
    "is_isolated",
    "is_generating",
    "least_generating_set",
    "is_relatively_finitely_axiomatizable",
    "t_complete_sentence",
    "expand_with_markers",
]


def isolated_points(f: Family) -> Family:
    """Members of ``f`` that are not accumulation points of ``f``.

    A member with a finite basic neighbourhood at the stabilization level is
    alone in it, so "not a limit" and "isolated by a sentence" coincide.
    """
    return difference(f, accumulation_points(f))


def is_isolated(f: Family, t: TheoryVector) -> bool:
    if not family_member(f, t):
        raise NotAMemberError(f"{t} is not a member of the family")
    return neighbourhood_size(f, t).value == 1


def is_generating(sub: Family, whole: Family) -> bool:
    """Is ``whole`` the E-closure of ``sub``?"""
    witness = uncovered(sub, whole)
    if witness is not None:
        raise NotSubfamilyError(f"{witness} is in the candidate but not in the family")
    if not is_e_closed(whole):
        raise NotEClosedError("the family is not E-closed")
    return same_set(closure(sub), whole)


def least_generating_set(f: Family) -> Family | None:
    if not is_e_closed(f):
        raise NotEClosedError("the family is not E-closed")
    candidate = isolated_points(f)
    return candidate if is_generating(candidate, f) else None


def t_complete_sentence(t: TheoryVector, f: Family) -> Formula | None:
    """A sentence true in ``t`` and in no other member of ``f``, if there is one."""
    if not is_isolated(f, t):
        return None
    return basic_sentence(t, stabilization_bound(f, t))


def is_relatively_finitely_axiomatizable(
    t: TheoryVector, f: Family
) -> tuple[bool, Formula | None]:
    s = t_complete_sentence(t, f)
    return s is not None, s


def _marker_names(sig: Signature, m: int) -> list[str]:
    prefix = "M"
    while any(f"{prefix}{i}" in sig.symbols for i in range(1, m + 1)):
        prefix += "M"
    return [f"{prefix}{i}" for i in range(1, m + 1)]


def expand_with_markers(f: Family) -> tuple[Signature, Family]:
    """Add one predicate per member, complete for it and empty for the others."""
    theories: list[TheoryVector] = []
    for b in f.boxes:
        count = box_cardinality(b)
        if count.is_infinite or count.value != 1:
            raise PreconditionError(f"box {b} does not denote exactly one theory")
        t = b.sample()
        if t not in theories:
            theories.append(t)
    k = len(f.sig.symbols)
    markers = _marker_names(f.sig, len(theories))
    sig = f.sig.extend(*markers)
    out = []
    for i, t in enumerate(theories):
        cards = [0] * sig.ncells
        for cell, v in enumerate(t.cards):
            cards[cell | (1 << (k + i))] = v
        out.append(TheoryVector(sig, tuple(cards)))
    return sig, Family.of_theories(sig, out)
