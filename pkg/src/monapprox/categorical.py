"""Approximating subfamilies, e-categorical and e-minimal families,
partitions into e-categorical parts, and spectrum lower-bound witnesses."""

from __future__ import annotations

from itertools import product

from .boxes import ANY, Box, ValueSet
from .closure import (
    accumulation_count,
    accumulation_points,
    basic_box,
    family_bound,
    is_e_closed,
)
from .errors import FiniteFamilyError, NotEClosedError, PreconditionError
from .families import (
    Family,
    difference,
    enumerate_members,
    family_cardinality,
    intersection,
)
from .logic import INF, Formula, TheoryVector
from .normalform import at_least_sentence, basic_sentence, exactly_sentence

__all__ = [
    "TIE_BREAKS",
    "build_accumulation_point",
    "approximating_subfamily",
    "is_e_categorical",
    "is_e_minimal",
    "e_minimal_bounded",
    "partition_e_categorical",
    "separating_level",
    "spectrum_witnesses",
]

TIE_BREAKS = ("prefer-positive", "prefer-negative")


def _restrict(f: Family, cell: int, vs: ValueSet) -> Family:
    sets = [ANY] * f.sig.ncells
    sets[cell] = vs
    return intersection(f, Family(f.sig, (Box(f.sig, tuple(sets)),)))


def build_accumulation_point(f: Family, tie_break: str = "prefer-positive") -> TheoryVector:
    """Decide ``#(c) >= n`` for each cell ``c`` and increasing ``n``, always keeping an infinite side.

    Once a cell passes every threshold up to the family bound it is set to
    infinity; the bound exceeds the stabilization level of the result, so the
    surviving infinite subfamily sits inside one of its basic neighbourhoods.
    """
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
    if not family_cardinality(f).is_infinite:
        raise FiniteFamilyError("a finite family has no accumulation point")
    top = family_bound(f)
    current = f
    values = []
    for cell in f.sig.cells():
        value = INF
        for n in range(1, top + 1):
            pos = _restrict(current, cell, ValueSet.ray(n, inf=True))
            neg = _restrict(current, cell, ValueSet.finite([n - 1]))
            pos_inf = family_cardinality(pos).is_infinite
            neg_inf = family_cardinality(neg).is_infinite
            if pos_inf and (not neg_inf or tie_break == "prefer-positive"):
                current = pos
            else:
                current, value = neg, n - 1
                break
        values.append(value)
    return TheoryVector(f.sig, tuple(values))


def approximating_subfamily(
    f: Family, tie_break: str = "prefer-positive"
) -> tuple[Family, TheoryVector] | None:
    """A subfamily approximating some theory, or None when ``f`` is finite."""
    if not family_cardinality(f).is_infinite:
        return None
    t = build_accumulation_point(f, tie_break)
    return difference(f, Family.of_theories(f.sig, [t])), t


def is_e_categorical(f: Family) -> bool:
    """Exactly one accumulation point (whether or not it belongs to ``f``)."""
    count = accumulation_count(f)
    return not count.is_infinite and count.value == 1


def is_e_minimal(f: Family) -> bool:
    # finite families are excluded by convention
    return family_cardinality(f).is_infinite and is_e_categorical(f)


def _infinite_atoms(f: Family, n: int, stop: int = 2) -> list[tuple]:
    """Level-``n`` types (``n`` meaning ``>= n``) with infinitely many members of ``f``."""
    found: list[tuple] = []
    for b in f.boxes:
        options = []
        for vs in b.sets:
            opts = [(v, False) for v in vs.iter_finite(n - 1)]
            tail = vs & ValueSet.ray(n, inf=True)
            if not tail.is_empty:
                opts.append((n, tail.finite_part_infinite))
            options.append(opts)
        for combo in product(*options):
            if not any(big for _, big in combo):
                continue
            atom = tuple(v for v, _ in combo)
            if atom not in found:
                found.append(atom)
                if len(found) >= stop:
                    return found
    return found


def e_minimal_bounded(f: Family) -> tuple[bool, Formula | None]:
    """Check that every basic sentence splits ``f`` into a finite and a cofinite part.

    Returns the verdict and, when negative, a sentence with infinitely many
    members of ``f`` on both sides.
    """
    if not family_cardinality(f).is_infinite:
        return False, None
    top = family_bound(f)
    n = top + 1
    atoms = _infinite_atoms(f, n)
    if len(atoms) < 2:
        return True, None
    for cell in f.sig.cells():
        for k in range(1, n + 1):
            pos = _restrict(f, cell, ValueSet.ray(k, inf=True))
            neg = _restrict(f, cell, ValueSet.interval(0, k - 1))
            if family_cardinality(pos).is_infinite and family_cardinality(neg).is_infinite:
                if k == 1:
                    return False, exactly_sentence(f.sig, cell, 0)
                return False, at_least_sentence(f.sig, cell, k)
    rep = TheoryVector(f.sig, atoms[0])
    return False, basic_sentence(rep, n)


def separating_level(points: list[TheoryVector]) -> int:
    """A level at which the basic sentences of distinct ``points`` are pairwise inconsistent."""
    finite = [v for t in points for v in t.cards if v != INF]
    return max(finite, default=0) + 1


def _points_of(f: Family, limit: int | None = None) -> list[TheoryVector]:
    bound = family_bound(f)
    while True:
        members = enumerate_members(f, bound)
        if limit is not None and len(members) >= limit:
            return members[:limit]
        count = family_cardinality(f)
        if not count.is_infinite and len(members) == count.value:
            return members
        bound *= 2


def partition_e_categorical(f: Family) -> list[Family]:
    """Split an E-closed family with finitely many accumulation points into e-categorical parts.

    Part ``i`` is the neighbourhood of the ``i``-th accumulation point at a
    separating level; members outside all of them join the first part.
    """
    if not is_e_closed(f):
        raise NotEClosedError("the family is not E-closed")
    limits = accumulation_points(f)
    count = family_cardinality(limits)
    if count.is_infinite:
        raise PreconditionError("the family has infinitely many accumulation points")
    if count.value == 0:
        raise PreconditionError("the family has no accumulation points")
    points = _points_of(limits)
    n = separating_level(points)
    parts = [
        intersection(f, Family(f.sig, (basic_box(t, n),))) for t in points[1:]
    ]
    rest = f
    for p in parts:
        rest = difference(rest, p)
    return [rest] + parts


def spectrum_witnesses(f: Family, k: int) -> list[Formula] | None:
    """``k`` pairwise inconsistent sentences each holding in infinitely many members of ``f``."""
    if k < 1:
        raise ValueError("k must be positive")
    limits = accumulation_points(f)
    points = _points_of(limits, k)
    if len(points) < k:
        return None
    n = separating_level(points)
    return [basic_sentence(t, n) for t in points]
