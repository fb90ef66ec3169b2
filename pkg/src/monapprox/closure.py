"""Accumulation points, E-closure and e-spectra of box families.

The neighbourhood of a theory ``t`` cut out by its basic sentence of level
``n`` is itself a box (:func:`basic_box`), so every topological question here
reduces to exact counting over boxes.
"""

from __future__ import annotations

from .boxes import INF_ONLY, Box, CardCount, ValueSet
from .errors import SignatureError
from .families import Family, difference, family_cardinality, family_member, intersection, is_subfamily, union
from .logic import INF, TheoryVector

__all__ = [
    "stabilization_bound",
    "basic_box",
    "is_accumulation_point",
    "accumulation_points",
    "accumulation_count",
    "closure",
    "is_e_closed",
    "is_approximated_by",
    "approximated_theory",
    "e_spectrum",
]


def family_bound(f: Family) -> int:
    """1 + the largest explicit value, start or period among the value sets of ``f``."""
    top = 0
    for b in f.boxes:
        for vs in b.sets:
            top = max(top, vs.start, vs.period, max(vs.explicit, default=0))
    return top + 1


def stabilization_bound(f: Family, t: TheoryVector) -> int:
    """A level beyond which ``|f ∩ basic_box(t, n)|`` no longer changes."""
    finite = [v for v in t.cards if v != INF]
    return max(family_bound(f), max(finite, default=0) + 1)


def basic_box(t: TheoryVector, n: int) -> Box:
    """The theories agreeing with ``t`` on its basic sentence of level ``n``."""
    if n < 1:
        raise ValueError("level must be positive")
    sets = tuple(
        ValueSet.finite([v]) if v < n else ValueSet.ray(n, inf=True) for v in t.cards
    )
    return Box(t.sig, sets)


def _check(f, t):
    if f.sig != t.sig:
        raise SignatureError(f"signature mismatch: ({f.sig}) vs ({t.sig})")


def neighbourhood_size(f: Family, t: TheoryVector, n: int | None = None) -> CardCount:
    if n is None:
        n = stabilization_bound(f, t)
    return family_cardinality(intersection(f, Family(f.sig, (basic_box(t, n),))))


def is_accumulation_point(f: Family, t: TheoryVector) -> bool:
    _check(f, t)
    return neighbourhood_size(f, t).is_infinite


def _box_limits(b: Box) -> list[Box]:
    # put infinity in one unbounded direction, close the others
    closed = [vs.closure() for vs in b.sets]
    out = []
    for c, vs in enumerate(b.sets):
        if vs.finite_part_infinite:
            sets = list(closed)
            sets[c] = INF_ONLY
            out.append(Box(b.sig, tuple(sets)))
    return out


def accumulation_points(f: Family) -> Family:
    return Family(f.sig, tuple(p for b in f.boxes for p in _box_limits(b)))


def accumulation_count(f: Family) -> CardCount:
    return family_cardinality(accumulation_points(f))


def closure(f: Family) -> Family:
    return union(f, accumulation_points(f))


def is_e_closed(f: Family) -> bool:
    return is_subfamily(accumulation_points(f), f)


def is_approximated_by(t: TheoryVector, f: Family) -> bool:
    """``t`` lies outside ``f`` and every sentence of ``t`` holds in some member of ``f``."""
    _check(f, t)
    return not family_member(f, t) and is_accumulation_point(f, t)


def new_points(f: Family) -> Family:
    return difference(accumulation_points(f), f)


def approximated_theory(f: Family) -> TheoryVector | None:
    """Some theory approximated by ``f``, or None when ``f`` is E-closed."""
    for b in new_points(f).boxes:
        t = b.sample()
        if t is not None:
            return t
    return None


def e_spectrum(f: Family) -> CardCount:
    """Number of accumulation points of ``f`` outside ``f``."""
    return family_cardinality(new_points(f))
