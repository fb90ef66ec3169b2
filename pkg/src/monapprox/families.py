"""Families of theories as finite unions of boxes.

Counting is always of distinct theories: overlapping boxes are made
disjoint before their cardinalities are added.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .boxes import (
    ANY,
    OMEGA,
    Box,
    CardCount,
    ValueSet,
    box_cardinality,
    box_difference,
    box_intersect,
    box_is_subset,
    box_member,
    box_members,
    format_valueset,
    parse_valueset,
    uncovered_vector,
)
from .errors import LiteralSyntaxError, SignatureError
from .logic import Formula, Signature, TheoryVector
from .normalform import Literal, NormalForm, to_normal_form

__all__ = [
    "CardCount",
    "OMEGA",
    "Family",
    "parse_family",
    "format_family",
    "family_member",
    "neighborhood",
    "neighborhood_count",
    "family_cardinality",
    "enumerate_members",
    "union",
    "intersection",
    "difference",
    "is_subfamily",
    "same_set",
    "nf_boxes",
]


@dataclass(frozen=True)
class Family:
    sig: Signature
    boxes: tuple = ()

    def __post_init__(self):
        boxes = tuple(b for b in self.boxes if not b.is_empty)
        for b in boxes:
            if b.sig != self.sig:
                raise SignatureError("all boxes of a family share its signature")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def of_theories(cls, sig: Signature, theories: Iterable[TheoryVector]) -> "Family":
        return cls(sig, tuple(Box.point(t) for t in theories))

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def __contains__(self, t: TheoryVector) -> bool:
        return family_member(self, t)

    def __or__(self, other: "Family") -> "Family":
        return union(self, other)

    def __and__(self, other: "Family") -> "Family":
        return intersection(self, other)

    def __sub__(self, other: "Family") -> "Family":
        return difference(self, other)

    def __str__(self):
        return format_family(self)


def _check(a, b):
    if a.sig != b.sig:
        raise SignatureError(f"signature mismatch: ({a.sig}) vs ({b.sig})")


# -- file format -------------------------------------------------------------------


def parse_family(text: str) -> Family:
    """Read the line-oriented family format (``signature``, ``box``, ``cell <pattern> = <set>``)."""
    sig: Signature | None = None
    boxes: list[dict] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "signature":
            if sig is not None:
                raise LiteralSyntaxError(f"line {lineno}: signature declared twice")
            try:
                sig = Signature(tuple(rest.split()))
            except SignatureError as exc:
                raise LiteralSyntaxError(f"line {lineno}: {exc}") from None
        elif head == "box":
            if sig is None:
                raise LiteralSyntaxError(f"line {lineno}: 'box' before 'signature'")
            boxes.append({})
        elif head == "cell":
            if not boxes:
                raise LiteralSyntaxError(f"line {lineno}: 'cell' outside a box")
            pattern, eq, value = rest.partition("=")
            if not eq:
                raise LiteralSyntaxError(f"line {lineno}: expected 'cell <pattern> = <set>'")
            try:
                cell = sig.parse_cell(pattern)
                vs = parse_valueset(value)
            except LiteralSyntaxError as exc:
                raise LiteralSyntaxError(f"line {lineno}: {exc}") from None
            if cell in boxes[-1]:
                raise LiteralSyntaxError(f"line {lineno}: cell {pattern.strip()} given twice")
            boxes[-1][cell] = vs
        else:
            raise LiteralSyntaxError(f"line {lineno}: unknown directive {head!r}")
    if sig is None:
        raise LiteralSyntaxError("missing 'signature' line")
    return Family(sig, tuple(Box.from_cells(sig, b) for b in boxes))


def format_family(f: Family) -> str:
    lines = [f"signature {f.sig}".rstrip()]
    for b in f.boxes:
        lines.append("box")
        width = max(len(f.sig.cell_label(c)) for c in f.sig.cells())
        for c, vs in enumerate(b.sets):
            lines.append(f"  cell {f.sig.cell_label(c):<{width}} = {format_valueset(vs)}")
    return "\n".join(lines) + "\n"


# -- set algebra ----------------------------------------------------------------------


def family_member(f: Family, t: TheoryVector) -> bool:
    _check(f, t)
    return any(box_member(b, t) for b in f.boxes)


def union(a: Family, b: Family) -> Family:
    _check(a, b)
    return Family(a.sig, a.boxes + b.boxes)


def intersection(a: Family, b: Family) -> Family:
    _check(a, b)
    return Family(a.sig, tuple(box_intersect(x, y) for x in a.boxes for y in b.boxes))


def _subtract(pieces: list[Box], cover: Iterable[Box]) -> list[Box]:
    for c in cover:
        if not pieces:
            break
        nxt: list[Box] = []
        for p in pieces:
            nxt.extend(box_difference(p, c))
        pieces = nxt
    return pieces


def difference(a: Family, b: Family) -> Family:
    _check(a, b)
    out: list[Box] = []
    for box in a.boxes:
        out.extend(_subtract([box], b.boxes))
    return Family(a.sig, tuple(out))


def disjoint_boxes(f: Family) -> list[Box]:
    """The same set as ``f``, as pairwise disjoint boxes."""
    out: list[Box] = []
    for b in f.boxes:
        out.extend(_subtract([b], list(out)))
    return out


def uncovered(a: Family, b: Family) -> TheoryVector | None:
    """A member of ``a`` outside ``b``, or None when ``a ⊆ b``."""
    _check(a, b)
    for box in a.boxes:
        if any(box_is_subset(box, c) for c in b.boxes):
            continue
        t = uncovered_vector(box, list(b.boxes))
        if t is not None:
            return t
    return None


def is_subfamily(a: Family, b: Family) -> bool:
    return uncovered(a, b) is None


def same_set(a: Family, b: Family) -> bool:
    return is_subfamily(a, b) and is_subfamily(b, a)


def family_cardinality(f: Family) -> CardCount:
    total = CardCount(0)
    for b in disjoint_boxes(f):
        total = total + box_cardinality(b)
        if total.is_infinite:
            return OMEGA
    return total


def enumerate_members(f: Family, bound: int) -> list[TheoryVector]:
    """Distinct members whose finite cells are ``<= bound``, sorted (``inf`` after every number)."""
    seen = set()
    for b in f.boxes:
        for t in box_members(b, bound):
            seen.add(t)
    return sorted(seen, key=lambda t: t.cards)


# -- neighbourhoods -----------------------------------------------------------------


def _literal_boxes(lit: Literal, sig: Signature) -> list[tuple]:
    """A literal as a union of per-cell value-set tuples."""
    cells, n = lit.atom.cells, lit.atom.threshold
    out = []
    if lit.positive:
        # sum over cells >= n: some split of n among the cells is dominated
        for split in _compositions(n, len(cells)):
            sets = [ANY] * sig.ncells
            for c, k in zip(cells, split):
                sets[c] = ValueSet.ray(k, inf=True)
            out.append(tuple(sets))
    else:
        for values in product(range(n), repeat=len(cells)):
            if sum(values) < n:
                sets = [ANY] * sig.ncells
                for c, k in zip(cells, values):
                    sets[c] = ValueSet.finite([k])
                out.append(tuple(sets))
    return out


def _compositions(n: int, parts: int):
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _compositions(n - k, parts - 1):
            yield (k,) + rest


def nf_boxes(nf: NormalForm) -> list[Box]:
    """The set of theory vectors satisfying a normal form, as boxes."""
    sig = nf.sig
    out = []
    for clause in nf.clauses:
        current = [tuple([ANY] * sig.ncells)]
        for lit in clause:
            options = _literal_boxes(lit, sig)
            current = [
                tuple(x & y for x, y in zip(a, b)) for a in current for b in options
            ]
            current = [s for s in current if not any(v.is_empty for v in s)]
        out.extend(Box(sig, s) for s in current)
    return out


def neighborhood(f: Family, s: Formula, budget: int | None = None) -> Family:
    """The members of ``f`` containing ``s``."""
    nf = to_normal_form(s, f.sig, budget)
    return intersection(f, Family(f.sig, tuple(nf_boxes(nf))))


def neighborhood_count(f: Family, s: Formula, budget: int | None = None) -> CardCount:
    return family_cardinality(neighborhood(f, s, budget))


def all_theories(sig: Signature) -> Family:
    return Family(sig, (Box(sig, (ANY,) * sig.ncells),))


def finite_model_theories(sig: Signature) -> Family:
    from .boxes import NAT

    return Family(sig, (Box(sig, (NAT,) * sig.ncells),))
