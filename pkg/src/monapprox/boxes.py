"""Ultimately periodic value sets and boxes of theory vectors.

A :class:`ValueSet` is a subset of ``N ∪ {inf}`` whose finite part is
ultimately periodic. A :class:`Box` assigns a value set to every cell and
denotes the product of those sets, minus the all-zero vector (structures
are nonempty).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, total_ordering
from itertools import product
from typing import Iterable, Iterator

from .errors import LiteralSyntaxError, SignatureError
from .logic import INF, Signature, TheoryVector


@total_ordering
@dataclass(frozen=True)
class CardCount:
    """An exact cardinality: a natural number, or countably infinite when ``value`` is None."""

    value: int | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def _key(self):
        return math.inf if self.value is None else self.value

    def __eq__(self, other):
        if isinstance(other, CardCount):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, CardCount):
            return self._key() < other._key()
        if isinstance(other, int):
            return self._key() < other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __add__(self, other: "CardCount") -> "CardCount":
        if self.value is None or other.value is None:
            return OMEGA
        return CardCount(self.value + other.value)

    def __str__(self):
        return "omega" if self.value is None else str(self.value)

    def to_json(self):
        return "omega" if self.value is None else self.value


OMEGA = CardCount(None)


def fin(n: int) -> CardCount:
    return CardCount(n)


# -- value sets ---------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class ValueSet:
    """An ultimately periodic subset of N, plus an optional point at infinity.

    ``x`` belongs to the finite part iff ``x < start and x in explicit`` or
    ``x >= start and period > 0 and x % period in residues``. Instances made
    through :meth:`make` are canonical, so structural equality is set equality.
    """

    explicit: frozenset = frozenset()
    start: int = 0
    period: int = 0
    residues: frozenset = frozenset()
    inf: bool = False

    @classmethod
    def make(cls, explicit=(), start=0, period=0, residues=(), inf=False) -> "ValueSet":
        explicit = set(explicit)
        residues = {r % period for r in residues} if period else set()
        if residues and explicit and max(explicit) >= start:
            top = max(explicit) + 1
            explicit |= {x for x in range(start, top) if x % period in residues}
            start = top
        if not residues:
            period = 0
        if period == 0:
            start = max(explicit) + 1 if explicit else 0
            return cls(frozenset(explicit), start, 0, frozenset(), bool(inf))
        for d in _divisors(period):
            small = {r % d for r in residues}
            if all((r in residues) == (r % d in small) for r in range(period)):
                period, residues = d, small
                break
        while start > 0:
            x = start - 1
            if (x in explicit) != (x % period in residues):
                break
            explicit.discard(x)
            start -= 1
        return cls(frozenset(explicit), start, period, frozenset(residues), bool(inf))

    @classmethod
    def finite(cls, values: Iterable, inf: bool = False) -> "ValueSet":
        values = list(values)
        inf = inf or any(v == INF for v in values)
        return cls.make({int(v) for v in values if v != INF}, inf=inf)

    @classmethod
    def ray(cls, lo: int, inf: bool = False) -> "ValueSet":
        return cls.make((), lo, 1, {0}, inf)

    @classmethod
    def progression(cls, lo: int, step: int, hi: int | None = None, inf: bool = False) -> "ValueSet":
        if step < 1:
            raise ValueError("step must be positive")
        if hi is not None:
            return cls.make(range(lo, hi + 1, step), inf=inf)
        return cls.make((), lo, step, {lo % step}, inf)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "ValueSet":
        return cls.make(range(lo, hi + 1))

    # -- queries

    def __contains__(self, x) -> bool:
        if x == INF:
            return self.inf
        if x < self.start:
            return x in self.explicit
        return self.period > 0 and x % self.period in self.residues

    @property
    def finite_part_infinite(self) -> bool:
        return self.period > 0

    @property
    def is_empty(self) -> bool:
        return not self.explicit and self.period == 0 and not self.inf

    def finite_count(self) -> CardCount:
        return OMEGA if self.period else CardCount(len(self.explicit))

    def count(self) -> CardCount:
        """Number of values including the point at infinity."""
        if self.period:
            return OMEGA
        return CardCount(len(self.explicit) + self.inf)

    def iter_finite(self, bound: int | None = None) -> Iterator[int]:
        """Finite elements in increasing order, up to ``bound`` when the set is infinite."""
        for x in sorted(self.explicit):
            if bound is not None and x > bound:
                return
            yield x
        if self.period:
            x = self.start
            while bound is None or x <= bound:
                if x % self.period in self.residues:
                    yield x
                x += 1

    def values(self, bound: int) -> list:
        out: list = list(self.iter_finite(bound))
        if self.inf:
            out.append(INF)
        return out

    def min_finite(self) -> int | None:
        return next(self.iter_finite(), None)

    def is_subset(self, other: "ValueSet") -> bool:
        return (self - other).is_empty

    @property
    def only_zero(self) -> bool:
        return self == ZERO

    # -- algebra

    def _aligned(self, other: "ValueSet"):
        d = math.lcm(self.period or 1, other.period or 1)
        start = max(self.start, other.start)
        return d, start, self._expand(d, start), other._expand(d, start)

    def _expand(self, d: int, start: int):
        explicit = {x for x in range(start) if x in self}
        residues = {r for r in range(d) if self.period and r % self.period in self.residues}
        return explicit, residues

    def __and__(self, other: "ValueSet") -> "ValueSet":
        d, start, (e1, r1), (e2, r2) = self._aligned(other)
        return ValueSet.make(e1 & e2, start, d, r1 & r2, self.inf and other.inf)

    def __or__(self, other: "ValueSet") -> "ValueSet":
        d, start, (e1, r1), (e2, r2) = self._aligned(other)
        return ValueSet.make(e1 | e2, start, d, r1 | r2, self.inf or other.inf)

    def __sub__(self, other: "ValueSet") -> "ValueSet":
        d, start, (e1, r1), (e2, r2) = self._aligned(other)
        return ValueSet.make(e1 - e2, start, d, r1 - r2, self.inf and not other.inf)

    def complement(self) -> "ValueSet":
        return ANY - self

    def closure(self) -> "ValueSet":
        """Topological closure in N ∪ {inf}: add infinity when the finite part is infinite."""
        if self.period and not self.inf:
            return ValueSet.make(self.explicit, self.start, self.period, self.residues, True)
        return self

    def finite_only(self) -> "ValueSet":
        return ValueSet.make(self.explicit, self.start, self.period, self.residues, False)

    def __str__(self):
        return format_valueset(self)


EMPTY = ValueSet.make()
ZERO = ValueSet.finite([0])
NAT = ValueSet.ray(0)
ANY = ValueSet.ray(0, inf=True)
INF_ONLY = ValueSet.make(inf=True)


def format_valueset(vs: ValueSet) -> str:
    if vs == ANY:
        return "any"
    parts: list[str] = []
    run: list[int] = []
    singles: list[int] = []

    def flush():
        if len(run) >= 3:
            parts.append(f"{run[0]}..{run[-1]}")
        else:
            singles.extend(run)
        run.clear()

    for x in sorted(vs.explicit):
        if run and x != run[-1] + 1:
            flush()
        run.append(x)
    flush()
    if singles:
        parts.insert(0, "{" + ",".join(map(str, singles)) + "}")
    if vs.period == 1:
        parts.append(f"{vs.start}..")
    elif vs.period:
        firsts = sorted(vs.start + (r - vs.start) % vs.period for r in vs.residues)
        parts.extend(f"{x}.. step {vs.period}" for x in firsts)
    if vs.inf:
        parts.append("inf")
    return " | ".join(parts) if parts else "{}"


_RANGE_RE = re.compile(r"(\d+)\s*\.\.\s*(\d+)?\s*(?:step\s+(\d+))?\Z")


def parse_valueset(text: str) -> ValueSet:
    """Parse ``{1,3,5}``, ``2..``, ``0.. step 2``, ``1..5``, ``inf``, ``any`` joined by ``|``."""
    result = EMPTY
    source = text
    text = text.strip()
    if not text:
        raise LiteralSyntaxError("empty value set literal")
    for term in _split_top(text):
        term = term.strip()
        if term == "any":
            result = result | ANY
        elif term == "inf":
            result = result | INF_ONLY
        elif term.startswith("{"):
            if not term.endswith("}"):
                raise LiteralSyntaxError(f"unclosed brace in {source!r}")
            body = term[1:-1].strip()
            for item in filter(None, (i.strip() for i in body.split(","))):
                result = result | _parse_simple(item, source)
        else:
            result = result | _parse_simple(term, source)
    return result


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "|" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_simple(term: str, source: str) -> ValueSet:
    if term == "inf":
        return INF_ONLY
    if term.isdigit():
        return ValueSet.finite([int(term)])
    m = _RANGE_RE.match(term)
    if not m:
        if re.fullmatch(r"[A-Za-z_]\w*", term):
            raise LiteralSyntaxError(
                f"parameter {term!r}: parameters tied across cells are not supported"
            )
        raise LiteralSyntaxError(f"cannot read value set term {term!r} in {source!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else None
    step = int(m.group(3)) if m.group(3) else 1
    if step < 1:
        raise LiteralSyntaxError(f"step must be positive in {source!r}")
    if hi is not None and hi < lo:
        raise LiteralSyntaxError(f"empty range {term!r} in {source!r}")
    return ValueSet.progression(lo, step, hi)


# -- boxes ---------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Product of one value set per cell, without the all-zero vector."""

    sig: Signature
    sets: tuple

    def __post_init__(self):
        sets = tuple(self.sets)
        object.__setattr__(self, "sets", sets)
        if len(sets) != self.sig.ncells:
            raise ValueError(f"expected {self.sig.ncells} value sets, got {len(sets)}")

    @classmethod
    def from_cells(cls, sig: Signature, values: dict, default: ValueSet = ZERO) -> "Box":
        sets = [default] * sig.ncells
        for key, vs in values.items():
            cell = key if isinstance(key, int) else sig.parse_cell(key)
            sets[cell] = vs if isinstance(vs, ValueSet) else parse_valueset(str(vs))
        return cls(sig, tuple(sets))

    @classmethod
    def point(cls, t: TheoryVector) -> "Box":
        return cls(t.sig, tuple(ValueSet.finite([v]) for v in t.cards))

    @cached_property
    def is_empty(self) -> bool:
        return any(s.is_empty for s in self.sets) or all(s.only_zero for s in self.sets)

    def __contains__(self, t: TheoryVector) -> bool:
        return box_member(self, t)

    def replace(self, cell: int, vs: ValueSet) -> "Box":
        sets = list(self.sets)
        sets[cell] = vs
        return Box(self.sig, tuple(sets))

    def sample(self) -> TheoryVector | None:
        """Some member of the box, or None when it is empty."""
        if self.is_empty:
            return None
        values = [s.min_finite() if s.min_finite() is not None else INF for s in self.sets]
        if all(v == 0 for v in values):
            for c, s in enumerate(self.sets):
                nonzero = s - ZERO
                if not nonzero.is_empty:
                    m = nonzero.min_finite()
                    values[c] = INF if m is None else m
                    break
        return TheoryVector(self.sig, tuple(values))

    def __str__(self):
        return "[" + ", ".join(
            f"{self.sig.cell_label(c)}: {s}" for c, s in enumerate(self.sets)
        ) + "]"


def _check_sig(a, b):
    if a.sig != b.sig:
        raise SignatureError(f"signature mismatch: ({a.sig}) vs ({b.sig})")


def box_member(b: Box, t: TheoryVector) -> bool:
    _check_sig(b, t)
    return t.total >= 1 and all(v in s for v, s in zip(t.cards, b.sets))


def box_intersect(b1: Box, b2: Box) -> Box:
    _check_sig(b1, b2)
    return Box(b1.sig, tuple(x & y for x, y in zip(b1.sets, b2.sets)))


def box_is_subset(b1: Box, b2: Box) -> bool:
    """Exact test of ``b1 ⊆ b2`` for a single covering box."""
    if b1.is_empty:
        return True
    return not box_difference(b1, b2)


def box_difference(b: Box, c: Box) -> list[Box]:
    """``b \\ c`` as a list of pairwise disjoint nonempty boxes."""
    _check_sig(b, c)
    if b.is_empty:
        return []
    meet = [x & y for x, y in zip(b.sets, c.sets)]
    if any(m.is_empty for m in meet):
        return [b]
    pieces = []
    for i in range(len(b.sets)):
        rest = b.sets[i] - c.sets[i]
        if rest.is_empty:
            continue
        piece = Box(b.sig, tuple(meet[:i]) + (rest,) + b.sets[i + 1 :])
        if not piece.is_empty:
            pieces.append(piece)
    return pieces


def box_cardinality(b: Box) -> CardCount:
    if b.is_empty:
        return CardCount(0)
    counts = [s.count() for s in b.sets]
    if any(c.is_infinite for c in counts):
        return OMEGA
    n = math.prod(c.value for c in counts)
    if all(0 in s for s in b.sets):
        n -= 1
    return CardCount(n)


def uncovered_vector(b: Box, cover: list[Box]) -> TheoryVector | None:
    """A member of ``b`` outside every box of ``cover``, or None when ``b`` is covered."""
    pieces = [b] if not b.is_empty else []
    for c in cover:
        if not pieces:
            return None
        nxt = []
        for p in pieces:
            nxt.extend(box_difference(p, c))
        pieces = nxt
    for p in pieces:
        t = p.sample()
        if t is not None:
            return t
    return None


def boxes_subset(b: Box, cover: list[Box]) -> bool:
    """Decide ``b ⊆ ∪ cover`` exactly by recursive splitting."""
    if any(box_is_subset(b, c) for c in cover):
        return True
    return uncovered_vector(b, cover) is None


def box_members(b: Box, bound: int) -> Iterator[TheoryVector]:
    """Members whose finite cells are at most ``bound``."""
    if b.is_empty:
        return
    for cards in product(*(s.values(bound) for s in b.sets)):
        if any(cards):
            yield TheoryVector(b.sig, cards)
