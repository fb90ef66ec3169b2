"""Quantifier elimination for monadic sentences into counting normal form.

Internally a sentence's meaning is a *grid*: for each cell a sorted list of
cut points splitting ``N ∪ {inf}`` into buckets, and a boolean table over the
product of buckets. Boolean connectives combine grids after refining them to
common cuts. A closed quantified subsentence of rank ``r`` becomes a grid with
cuts ``1..r`` on every cell; each bucket is decided on its representative
vector, which is sound because monadic sentences of rank ``r`` cannot tell
apart cell sizes ``>= r``.

The grid is finally coarsened and covered by maximal boxes, giving a DNF of
``#(cells) >= n`` literals.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import BudgetExceeded, SignatureError
from .logic import (
    INF,
    BinOp,
    Eq,
    Formula,
    Not,
    Pred,
    Quant,
    Signature,
    TheoryVector,
    conj,
    format_card,
    free_vars,
    predicates,
    qrank,
)

DEFAULT_BUDGET = 200_000
BUDGET_ENV = "MONAPPROX_QE_BUDGET"


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


# -- normal form -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class AtLeast:
    """At least ``threshold`` elements lie in the union of ``cells``."""

    cells: tuple  # sorted cell indices
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(sorted(set(self.cells))))
        if self.threshold < 1:
            raise ValueError("threshold must be >= 1")

    def holds(self, t: TheoryVector) -> bool:
        return sum(t.cards[c] for c in self.cells) >= self.threshold


@dataclass(frozen=True, order=True)
class Literal:
    atom: AtLeast
    positive: bool = True

    def holds(self, t: TheoryVector) -> bool:
        return self.atom.holds(t) == self.positive

    def format(self, sig: Signature) -> str:
        cells = ",".join(sig.cell_label(c, "&") for c in self.atom.cells)
        text = f"#({cells})>={self.atom.threshold}"
        return text if self.positive else "!" + text


@dataclass(frozen=True)
class NormalForm:
    """A DNF over signed :class:`AtLeast` constraints."""

    sig: Signature
    clauses: tuple  # tuple of tuples of Literal

    @property
    def is_true(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    @property
    def is_false(self) -> bool:
        return not self.clauses

    def __str__(self):
        if self.is_false:
            return "false"
        if self.is_true:
            return "true"
        return " | ".join(" & ".join(lit.format(self.sig) for lit in clause) for clause in self.clauses)

    def to_json(self):
        return [
            [
                {"cells": [self.sig.cell_label(c, "&") for c in lit.atom.cells],
                 "threshold": lit.atom.threshold,
                 "positive": lit.positive}
                for lit in clause
            ]
            for clause in self.clauses
        ]


def evaluate(nf: NormalForm, t: TheoryVector) -> bool:
    """Decide whether the theory ``t`` contains the sentence represented by ``nf``."""
    if nf.sig != t.sig:
        raise SignatureError(f"signature mismatch: ({nf.sig}) vs ({t.sig})")
    return any(all(lit.holds(t) for lit in clause) for clause in nf.clauses)


# -- grids -----------------------------------------------------------------------


@dataclass
class _Grid:
    cuts: tuple  # per cell, sorted tuple of cut points >= 1
    table: np.ndarray

    @property
    def has_dc(self) -> bool:
        # bucket (0,...,0) is exactly the all-zero vector, which no theory has
        return all(c and c[0] == 1 for c in self.cuts)


def _check_budget(size: int, budget: int):
    if size > budget:
        raise BudgetExceeded(size, budget)


def _const(ncells: int, value: bool) -> _Grid:
    return _Grid(tuple(() for _ in range(ncells)), np.full((1,) * ncells, value, dtype=bool))


def _refine(g: _Grid, cuts: tuple) -> _Grid:
    table = g.table
    for axis, (old, new) in enumerate(zip(g.cuts, cuts)):
        if old == new:
            continue
        lows = (0,) + new
        take = [bisect_right(old, lo) for lo in lows]
        table = np.take(table, take, axis=axis)
    return _Grid(cuts, table)


def _combine(a: _Grid, b: _Grid, op, budget: int) -> _Grid:
    cuts = tuple(tuple(sorted(set(x) | set(y))) for x, y in zip(a.cuts, b.cuts))
    _check_budget(int(np.prod([len(c) + 1 for c in cuts])), budget)
    ra, rb = _refine(a, cuts), _refine(b, cuts)
    return _Grid(cuts, op(ra.table, rb.table))


def _coarsen(g: _Grid) -> _Grid:
    """Drop cut points that separate identical slices."""
    cuts = [list(c) for c in g.cuts]
    table = g.table
    for axis in range(table.ndim):
        j = 1
        while j <= len(cuts[axis]):
            lo = np.take(table, j - 1, axis=axis)
            hi = np.take(table, j, axis=axis)
            same = np.array(lo == hi)
            if j == 1 and all(c and c[0] == 1 for c in cuts):
                same[(0,) * same.ndim] = True
            if same.all():
                # keep the upper slice: it never holds the don't-care point
                table = np.delete(table, j - 1, axis=axis)
                del cuts[axis][j - 1]
            else:
                j += 1
    return _Grid(tuple(tuple(c) for c in cuts), table)


def _to_dnf(g: _Grid, sig: Signature) -> NormalForm:
    g = _coarsen(g)
    table = g.table
    allowed = table.copy()
    if g.has_dc:
        allowed[(0,) * table.ndim] = True
        table = table.copy()
        table[(0,) * table.ndim] = False
    shape = table.shape
    covered = np.zeros(shape, dtype=bool)
    boxes = []
    for idx in zip(*np.nonzero(table)):
        if covered[idx]:
            continue
        box = [[i, i] for i in idx]
        for axis in range(len(shape)):
            while box[axis][0] > 0 and _slab_ok(allowed, box, axis, box[axis][0] - 1):
                box[axis][0] -= 1
            while box[axis][1] < shape[axis] - 1 and _slab_ok(allowed, box, axis, box[axis][1] + 1):
                box[axis][1] += 1
        covered[_slices(box)] = True
        boxes.append(box)
    # drop boxes whose true points are covered by the others
    kept = list(boxes)
    for box in reversed(boxes):
        others = np.zeros(shape, dtype=bool)
        for other in kept:
            if other is not box:
                others[_slices(other)] = True
        if (others | ~table)[_slices(box)].all():
            kept = [other for other in kept if other is not box]
    clauses = sorted(_box_clause(box, g.cuts) for box in kept)
    return NormalForm(sig, tuple(clauses))


def _slices(box):
    return tuple(slice(lo, hi + 1) for lo, hi in box)


def _slab_ok(allowed, box, axis, index) -> bool:
    sl = list(_slices(box))
    sl[axis] = slice(index, index + 1)
    return bool(allowed[tuple(sl)].all())


def _box_clause(box, cuts) -> tuple:
    lits = []
    for cell, (lo, hi) in enumerate(box):
        c = cuts[cell]
        if lo > 0:
            lits.append(Literal(AtLeast((cell,), c[lo - 1]), True))
        if hi < len(c):
            lits.append(Literal(AtLeast((cell,), c[hi]), False))
    return tuple(lits)


# -- deciding sentences on cell counts ----------------------------------------------


def decide_on_counts(f: Formula, sig: Signature, cards) -> bool:
    """Truth of a closed sentence in any structure whose cell sizes are ``cards``.

    Elements of one cell that no variable currently names are interchangeable,
    so a quantifier only needs to try the named elements plus one fresh element
    per nonempty cell. Cell sizes may be infinite.
    """
    index = {name: j for j, name in enumerate(sig.symbols)}
    return _csat(f, index, tuple(cards), {})


def _csat(f, index, cards, env) -> bool:
    if isinstance(f, Pred):
        return bool((env[f.var][0] >> index[f.name]) & 1)
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _csat(f.arg, index, cards, env)
    if isinstance(f, BinOp):
        a = _csat(f.left, index, cards, env)
        if f.op == "&":
            return a and _csat(f.right, index, cards, env)
        if f.op == "|":
            return a or _csat(f.right, index, cards, env)
        if f.op == "->":
            return (not a) or _csat(f.right, index, cards, env)
        return a == _csat(f.right, index, cards, env)
    used = set(env.values())
    want = f.kind == "exists"
    for cell, size in enumerate(cards):
        if size == 0:
            continue
        named = sorted(e for e in used if e[0] == cell)
        candidates = list(named)
        if len(named) < size:
            candidates.append((cell, 1 + max((e[1] for e in named), default=-1)))
        for e in candidates:
            inner = dict(env)
            inner[f.var] = e
            if _csat(f.body, index, cards, inner) == want:
                return want
    return not want


# -- counting idioms --------------------------------------------------------------


def _unary_cells(f: Formula, var: str, sig: Signature) -> frozenset | None:
    """Cells satisfying a quantifier-free formula in one variable, or None if not of that shape."""
    if qrank(f) != 0 or not free_vars(f) <= {var}:
        return None
    index = {name: j for j, name in enumerate(sig.symbols)}
    return frozenset(c for c in sig.cells() if _csat(f, index, (1,) * sig.ncells, {var: (c, 0)}))


def _counting_atom(q: Quant, sig: Signature) -> tuple | None:
    """Recognize ``forall x. chi(x)`` and ``exists x1..xn (distinct & chi(xi))``.

    Returns ``(cells, n, positive)`` meaning ``#(cells) >= n`` (negated when
    ``positive`` is False), or None.
    """
    if q.kind == "forall":
        cells = _unary_cells(q.body, q.var, sig)
        if cells is None:
            return None
        return tuple(c for c in sig.cells() if c not in cells), 1, False
    block: list[str] = []
    conjuncts: list[Formula] = []

    def walk(g):
        if isinstance(g, Quant) and g.kind == "exists":
            if g.var in block:
                return False
            block.append(g.var)
            return walk(g.body)
        if isinstance(g, BinOp) and g.op == "&":
            return walk(g.left) and walk(g.right)
        conjuncts.append(g)
        return True

    if not walk(q):
        return None
    distinct = set()
    unary: dict[str, list[Formula]] = {v: [] for v in block}
    for g in conjuncts:
        if isinstance(g, Not) and isinstance(g.arg, Eq) and g.arg.left != g.arg.right:
            distinct.add(frozenset((g.arg.left, g.arg.right)))
            continue
        fv = free_vars(g)
        if len(fv) != 1 or qrank(g) != 0:
            return None
        (v,) = fv
        unary[v].append(g)
    n = len(block)
    if any(frozenset((a, b)) not in distinct for i, a in enumerate(block) for b in block[i + 1 :]):
        return None
    cellsets = set()
    for v in block:
        cells = frozenset(sig.cells())
        for g in unary[v]:
            cells &= _unary_cells(g, v, sig)
        cellsets.add(cells)
    if len(cellsets) != 1:
        return None
    return tuple(sorted(cellsets.pop())), n, True


def _atom_grid(cells: tuple, n: int, positive: bool, ncells: int, budget: int) -> _Grid:
    if not cells:
        return _const(ncells, not positive)
    cuts = [()] * ncells
    if len(cells) == 1:
        cuts[cells[0]] = (n,)
    else:
        _check_budget((n + 1) ** len(cells), budget)
        for c in cells:
            cuts[c] = tuple(range(1, n + 1))
    shape = tuple(len(c) + 1 for c in cuts)
    table = np.zeros(shape, dtype=bool)
    for idx in product(*(range(s) for s in shape)):
        # bucket j of a cut list (1..n) or (n,) starts at the j-th cut
        total = sum(((0,) + cuts[c])[idx[c]] for c in cells)
        table[idx] = (total >= n) == positive
    return _Grid(tuple(cuts), table)


def _bucket_grid(q: Formula, sig: Signature, cap: int, budget: int) -> _Grid:
    ncells = sig.ncells
    size = (cap + 1) ** ncells
    _check_budget(size, budget)
    cuts = tuple(tuple(range(1, cap + 1)) for _ in range(ncells))
    table = np.zeros((cap + 1,) * ncells, dtype=bool)
    for idx in product(range(cap + 1), repeat=ncells):
        if any(idx):
            table[idx] = decide_on_counts(q, sig, idx)
    return _Grid(cuts, table)


def _grid(f: Formula, sig: Signature, cap: int | None, budget: int) -> _Grid:
    if isinstance(f, Not):
        g = _grid(f.arg, sig, cap, budget)
        return _Grid(g.cuts, ~g.table)
    if isinstance(f, BinOp):
        a = _grid(f.left, sig, cap, budget)
        b = _grid(f.right, sig, cap, budget)
        op = {
            "&": np.logical_and,
            "|": np.logical_or,
            "->": lambda x, y: ~x | y,
            "<->": lambda x, y: x == y,
        }[f.op]
        return _combine(a, b, op, budget)
    if isinstance(f, Quant):
        if cap is None:
            atom = _counting_atom(f, sig)
            if atom is not None:
                return _atom_grid(*atom, sig.ncells, budget)
        r = max(qrank(f), 1)
        if cap is not None:
            if cap < qrank(f):
                raise ValueError(f"cap {cap} is below the quantifier rank {qrank(f)}")
            r = max(cap, 1)
        return _bucket_grid(f, sig, r, budget)
    raise ValueError(f"free variables in {f!r}")


def to_normal_form(
    s: Formula, sig: Signature, budget: int | None = None, cap: int | None = None
) -> NormalForm:
    """Eliminate quantifiers from a closed sentence over ``sig``.

    ``cap`` forces plain bucket enumeration at that cap (it must be at least the
    quantifier rank); by default counting idioms are translated directly.
    Raises :class:`BudgetExceeded` when a grid would exceed ``budget`` buckets.
    """
    missing = [p for p in predicates(s) if p not in sig.symbols]
    if missing:
        raise SignatureError(f"predicates {missing} are not in signature ({sig})")
    if free_vars(s):
        raise ValueError(f"sentence has free variables {sorted(free_vars(s))}")
    return _nf_cached(s, sig, budget if budget is not None else default_budget(), cap)


@lru_cache(maxsize=8192)
def _nf_cached(s, sig, budget, cap) -> NormalForm:
    return _to_dnf(_grid(s, sig, cap, budget), sig)


def holds(t: TheoryVector, s: Formula, budget: int | None = None) -> bool:
    """``s ∈ t``: the sentence is true in every model of the theory."""
    return evaluate(to_normal_form(s, t.sig, budget), t)


# -- sentence builders -------------------------------------------------------


def cell_formula(sig: Signature, cell: int, var: str) -> Formula | None:
    """The conjunction of signed predicates defining ``cell``; None for the empty signature."""
    lits = [
        Pred(name, var) if (cell >> j) & 1 else Not(Pred(name, var))
        for j, name in enumerate(sig.symbols)
    ]
    return conj(*lits) if lits else None


def at_least_sentence(sig: Signature, cell: int, k: int, prefix: str = "x") -> Formula:
    """``exists x1. chi(x1) & exists x2. chi(x2) & x2 != x1 & ...`` with ``k`` witnesses."""
    if k < 1:
        raise ValueError("k must be positive")

    def level(i):
        v = f"{prefix}{i}"
        parts = []
        chi = cell_formula(sig, cell, v)
        if chi is not None:
            parts.append(chi)
        parts.extend(Not(Eq(v, f"{prefix}{j}")) for j in range(1, i))
        if i < k:
            parts.append(level(i + 1))
        if not parts:
            parts.append(Eq(v, v))
        return Quant("exists", v, conj(*parts))

    return level(1)


def _negate_literal_conj(f: Formula) -> Formula:
    return f.arg if isinstance(f, Not) else Not(f)


def exactly_sentence(sig: Signature, cell: int, k: int, prefix: str = "x") -> Formula:
    if k == 0:
        chi = cell_formula(sig, cell, prefix)
        if chi is None:
            return Quant("forall", prefix, Not(Eq(prefix, prefix)))
        return Quant("forall", prefix, _negate_literal_conj(chi))
    return conj(
        at_least_sentence(sig, cell, k, prefix),
        Not(at_least_sentence(sig, cell, k + 1, prefix)),
    )


def basic_sentence(t: TheoryVector, n: int) -> Formula:
    """The neighbourhood generator at level ``n``: each cell exactly ``t(c)`` if below ``n``, else at least ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    parts = []
    for cell, value in enumerate(t.cards):
        if value < n:
            parts.append(exactly_sentence(t.sig, cell, int(value)))
        else:
            parts.append(at_least_sentence(t.sig, cell, n))
    return conj(*parts)


def describe_basic(t: TheoryVector, n: int) -> str:
    """Short human-readable form of ``basic_sentence(t, n)``."""
    parts = []
    for cell, value in enumerate(t.cards):
        label = t.sig.cell_label(cell, "&")
        parts.append(f"#({label})={value}" if value < n else f"#({label})>={n}")
    return " & ".join(parts)


__all__ = [
    "AtLeast",
    "Literal",
    "NormalForm",
    "to_normal_form",
    "evaluate",
    "holds",
    "basic_sentence",
    "at_least_sentence",
    "exactly_sentence",
    "cell_formula",
    "decide_on_counts",
    "describe_basic",
    "format_card",
    "INF",
]
