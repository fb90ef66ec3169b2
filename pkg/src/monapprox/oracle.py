"""Brute-force ground truth for the symbolic engine.

Nothing here reuses the box algebra, the accumulation-point rules or the
normal-form machinery to reach a verdict. Value sets are read through their
raw fields, members are counted by enumeration, and sentences are checked
against the naive model checker.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

from .boxes import Box, ValueSet
from .families import Family, format_family
from .logic import (
    INF,
    BinOp,
    Eq,
    FiniteStructure,
    Formula,
    Not,
    Pred,
    Quant,
    Signature,
    TheoryVector,
    format_sentence,
    model_check,
    realize,
)

__all__ = [
    "brute_accumulation_check",
    "brute_qe_check",
    "count_structures",
    "enumerate_sentences",
    "random_valueset",
    "random_family",
    "random_theory",
    "PROPERTIES",
    "search_counterexample",
    "Counterexample",
]


# -- bounded accumulation check -------------------------------------------------------


def _member(vs: ValueSet, x) -> bool:
    if x == INF:
        return vs.inf
    if x < vs.start:
        return x in vs.explicit
    return vs.period > 0 and (x % vs.period) in vs.residues


def _raw_level(f: Family, t: TheoryVector) -> int:
    top = max((v for v in t.cards if v != INF), default=0)
    for b in f.boxes:
        for vs in b.sets:
            top = max(top, vs.start, vs.period, *vs.explicit)
    return top + 1


def _fits(card, n: int, x) -> bool:
    # the basic sentence of level n, read cell by cell
    return x == card if card < n else x >= n


def _count_at(f: Family, t: TheoryVector, n: int, bound: int) -> int:
    """Distinct members of ``f`` with finite cells ``<= bound`` satisfying the level-``n`` sentence of ``t``."""
    ncells = f.sig.ncells
    columns = []
    for c in range(ncells):
        groups: dict[tuple, int] = {}
        zero_key = None
        for x in list(range(bound + 1)) + [INF]:
            if not _fits(t.cards[c], n, x):
                continue
            key = tuple(_member(b.sets[c], x) for b in f.boxes)
            groups[key] = groups.get(key, 0) + 1
            if x == 0:
                zero_key = key
        columns.append((groups, zero_key))
    total = 0
    for combo in product(*(list(g.items()) for g, _ in columns)):
        if any(all(key[i] for key, _ in combo) for i in range(len(f.boxes))):
            size = 1
            for _, k in combo:
                size *= k
            total += size
    keys = [z for _, z in columns]
    if all(k is not None for k in keys) and any(
        all(k[i] for k in keys) for i in range(len(f.boxes))
    ):
        total -= 1
    return total


def brute_accumulation_check(
    f: Family, t: TheoryVector, depth: int | None = None, bound: int = 50
) -> bool:
    """Every basic sentence of ``t`` up to ``depth`` keeps gaining members as ``bound`` doubles."""
    if depth is None:
        depth = _raw_level(f, t)
    for n in range(1, depth + 1):
        if _count_at(f, t, n, 2 * bound) <= _count_at(f, t, n, bound):
            return False
    return True


# -- quantifier elimination sweep ------------------------------------------------------


def _vectors(ncells: int, total: int) -> Iterator[tuple]:
    if ncells == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _vectors(ncells - 1, total - k):
            yield (k,) + rest


def count_structures(sig: Signature, max_size: int) -> Iterator[FiniteStructure]:
    """One structure per cell-count vector of size ``1..max_size``.

    First-order truth is invariant under isomorphism, and a monadic structure
    is determined up to isomorphism by its cell counts.
    """
    for size in range(1, max_size + 1):
        for counts in _vectors(sig.ncells, size):
            yield realize(TheoryVector(sig, counts), size)


def brute_qe_check(
    s: Formula, sig: Signature, max_size: int = 4, nf=None
) -> tuple[bool, FiniteStructure | None]:
    """Compare the model checker with the normal form of ``s`` on all small structures."""
    from .logic import theory_of_structure
    from .normalform import evaluate, to_normal_form

    if nf is None:
        nf = to_normal_form(s, sig)
    for m in count_structures(sig, max_size):
        if model_check(m, s) != evaluate(nf, theory_of_structure(m)):
            return False, m
    return True, None


def _literals(sig: Signature, var: str) -> list[Formula]:
    out: list[Formula] = []
    for name in sig.symbols:
        out += [Pred(name, var), Not(Pred(name, var))]
    return out


def enumerate_sentences(sig: Signature, max_rank: int = 2) -> list[Formula]:
    """A canonical list of sentences of quantifier rank ``<= max_rank`` (1 or 2)."""
    seen: dict[str, Formula] = {}

    def add(f: Formula):
        seen.setdefault(format_sentence(f), f)

    unary = _literals(sig, "x")
    bodies1 = list(unary)
    for a, b in product(unary, repeat=2):
        if format_sentence(a) < format_sentence(b):
            bodies1 += [BinOp("&", a, b), BinOp("|", a, b)]
    rank1 = []
    for kind in ("forall", "exists"):
        for body in bodies1:
            rank1.append(Quant(kind, "x", body))
    for f in rank1:
        add(f)
    if max_rank >= 2:
        atoms = [Eq("x", "y"), Not(Eq("x", "y"))] + _literals(sig, "y")
        bodies2 = list(atoms)
        for a in atoms:
            for b in unary + atoms:
                if a != b:
                    bodies2 += [BinOp("&", a, b), BinOp("->", b, a)]
        for k1, k2 in product(("forall", "exists"), repeat=2):
            for body in bodies2:
                add(Quant(k1, "x", Quant(k2, "y", body)))
    base = list(seen.values())
    for f in base[:40]:
        add(Not(f))
    for a, b in zip(base, base[7:] + base[:7]):
        add(BinOp("|", a, b))
        add(BinOp("<->", a, b))
    return list(seen.values())


# -- random instances --------------------------------------------------------------


def random_valueset(rng: random.Random, max_value: int = 4, max_period: int = 3) -> ValueSet:
    kind = rng.randrange(4)
    inf = rng.random() < 0.3
    if kind == 0:
        values = [v for v in range(max_value + 1) if rng.random() < 0.4]
        return ValueSet.finite(values, inf=inf)
    if kind == 1:
        return ValueSet.ray(rng.randint(0, max_value), inf=inf)
    step = rng.randint(1, max_period)
    prog = ValueSet.progression(rng.randint(0, max_value), step, inf=inf)
    if kind == 2:
        return prog
    return prog | ValueSet.finite([rng.randint(0, max_value)])


def random_family(
    rng: random.Random, nsymbols: int | None = None, max_boxes: int = 3, **kw
) -> Family:
    if nsymbols is None:
        nsymbols = rng.randint(0, 2)
    sig = Signature(("P", "Q")[:nsymbols])
    boxes = []
    for _ in range(rng.randint(1, max_boxes)):
        boxes.append(Box(sig, tuple(random_valueset(rng, **kw) for _ in sig.cells())))
    return Family(sig, tuple(boxes))


def random_theory(rng: random.Random, sig: Signature, max_value: int = 6) -> TheoryVector:
    while True:
        cards = tuple(
            INF if rng.random() < 0.35 else rng.randint(0, max_value) for _ in sig.cells()
        )
        if any(cards):
            return TheoryVector(sig, cards)


# -- property search ------------------------------------------------------------------


def _one(rng):
    return [random_family(rng)], {}


def _pair(rng):
    f1 = random_family(rng)
    return [f1, random_family(rng, len(f1.sig.symbols))], {}


def _with_theory(rng):
    f = random_family(rng)
    return [f], {"theory": random_theory(rng, f.sig)}


def _closure_idempotent(fs, _):
    from .closure import closure
    from .families import same_set

    c = closure(fs[0])
    return same_set(closure(c), c)


def _closure_extensive(fs, _):
    from .closure import closure
    from .families import is_subfamily

    return is_subfamily(fs[0], closure(fs[0]))


def _closure_monotone(fs, _):
    from .closure import closure
    from .families import is_subfamily, union

    return is_subfamily(closure(fs[0]), closure(union(fs[0], fs[1])))


def _closure_additive(fs, _):
    from .closure import closure
    from .families import same_set, union

    f1, f2 = fs
    return same_set(closure(union(f1, f2)), union(closure(f1), closure(f2)))


def _accumulation_agreement(fs, inputs):
    from .closure import is_accumulation_point

    t = inputs["theory"]
    return is_accumulation_point(fs[0], t) == brute_accumulation_check(fs[0], t)


def _minimal_iff_categorical(fs, _):
    from .categorical import e_minimal_bounded, is_e_categorical
    from .families import family_cardinality

    f = fs[0]
    if not family_cardinality(f).is_infinite:
        return True
    return e_minimal_bounded(f)[0] == is_e_categorical(f)


def _built_point_is_limit(fs, _):
    from .categorical import TIE_BREAKS, build_accumulation_point
    from .families import family_cardinality

    f = fs[0]
    if not family_cardinality(f).is_infinite:
        return True
    return all(brute_accumulation_check(f, build_accumulation_point(f, tb)) for tb in TIE_BREAKS)


def _random_sentence(rng):
    sig = Signature(("P", "Q")[: rng.randint(0, 2)])
    return [], {"signature": sig, "sentence": rng.choice(enumerate_sentences(sig))}


def _qe_sound(_, inputs):
    return brute_qe_check(inputs["sentence"], inputs["signature"], 4)[0]


# id -> (instance generator, check returning True when the property holds)
PROPERTIES: dict[str, tuple[Callable, Callable]] = {
    "closure-idempotent": (_one, _closure_idempotent),
    "closure-extensive": (_one, _closure_extensive),
    "closure-monotone": (_pair, _closure_monotone),
    "closure-additive": (_pair, _closure_additive),
    "accumulation-agreement": (_with_theory, _accumulation_agreement),
    "minimal-iff-categorical": (_one, _minimal_iff_categorical),
    "built-point-is-limit": (_one, _built_point_is_limit),
    "qe-sound": (_random_sentence, _qe_sound),
}


@dataclass
class Counterexample:
    property_id: str
    families: list[Family]
    inputs: dict

    def artifact(self) -> str:
        """Family files plus the remaining inputs as comments."""
        parts = [f"# property: {self.property_id}"]
        for key, value in self.inputs.items():
            shown = format_sentence(value) if key == "sentence" else value
            parts.append(f"# {key}: {shown}")
        for i, f in enumerate(self.families):
            parts.append(f"# family {i + 1}")
            parts.append(format_family(f).rstrip())
        return "\n".join(parts) + "\n"


def _shrink(check: Callable, families: list[Family], inputs: dict) -> list[Family]:
    # drop boxes one at a time while the failure persists
    changed = True
    while changed:
        changed = False
        for i, f in enumerate(families):
            for j in range(len(f.boxes)):
                smaller = Family(f.sig, f.boxes[:j] + f.boxes[j + 1 :])
                trial = families[:i] + [smaller] + families[i + 1 :]
                if smaller.boxes and not check(trial, inputs):
                    families, changed = trial, True
                    break
            if changed:
                break
    return families


def search_counterexample(
    property_id: str, budget: int = 1000, seed: int = 0
) -> Counterexample | None:
    """Run ``budget`` random trials of a registered property; shrink the first failure."""
    if property_id not in PROPERTIES:
        raise KeyError(f"unknown property {property_id!r}; known: {', '.join(PROPERTIES)}")
    rng = random.Random(seed)
    generate, check = PROPERTIES[property_id]
    for _ in range(budget):
        families, inputs = generate(rng)
        if not check(families, inputs):
            return Counterexample(property_id, _shrink(check, families, inputs), inputs)
    return None
