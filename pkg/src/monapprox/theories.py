"""Per-theory judgments: finite models, finite axiomatizability, pseudo-finiteness,
finite approximations, restriction with padding, and complete sentences."""

from __future__ import annotations

from .errors import LiteralSyntaxError, PreconditionError, SignatureError
from .logic import (
    INF,
    Formula,
    Signature,
    TheoryVector,
    format_card,
    infer_signature,
    parse_card,
)
from .normalform import basic_sentence

__all__ = [
    "TheoryVector",
    "parse_theory",
    "format_theory",
    "is_finite_model_theory",
    "is_finitely_axiomatizable",
    "is_pseudo_finite",
    "finite_approximation",
    "restrict_and_pad",
    "restrict",
    "complete_sentence",
]


def parse_theory(text: str, sig: Signature | None = None) -> TheoryVector:
    """Read a theory from ``"!P=0,P=inf"`` or from the line format::

        signature P Q
        cell P!Q = 2
        cell PQ = inf

    Omitted cells are 0. Without a ``signature`` line (and no ``sig``) the
    signature is inferred from the cell patterns.
    """
    entries: list[tuple[str, str]] = []
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("signature"):
            declared = Signature(tuple(line.split()[1:]))
            if sig is not None and declared != sig:
                raise SignatureError(f"theory declares ({declared}), expected ({sig})")
            sig = declared
            continue
        if line.startswith("cell "):
            line = line[5:]
        for item in filter(None, (i.strip() for i in line.split(","))):
            if "=" not in item:
                raise LiteralSyntaxError(f"expected 'cell=card', got {item!r}")
            pattern, card = item.rsplit("=", 1)
            entries.append((pattern.strip(), card.strip()))
    if sig is None:
        sig = infer_signature([p for p, _ in entries])
    cards = [0] * sig.ncells
    seen = set()
    for pattern, card in entries:
        cell = sig.parse_cell(pattern)
        if cell in seen:
            raise LiteralSyntaxError(f"cell {pattern!r} given twice")
        seen.add(cell)
        cards[cell] = parse_card(card)
    try:
        return TheoryVector(sig, tuple(cards))
    except ValueError as exc:
        raise LiteralSyntaxError(str(exc)) from None


def format_theory(t: TheoryVector) -> str:
    lines = [f"signature {t.sig}".rstrip()]
    lines += [f"cell {t.sig.cell_label(c)} = {format_card(v)}" for c, v in enumerate(t.cards)]
    return "\n".join(lines) + "\n"


def is_finite_model_theory(t: TheoryVector) -> bool:
    return not t.has_inf


def is_finitely_axiomatizable(t: TheoryVector) -> tuple[bool, Formula | None]:
    # A vector with an infinite cell is the limit of the vectors putting n
    # elements there, hence approximable and not finitely axiomatizable.
    if t.has_inf:
        return False, None
    return True, complete_sentence(t)


def is_pseudo_finite(t: TheoryVector) -> bool:
    """Theory of an infinite structure all of whose sentences have finite models."""
    return t.has_inf


def finite_approximation(t: TheoryVector, n: int) -> TheoryVector:
    """Replace every infinite cell by ``n``; agrees with ``t`` on sentences of rank ``<= n``."""
    if n < 1:
        raise ValueError("n must be positive")
    return TheoryVector(t.sig, tuple(n if v == INF else v for v in t.cards))


def _project(t: TheoryVector, sub: Signature) -> TheoryVector:
    positions = [t.sig.index(s) for s in sub.symbols]
    cards = [0] * sub.ncells
    for cell, value in enumerate(t.cards):
        image = sum(1 << i for i, j in enumerate(positions) if (cell >> j) & 1)
        cards[image] += value
    return TheoryVector(sub, tuple(cards))


def restrict(t: TheoryVector, sub: Signature) -> TheoryVector:
    """Forget the predicates outside ``sub`` by summing cell counts."""
    if not set(sub.symbols) <= set(t.sig.symbols):
        raise PreconditionError(f"({sub}) is not contained in ({t.sig})")
    return _project(t, sub)


def restrict_and_pad(
    t: TheoryVector, sub: Signature, target: Signature, flip: bool = True
) -> TheoryVector:
    """Restrict ``t`` to ``sub`` and re-expand to ``target``.

    Each padded predicate is empty when it is nonempty in ``t`` and complete
    when it is empty in ``t``. With ``flip=False`` padded predicates are
    simply empty.
    """
    if not set(sub.symbols) <= set(target.symbols):
        raise PreconditionError(f"({sub}) is not contained in ({target})")
    if not set(target.symbols) <= set(t.sig.symbols):
        raise PreconditionError(f"({target}) is not contained in ({t.sig})")
    base = _project(t, sub)
    forced = {}
    for name in target.symbols:
        if name in sub.symbols:
            continue
        j = t.sig.index(name)
        nonempty = any(v for c, v in enumerate(t.cards) if (c >> j) & 1)
        forced[name] = (not nonempty) if flip else False
    sub_pos = {name: i for i, name in enumerate(sub.symbols)}
    cards = [0] * target.ncells
    for cell in target.cells():
        image = 0
        ok = True
        for j, name in enumerate(target.symbols):
            bit = (cell >> j) & 1
            if name in forced:
                ok = ok and bit == forced[name]
            elif bit:
                image |= 1 << sub_pos[name]
        if ok:
            cards[cell] = base.cards[image]
    return TheoryVector(target, tuple(cards))


def complete_sentence(t: TheoryVector) -> Formula:
    """A sentence whose only model theory is ``t``; exists only for finite-model theories."""
    if t.has_inf:
        raise PreconditionError(f"{t} has an infinite cell and no complete sentence")
    return basic_sentence(t, t.total + 1)
