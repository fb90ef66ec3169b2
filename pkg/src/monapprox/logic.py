"""Signatures, monadic sentences, finite structures and Tarski semantics.

This is the ground-truth layer: everything symbolic elsewhere in the package
is tested against :func:`model_check` on explicit finite structures.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import (
    LiteralSyntaxError,
    SentenceSyntaxError,
    SignatureError,
    UnboundVariableError,
    UnknownPredicateError,
)

INF = math.inf

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_KEYWORDS = frozenset({"forall", "exists", "inf", "any", "step", "u"})


# -- signatures and cells ---------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """An ordered list of unary predicate symbols.

    Cell ``c`` is the conjunction over ``j`` of ``P_j`` when bit ``j`` of ``c``
    is set and ``!P_j`` otherwise, so there are ``2**k`` cells.
    """

    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        for name in symbols:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise SignatureError(f"bad predicate name {name!r}")
            if name in _KEYWORDS:
                raise SignatureError(f"{name!r} is reserved")
        if len(set(symbols)) != len(symbols):
            raise SignatureError(f"duplicate predicate names in {symbols}")

    @classmethod
    def of(cls, *names: str) -> "Signature":
        if len(names) == 1 and isinstance(names[0], str) and " " in names[0]:
            names = tuple(names[0].split())
        return cls(tuple(names))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __str__(self):
        return " ".join(self.symbols)

    @property
    def ncells(self) -> int:
        return 1 << len(self.symbols)

    def cells(self) -> range:
        return range(self.ncells)

    def index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise SignatureError(f"{name!r} is not in signature ({self})") from None

    @staticmethod
    def holds_in_cell(cell: int, j: int) -> bool:
        return bool((cell >> j) & 1)

    def cell_label(self, cell: int, sep: str | None = None) -> str:
        if not self.symbols:
            return "u"
        if sep is None:
            sep = "" if all(len(s) == 1 for s in self.symbols) else "&"
        return sep.join(
            ("" if (cell >> j) & 1 else "!") + name for j, name in enumerate(self.symbols)
        )

    def parse_cell(self, pattern: str) -> int:
        """Parse a signed conjunction such as ``P!Q`` or ``P & !Q`` into a cell index."""
        text = "".join(pattern.split())
        if not self.symbols:
            if text in ("u", ""):
                return 0
            raise LiteralSyntaxError(f"empty signature has only the cell 'u', got {pattern!r}")
        by_length = sorted(self.symbols, key=len, reverse=True)
        seen: dict[str, bool] = {}
        i = 0
        while i < len(text):
            if text[i] == "&":
                i += 1
                continue
            positive = True
            if text[i] == "!":
                positive = False
                i += 1
            for name in by_length:
                if text.startswith(name, i):
                    break
            else:
                raise LiteralSyntaxError(f"cannot read a predicate at {text[i:]!r} in {pattern!r}")
            if name in seen:
                raise LiteralSyntaxError(f"{name} occurs twice in cell pattern {pattern!r}")
            seen[name] = positive
            i += len(name)
        missing = [s for s in self.symbols if s not in seen]
        if missing:
            raise LiteralSyntaxError(f"cell pattern {pattern!r} does not mention {', '.join(missing)}")
        return sum(1 << j for j, s in enumerate(self.symbols) if seen[s])

    def extend(self, *names: str) -> "Signature":
        return Signature(self.symbols + tuple(names))


def infer_signature(patterns: list[str]) -> Signature:
    """Collect predicate names from cell patterns in order of first appearance.

    With ``&`` separators any identifier works; without them each name is a
    letter optionally followed by digits or underscores.
    """
    names: list[str] = []
    for pattern in patterns:
        text = "".join(pattern.split())
        if text == "u":
            continue
        if "&" in text:
            tokens = [t.lstrip("!") for t in text.split("&") if t]
        else:
            tokens = re.findall(r"[A-Za-z][0-9_]*", text)
        for token in tokens:
            if token not in names:
                names.append(token)
    return Signature(tuple(names))


# -- theory vectors ---------------------------------------------------------


def format_card(value) -> str:
    return "inf" if value == INF else str(value)


def parse_card(text: str):
    text = text.strip()
    if text == "inf":
        return INF
    if text.isdigit():
        return int(text)
    raise LiteralSyntaxError(f"bad cardinal {text!r} (expected a natural number or 'inf')")


@dataclass(frozen=True)
class TheoryVector:
    """A complete monadic theory, given by the number of elements in each cell.

    Values are non-negative ints or ``math.inf``. Two vectors are equal
    exactly when the theories are elementarily equivalent.
    """

    sig: Signature
    cards: tuple

    def __post_init__(self):
        cards = tuple(self.cards)
        object.__setattr__(self, "cards", cards)
        if len(cards) != self.sig.ncells:
            raise ValueError(f"expected {self.sig.ncells} cell values, got {len(cards)}")
        for v in cards:
            if v != INF and not (isinstance(v, int) and not isinstance(v, bool) and v >= 0):
                raise ValueError(f"bad cell value {v!r}")
        if self.total < 1:
            raise ValueError("a theory needs a nonempty universe (total cardinality >= 1)")

    @classmethod
    def from_cells(cls, sig: Signature, values: dict) -> "TheoryVector":
        cards = [0] * sig.ncells
        for key, value in values.items():
            cell = key if isinstance(key, int) else sig.parse_cell(key)
            cards[cell] = value
        return cls(sig, tuple(cards))

    def __getitem__(self, cell: int):
        return self.cards[cell]

    def __iter__(self):
        return iter(self.cards)

    @property
    def total(self):
        return sum(self.cards)

    @property
    def has_inf(self) -> bool:
        return any(v == INF for v in self.cards)

    def __str__(self):
        return ",".join(
            f"{self.sig.cell_label(c)}={format_card(v)}" for c, v in enumerate(self.cards)
        )


# -- sentences --------------------------------------------------------------


@dataclass(frozen=True)
class Pred:
    name: str
    var: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of & | -> <->
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    kind: str  # "forall" or "exists"
    var: str
    body: "Formula"


Formula = Union[Pred, Eq, Not, BinOp, Quant]

BINARY_OPS = ("&", "|", "->", "<->")
_PREC = {"<->": 1, "->": 2, "|": 3, "&": 4}
_NOT_PREC = 5


def conj(*parts: Formula) -> Formula:
    result = parts[0]
    for p in parts[1:]:
        result = BinOp("&", result, p)
    return result


def disj(*parts: Formula) -> Formula:
    result = parts[0]
    for p in parts[1:]:
        result = BinOp("|", result, p)
    return result


def qrank(f: Formula) -> int:
    if isinstance(f, (Pred, Eq)):
        return 0
    if isinstance(f, Not):
        return qrank(f.arg)
    if isinstance(f, BinOp):
        return max(qrank(f.left), qrank(f.right))
    return 1 + qrank(f.body)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Pred):
        return frozenset((f.var,))
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, BinOp):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def predicates(f: Formula) -> list[str]:
    """Predicate names in order of first occurrence."""
    out: list[str] = []

    def walk(g):
        if isinstance(g, Pred):
            if g.name not in out:
                out.append(g.name)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, BinOp):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Quant):
            walk(g.body)

    walk(f)
    return out


def is_quantifier_free(f: Formula) -> bool:
    return qrank(f) == 0


# -- parser -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|!=|[!&|().=])|(?P<ident>[A-Za-z][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SentenceSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        kind = "ident" if m.lastgroup == "ident" else "op"
        tokens.append((kind, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return SentenceSyntaxError(message, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "eof":
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def iff(self):
        left = self.imp()
        while self.peek()[1] == "<->":
            self.take()
            left = BinOp("<->", left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return BinOp("->", left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[1] == "|":
            self.take()
            left = BinOp("|", left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek()[1] == "&":
            self.take()
            left = BinOp("&", left, self.unary())
        return left

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "!":
            self.take()
            return Not(self.unary())
        if kind == "ident" and value in ("forall", "exists"):
            self.take()
            var_tok = self.take()
            if var_tok[0] != "ident" or var_tok[1] in ("forall", "exists"):
                raise self.error("expected a variable after quantifier", var_tok)
            self.expect(".")
            self.scope.append(var_tok[1])
            body = self.iff()
            self.scope.pop()
            return Quant(value, var_tok[1], body)
        return self.primary()

    def variable(self):
        tok = self.take()
        if tok[0] != "ident" or tok[1] in ("forall", "exists"):
            raise self.error("expected a variable", tok)
        if tok[1] not in self.scope:
            raise UnboundVariableError(tok[1], tok[2], self.text)
        return tok[1]

    def primary(self):
        tok = self.peek()
        if tok[1] == "(" and tok[0] == "op":
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if tok[0] != "ident":
            raise self.error(f"unexpected {tok[1] or 'end of input'!r}")
        nxt = self.tokens[self.i + 1]
        if nxt[1] == "(":
            self.take()
            if self.sig is not None and tok[1] not in self.sig.symbols:
                raise UnknownPredicateError(tok[1], tok[2], self.text)
            self.take()
            var = self.variable()
            self.expect(")")
            return Pred(tok[1], var)
        if nxt[1] in ("=", "!="):
            left = self.variable()
            op = self.take()[1]
            right = self.variable()
            eq = Eq(left, right)
            return eq if op == "=" else Not(eq)
        raise self.error(f"expected an atom after {tok[1]!r}", nxt)


def parse_sentence(text: str, sig: Signature | None = None) -> Formula:
    """Parse a closed monadic sentence.

    When ``sig`` is given every predicate must belong to it.
    """
    return _Parser(text, sig).parse()


def signature_of(f: Formula) -> Signature:
    return Signature(tuple(predicates(f)))


# -- printer ----------------------------------------------------------------


def format_sentence(f: Formula) -> str:
    return _fmt(f, 0, True)


def _fmt(f: Formula, ctx: int, open_right: bool) -> str:
    # open_right: nothing follows this text inside the enclosing scope, so a
    # quantifier may extend to the right without parentheses.
    if isinstance(f, Pred):
        return f"{f.name}({f.var})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"{f.arg.left} != {f.arg.right}"
        return "!" + _fmt(f.arg, _NOT_PREC, open_right)
    if isinstance(f, Quant):
        text = f"{f.kind} {f.var}. {_fmt(f.body, 0, True)}"
        return text if open_right else f"({text})"
    prec = _PREC[f.op]
    wrap = prec < ctx
    inner_open = True if wrap else open_right
    if f.op == "->":
        left = _fmt(f.left, prec + 1, False)
        right = _fmt(f.right, prec, inner_open)
    else:
        left = _fmt(f.left, prec, False)
        right = _fmt(f.right, prec + 1, inner_open)
    text = f"{left} {f.op} {right}"
    return f"({text})" if wrap else text


# -- finite structures and model checking -----------------------------------


@dataclass(frozen=True)
class FiniteStructure:
    """A finite structure: universe ``{0..size-1}`` and one subset per predicate."""

    sig: Signature
    size: int
    membership: tuple = field(default=())

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("first-order structures are nonempty")
        membership = tuple(frozenset(s) for s in self.membership) or tuple(
            frozenset() for _ in self.sig.symbols
        )
        if len(membership) != len(self.sig):
            raise ValueError("need one membership set per predicate")
        for s in membership:
            if any(not 0 <= e < self.size for e in s):
                raise ValueError("membership outside the universe")
        object.__setattr__(self, "membership", membership)

    @classmethod
    def build(cls, sig: Signature, size: int, **sets) -> "FiniteStructure":
        return cls(sig, size, tuple(frozenset(sets.get(s, ())) for s in sig.symbols))

    def cell_of(self, element: int) -> int:
        return sum(1 << j for j, s in enumerate(self.membership) if element in s)


def model_check(m: FiniteStructure, s: Formula) -> bool:
    """Decide ``m |= s`` by direct Tarski semantics."""
    index = {name: j for j, name in enumerate(m.sig.symbols)}
    missing = [p for p in predicates(s) if p not in index]
    if missing:
        raise SignatureError(f"predicates {missing} are not in the structure's signature")
    stray = free_vars(s)
    if stray:
        raise UnboundVariableError(sorted(stray)[0])
    return _sat(s, m, index, {})


def _sat(f, m, index, env) -> bool:
    if isinstance(f, Pred):
        return env[f.var] in m.membership[index[f.name]]
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _sat(f.arg, m, index, env)
    if isinstance(f, BinOp):
        a = _sat(f.left, m, index, env)
        if f.op == "&":
            return a and _sat(f.right, m, index, env)
        if f.op == "|":
            return a or _sat(f.right, m, index, env)
        if f.op == "->":
            return (not a) or _sat(f.right, m, index, env)
        return a == _sat(f.right, m, index, env)
    test = any if f.kind == "exists" else all
    saved = env.get(f.var, _UNSET)
    try:
        def branch(e):
            env[f.var] = e
            return _sat(f.body, m, index, env)

        return test(branch(e) for e in range(m.size))
    finally:
        if saved is _UNSET:
            env.pop(f.var, None)
        else:
            env[f.var] = saved


_UNSET = object()


def theory_of_structure(m: FiniteStructure) -> TheoryVector:
    counts = [0] * m.sig.ncells
    for e in range(m.size):
        counts[m.cell_of(e)] += 1
    return TheoryVector(m.sig, tuple(counts))


def realize(t: TheoryVector, cap: int) -> FiniteStructure:
    """A finite structure with ``min(t(c), cap)`` elements in each cell, cells laid out in index order."""
    if cap < 1:
        raise ValueError("cap must be a positive integer")
    sig = t.sig
    members: list[set[int]] = [set() for _ in sig.symbols]
    e = 0
    for cell, value in enumerate(t.cards):
        for _ in range(int(min(value, cap))):
            for j in range(len(sig)):
                if (cell >> j) & 1:
                    members[j].add(e)
            e += 1
    return FiniteStructure(sig, e, tuple(frozenset(s) for s in members))


def iter_structures(sig: Signature, max_size: int) -> Iterator[FiniteStructure]:
    """Every structure over ``sig`` with universe size 1..max_size (not up to isomorphism)."""
    k = len(sig)
    for size in range(1, max_size + 1):
        for code in range(1 << (k * size)):
            members = tuple(
                frozenset(e for e in range(size) if (code >> (j * size + e)) & 1)
                for j in range(k)
            )
            yield FiniteStructure(sig, size, members)
