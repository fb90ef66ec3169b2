"""Command-line front end.

Exit codes: 0 success, 1 negative verdict of a yes/no query, 2 usage or
input error, 3 quantifier-elimination budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .boxes import format_valueset
from .categorical import (
    TIE_BREAKS,
    approximating_subfamily,
    build_accumulation_point,
    e_minimal_bounded,
    is_e_categorical,
    is_e_minimal,
    partition_e_categorical,
    spectrum_witnesses,
)
from .closure import accumulation_points, closure, e_spectrum, is_approximated_by, is_e_closed, new_points
from .errors import BudgetExceeded, MonapproxError
from .families import Family, format_family, parse_family
from .generating import (
    expand_with_markers,
    is_generating,
    least_generating_set,
    t_complete_sentence,
)
from .logic import Signature, TheoryVector, format_card, format_sentence, parse_sentence, signature_of
from .normalform import evaluate, to_normal_form
from .oracle import PROPERTIES, search_counterexample
from .theories import (
    finite_approximation,
    is_finitely_axiomatizable,
    is_pseudo_finite,
    parse_theory,
    restrict_and_pad,
)

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- input ----------------------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _signature(text: str | None) -> Signature | None:
    return None if text is None else Signature.of(text)


def _family(path: str) -> Family:
    return parse_family(_read(path))


def _theory(arg: str, sig: Signature | None = None) -> TheoryVector:
    text = _read(arg) if arg == "-" or os.path.isfile(arg) else arg
    return parse_theory(text, sig)


# -- output ---------------------------------------------------------------------------


def _theory_json(t: TheoryVector):
    return {
        "signature": list(t.sig.symbols),
        "cells": {t.sig.cell_label(c): format_card(v) for c, v in enumerate(t.cards)},
    }


def _family_json(f: Family):
    return {
        "signature": list(f.sig.symbols),
        "boxes": [
            {f.sig.cell_label(c): format_valueset(vs) for c, vs in enumerate(b.sets)}
            for b in f.boxes
        ],
    }


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, data) -> None:
        if self.as_json:
            print(json.dumps(data, indent=2, ensure_ascii=False))
        else:
            print(text.rstrip("\n"))

    def verdict(self, value: bool, data: dict | None = None, text: str | None = None) -> int:
        payload = {"result": value, **(data or {})}
        self.emit(text if text is not None else str(value).lower(), payload)
        return EXIT_OK if value else EXIT_NO


# -- subcommands ------------------------------------------------------------------


def cmd_qe(a, out):
    sig = _signature(a.signature)
    s = parse_sentence(a.sentence, sig)
    sig = sig or signature_of(s)
    nf = to_normal_form(s, sig)
    out.emit(str(nf), {"sentence": format_sentence(s), "normal_form": str(nf), "clauses": nf.to_json()})
    return EXIT_OK


def cmd_holds(a, out):
    t = _theory(a.theory, _signature(a.signature))
    s = parse_sentence(a.sentence, t.sig)
    return out.verdict(evaluate(to_normal_form(s, t.sig), t))


def cmd_closure(a, out):
    f = closure(_family(a.family))
    out.emit(format_family(f), _family_json(f))
    return EXIT_OK


def cmd_accpoints(a, out):
    f = accumulation_points(_family(a.family))
    out.emit(format_family(f), _family_json(f))
    return EXIT_OK


def cmd_espectrum(a, out):
    f = _family(a.family)
    count = e_spectrum(f)
    data = {"e_spectrum": count.to_json()}
    text = str(count)
    if count.is_infinite:
        extra = new_points(f)
        data["new_points"] = _family_json(extra)
        text += "\n" + format_family(extra)
    out.emit(text, data)
    return EXIT_OK


def cmd_eclosed(a, out):
    return out.verdict(is_e_closed(_family(a.family)))


def cmd_approxby(a, out):
    f = _family(a.family)
    return out.verdict(is_approximated_by(_theory(a.theory, f.sig), f))


def cmd_genset(a, out):
    if a.action == "least":
        f = _family(a.family)
        least = least_generating_set(f)
        if least is None:
            out.emit("none", {"least": None})
            return EXIT_NO
        out.emit(format_family(least), {"least": _family_json(least)})
        return EXIT_OK
    if a.whole is None:
        raise MonapproxError("genset check needs SUB and WHOLE family files")
    return out.verdict(is_generating(_family(a.family), _family(a.whole)))


def cmd_isolate(a, out):
    f = _family(a.family)
    s = t_complete_sentence(_theory(a.theory, f.sig), f)
    if s is None:
        return out.verdict(False, {"sentence": None})
    text = format_sentence(s)
    return out.verdict(True, {"sentence": text}, f"true\n{text}")


def cmd_markers(a, out):
    _, g = expand_with_markers(_family(a.family))
    out.emit(format_family(g), _family_json(g))
    return EXIT_OK


def cmd_buildacc(a, out):
    t = build_accumulation_point(_family(a.family), a.tie_break)
    out.emit(str(t), _theory_json(t))
    return EXIT_OK


def cmd_ecategorical(a, out):
    return out.verdict(is_e_categorical(_family(a.family)))


def cmd_eminimal(a, out):
    f = _family(a.family)
    if not a.bounded:
        return out.verdict(is_e_minimal(f))
    ok, witness = e_minimal_bounded(f)
    if witness is None:
        return out.verdict(ok, {"witness": None})
    text = format_sentence(witness)
    return out.verdict(ok, {"witness": text}, f"{str(ok).lower()}\n{text}")


def cmd_partition(a, out):
    parts = partition_e_categorical(_family(a.family))
    text = "\n".join(f"# part {i + 1}\n{format_family(p)}" for i, p in enumerate(parts))
    out.emit(text, {"parts": [_family_json(p) for p in parts]})
    return EXIT_OK


def cmd_witnesses(a, out):
    found = spectrum_witnesses(_family(a.family), a.k)
    if found is None:
        out.emit("none", {"witnesses": None})
        return EXIT_NO
    texts = [format_sentence(s) for s in found]
    out.emit("\n".join(texts), {"witnesses": texts})
    return EXIT_OK


def cmd_approx(a, out):
    if (a.theory is None) == (a.family is None):
        raise MonapproxError("approx needs exactly one of --theory or --family")
    if a.theory is not None:
        if a.n is None:
            raise MonapproxError("approx --theory needs -n")
        t = finite_approximation(_theory(a.theory, _signature(a.signature)), a.n)
        out.emit(str(t), _theory_json(t))
        return EXIT_OK
    found = approximating_subfamily(_family(a.family), a.tie_break)
    if found is None:
        out.emit("none", {"subfamily": None, "theory": None})
        return EXIT_NO
    sub, t = found
    out.emit(f"{t}\n{format_family(sub)}", {"theory": _theory_json(t), "subfamily": _family_json(sub)})
    return EXIT_OK


def cmd_pseudofinite(a, out):
    return out.verdict(is_pseudo_finite(_theory(a.theory, _signature(a.signature))))


def cmd_finax(a, out):
    ok, s = is_finitely_axiomatizable(_theory(a.theory, _signature(a.signature)))
    if s is None:
        return out.verdict(ok, {"sentence": None})
    text = format_sentence(s)
    return out.verdict(ok, {"sentence": text}, f"{str(ok).lower()}\n{text}")


def cmd_restrict(a, out):
    t = _theory(a.theory, _signature(a.signature))
    target = Signature.of(a.target) if a.target is not None else t.sig
    r = restrict_and_pad(t, Signature.of(a.sub), target, flip=not a.no_flip)
    out.emit(str(r), _theory_json(r))
    return EXIT_OK


def cmd_oracle(a, out):
    found = search_counterexample(a.property, a.budget, a.seed)
    if found is None:
        out.emit("no counterexample", {"property": a.property, "budget": a.budget, "counterexample": None})
        return EXIT_OK
    art = found.artifact()
    out.emit(art, {"property": a.property, "budget": a.budget, "counterexample": art})
    return EXIT_NO


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="monapprox", description="Approximations of theories of unary predicates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    def fam(sp):
        sp.add_argument("family", help="family file ('-' for stdin)")

    def sig_opt(sp):
        sp.add_argument("--signature", help="space-separated predicate names")

    sp = add("qe", cmd_qe, "normal form of a sentence")
    sp.add_argument("sentence")
    sig_opt(sp)

    sp = add("holds", cmd_holds, "does a theory contain a sentence (exit 1 if not)")
    sp.add_argument("--theory", required=True, help="inline 'cell=card,...' or a file")
    sp.add_argument("--sentence", required=True)
    sig_opt(sp)

    fam(add("closure", cmd_closure, "E-closure of a family"))
    fam(add("accpoints", cmd_accpoints, "accumulation points of a family"))
    fam(add("espectrum", cmd_espectrum, "number of new accumulation points"))
    fam(add("eclosed", cmd_eclosed, "is the family E-closed (exit 1 if not)"))

    sp = add("approxby", cmd_approxby, "is a theory approximated by a family (exit 1 if not)")
    fam(sp)
    sp.add_argument("theory")

    sp = add("genset", cmd_genset, "least generating set, or check a generating pair")
    sp.add_argument("action", choices=("least", "check"))
    sp.add_argument("family", help="family file (the candidate for 'check')")
    sp.add_argument("whole", nargs="?", help="E-closed family file for 'check'")

    sp = add("isolate", cmd_isolate, "sentence isolating a theory in a family (exit 1 if none)")
    fam(sp)
    sp.add_argument("theory")

    fam(add("markers", cmd_markers, "expand a finite family with marker predicates"))

    sp = add("buildacc", cmd_buildacc, "construct an accumulation point of an infinite family")
    fam(sp)
    sp.add_argument("--tie-break", choices=TIE_BREAKS, default=TIE_BREAKS[0])

    fam(add("ecategorical", cmd_ecategorical, "exactly one accumulation point (exit 1 if not)"))

    sp = add("eminimal", cmd_eminimal, "every sentence splits off a finite part (exit 1 if not)")
    fam(sp)
    sp.add_argument("--bounded", action="store_true", help="direct check over basic sentences, with witness")

    fam(add("partition", cmd_partition, "split an E-closed family into e-categorical parts"))

    sp = add("witnesses", cmd_witnesses, "pairwise inconsistent sentences with infinite neighbourhoods")
    fam(sp)
    sp.add_argument("-k", type=int, required=True)

    sp = add("approx", cmd_approx, "finite approximation of a theory, or approximating subfamily")
    sp.add_argument("--theory")
    sp.add_argument("-n", type=int)
    sp.add_argument("--family")
    sp.add_argument("--tie-break", choices=TIE_BREAKS, default=TIE_BREAKS[0])
    sig_opt(sp)

    for name, func, text in (
        ("pseudofinite", cmd_pseudofinite, "is a theory pseudo-finite (exit 1 if not)"),
        ("finax", cmd_finax, "is a theory finitely axiomatizable (exit 1 if not)"),
    ):
        sp = add(name, func, text)
        sp.add_argument("theory")
        sig_opt(sp)

    sp = add("restrict", cmd_restrict, "restrict a theory and pad to a target signature")
    sp.add_argument("theory")
    sp.add_argument("--sub", required=True, help="kept predicates")
    sp.add_argument("--target", help="target signature (default: the theory's)")
    sp.add_argument("--no-flip", action="store_true", help="pad new predicates as empty")
    sig_opt(sp)

    sp = add("oracle", cmd_oracle, "search for a counterexample to a property")
    sp.add_argument("action", choices=("check",))
    sp.add_argument("property", choices=sorted(PROPERTIES))
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.json)
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (MonapproxError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
