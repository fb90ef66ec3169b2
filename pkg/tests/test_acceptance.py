"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""

import random
import sys

import pytest

from monapprox.boxes import CardCount, OMEGA
from monapprox.categorical import (
    TIE_BREAKS,
    build_accumulation_point,
    e_minimal_bounded,
    is_e_categorical,
    partition_e_categorical,
    spectrum_witnesses,
)
from monapprox.closure import (
    accumulation_count,
    accumulation_points,
    approximated_theory,
    closure,
    e_spectrum,
    is_accumulation_point,
    is_approximated_by,
    is_e_closed,
)
from monapprox.errors import FiniteFamilyError
from monapprox.families import (
    Family,
    difference,
    enumerate_members,
    family_cardinality,
    family_member,
    finite_model_theories,
    intersection,
    is_subfamily,
    neighborhood_count,
    parse_family,
    same_set,
    union,
)
from monapprox.generating import (
    is_generating,
    is_isolated,
    isolated_points,
    least_generating_set,
    t_complete_sentence,
)
from monapprox.logic import BinOp, Signature
from monapprox.normalform import holds, to_normal_form
from monapprox.oracle import (
    brute_accumulation_check,
    brute_qe_check,
    enumerate_sentences,
    random_family,
    random_theory,
)
from monapprox.theories import is_pseudo_finite

from conftest import SIG_P

EVENS = parse_family("signature\nbox\n cell u = 2.. step 2\n")
ODDS = parse_family("signature\nbox\n cell u = 1.. step 2\n")


def report(capsys, number, name, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail}")
    assert ok, detail


def infinite_families(rng, count, **kw):
    out = []
    while len(out) < count:
        f = random_family(rng, **kw)
        if family_cardinality(f).is_infinite:
            out.append(f)
    return out


def test_qe_soundness(capsys):
    sentences = mismatches = 0
    for symbols in [(), ("P",), ("P", "Q")]:
        sig = Signature(symbols)
        for s in enumerate_sentences(sig, 2):
            sentences += 1
            ok, _ = brute_qe_check(s, sig, max_size=4)
            mismatches += not ok
    ok = sentences >= 500 and mismatches == 0
    report(capsys, 1, "qe soundness", ok, f"{sentences} sentences, sizes <= 4, {mismatches} mismatches")


def test_accumulation_agreement(capsys):
    rng = random.Random(1001)
    pairs = mismatches = positives = 0
    while pairs < 600:
        f = random_family(rng)
        # mix random candidates with members and limit points so both verdicts occur
        pool = [random_theory(rng, f.sig)]
        pool += enumerate_members(f, 4)[:1]
        pool += enumerate_members(accumulation_points(f), 4)[:1]
        t = rng.choice(pool)
        verdict = is_accumulation_point(f, t)
        pairs += 1
        positives += verdict
        mismatches += verdict != brute_accumulation_check(f, t, bound=50)
    ok = mismatches == 0
    report(capsys, 2, "accumulation agreement", ok,
           f"{pairs} pairs ({positives} accumulation points), {mismatches} mismatches")


def test_closure_laws(capsys):
    rng = random.Random(1002)
    pairs = violations = 0
    for _ in range(320):
        f1 = random_family(rng)
        f2 = random_family(rng, len(f1.sig.symbols))
        pairs += 1
        c1, c2, c12 = closure(f1), closure(f2), closure(union(f1, f2))
        checks = [
            same_set(c12, union(c1, c2)),
            is_subfamily(f1, c1),
            is_subfamily(c1, c12),
            same_set(closure(c1), c1),
        ]
        if is_subfamily(f1, f2):
            checks.append(is_subfamily(c1, c2))
        violations += not all(checks)
    report(capsys, 3, "closure laws", violations == 0, f"{pairs} pairs, {violations} violations")


def test_approximation_chain(capsys):
    rng = random.Random(1003)
    families = violations = 0
    for _ in range(220):
        f = random_family(rng)
        families += 1
        c = closure(f)
        candidates = [random_theory(rng, f.sig) for _ in range(4)]
        candidates += enumerate_members(c, 3)[:3]
        for t in candidates:
            expected = not family_member(f, t) and family_member(c, t)
            violations += is_approximated_by(t, f) != expected
        sample = approximated_theory(f)
        violations += (sample is not None) == is_e_closed(f)
        if sample is not None:
            violations += not is_approximated_by(sample, f)
            violations += not family_cardinality(f).is_infinite
    report(capsys, 4, "approximation chain", violations == 0, f"{families} families, {violations} violations")


def test_pseudo_finite(capsys):
    rng = random.Random(1004)
    vectors = violations = 0
    for _ in range(150):
        sig = Signature(("P", "Q")[: rng.randint(0, 2)])
        t = random_theory(rng, sig)
        vectors += 1
        violations += is_pseudo_finite(t) != is_approximated_by(t, finite_model_theories(sig))
    report(capsys, 5, "pseudo-finite", violations == 0, f"{vectors} vectors, {violations} violations")


def _minimal_by_removal(sub, whole, limit=6):
    # removing any one of the first few members, or of the first few limit points, must break generation
    candidates = enumerate_members(sub, limit)[:limit]
    candidates += enumerate_members(intersection(sub, accumulation_points(whole)), limit)[:limit]
    for t in candidates:
        if is_generating(difference(sub, Family.of_theories(sub.sig, [t])), whole):
            return False
    return True


def _disjunction_clauses(whole):
    iso = enumerate_members(isolated_points(whole), 4)[:3]
    if not iso:
        return True
    sentences = [t_complete_sentence(t, whole) for t in iso]
    disj = sentences[0]
    for s in sentences[1:]:
        disj = BinOp("|", disj, s)
    if neighborhood_count(whole, disj) != CardCount(len(iso)):
        return False
    for a in range(len(sentences)):
        for b in range(a + 1, len(sentences)):
            # complete sentences of distinct points share no member of the family
            if neighborhood_count(whole, BinOp("&", sentences[a], sentences[b])).value != 0:
                return False
    for t in enumerate_members(whole, 4):
        # a member satisfies the disjunction iff it is one of the isolated points used
        if holds(t, disj) != (t in iso):
            return False
    for t in enumerate_members(accumulation_points(whole), 4)[:2]:
        if t_complete_sentence(t, whole) is not None or holds(t, disj):
            return False
    return True


def test_generating_sets(capsys):
    rng = random.Random(1006)
    pairs = violations = 0
    while pairs < 120:
        whole = closure(random_family(rng, max_boxes=2))
        iso = isolated_points(whole)
        acc = accumulation_points(whole)
        subs = [iso, whole]
        extra = enumerate_members(acc, 3)[:1]
        if extra:
            subs.append(union(iso, Family.of_theories(whole.sig, extra)))
        least = least_generating_set(whole)
        violations += least is None or not same_set(least, iso)
        for sub in subs:
            if not is_generating(sub, whole):
                violations += 1
                continue
            pairs += 1
            is_least = same_set(sub, least)
            members = enumerate_members(sub, 4)[:8]
            isolated_in_sub = all(is_isolated(sub, t) for t in members) and \
                intersection(sub, acc).is_empty
            isolated_in_whole = all(is_isolated(whole, t) for t in members) and \
                is_subfamily(sub, iso)
            minimal = _minimal_by_removal(sub, whole)
            violations += len({is_least, minimal, isolated_in_sub, isolated_in_whole}) != 1
        violations += not _disjunction_clauses(whole)
    report(capsys, 6, "generating sets", violations == 0, f"{pairs} pairs, {violations} violations")


def test_build_accumulation_point(capsys):
    rng = random.Random(1007)
    infinite = finite = violations = 0
    for _ in range(300):
        f = random_family(rng)
        if family_cardinality(f).is_infinite:
            infinite += 1
            for tb in TIE_BREAKS:
                t = build_accumulation_point(f, tb)
                violations += not brute_accumulation_check(f, t)
        else:
            finite += 1
            try:
                build_accumulation_point(f)
                violations += 1
            except FiniteFamilyError:
                pass
    ok = violations == 0 and infinite > 0 and finite > 0
    report(capsys, 7, "accumulation point construction", ok,
           f"{infinite} infinite, {finite} finite families, {violations} violations")


def test_e_minimality_and_partition(capsys):
    rng = random.Random(1008)
    violations = partitions = 0
    families = infinite_families(rng, 220)
    for f in families:
        ok, witness = e_minimal_bounded(f)
        violations += ok != is_e_categorical(f)
        if witness is not None:
            violations += not neighborhood_count(f, witness).is_infinite
        c = closure(f)
        count = accumulation_count(c)
        if count.is_infinite or count.value == 0:
            continue
        partitions += 1
        parts = partition_e_categorical(c)
        cover = parts[0]
        for p in parts[1:]:
            cover = union(cover, p)
        violations += len(parts) != count.value
        violations += not same_set(cover, c)
        violations += not all(is_e_categorical(p) for p in parts)
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                violations += not intersection(parts[a], parts[b]).is_empty
    point = accumulation_points(EVENS)
    split = (
        e_spectrum(EVENS) == e_spectrum(ODDS) == e_spectrum(union(EVENS, ODDS)) == CardCount(1)
        and same_set(point, accumulation_points(ODDS))
        and same_set(point, accumulation_points(union(EVENS, ODDS)))
    )
    violations += not split
    report(capsys, 8, "e-minimality and partition", violations == 0,
           f"{len(families)} infinite families, {partitions} partitions, even/odd split "
           f"{'ok' if split else 'broken'}, {violations} violations")


def test_spectrum_bounds(capsys, f_two, f_box):
    problems = []
    if e_spectrum(f_two) != CardCount(2):
        problems.append("F_two spectrum")
    if e_spectrum(f_box) != OMEGA:
        problems.append("F_box spectrum")
    for name, f, k in (("F_two", f_two, 2), ("F_box", f_box, 5)):
        ws = spectrum_witnesses(f, k)
        if ws is None or len(ws) != k:
            problems.append(f"{name} witnesses")
            continue
        for i, w in enumerate(ws):
            if not neighborhood_count(f, w).is_infinite:
                problems.append(f"{name} witness {i} finite")
            for v in ws[i + 1:]:
                if not to_normal_form(BinOp("&", w, v), SIG_P).is_false:
                    problems.append(f"{name} witnesses {i} overlap")
    if spectrum_witnesses(f_two, 3) is not None:
        problems.append("F_two has a third witness")
    detail = "F_two = 2, F_box = omega, witnesses pairwise inconsistent" if not problems else ", ".join(problems)
    report(capsys, 9, "spectrum bounds", not problems, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
