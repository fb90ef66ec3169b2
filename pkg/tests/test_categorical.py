import itertools
import random

import pytest

from monapprox.boxes import CardCount
from monapprox.categorical import (
    TIE_BREAKS,
    approximating_subfamily,
    build_accumulation_point,
    e_minimal_bounded,
    is_e_categorical,
    is_e_minimal,
    partition_e_categorical,
    spectrum_witnesses,
)
from monapprox.closure import (
    accumulation_count,
    accumulation_points,
    closure,
    e_spectrum,
    is_accumulation_point,
    is_approximated_by,
)
from monapprox.errors import FiniteFamilyError, NotEClosedError, PreconditionError
from monapprox.families import (
    enumerate_members,
    family_cardinality,
    family_member,
    intersection,
    neighborhood_count,
    parse_family,
    same_set,
    union,
)
from monapprox.logic import INF, BinOp, Not, TheoryVector, format_sentence
from monapprox.normalform import holds, to_normal_form
from monapprox.oracle import random_family

from conftest import EMPTY, SIG_P

EVENS = parse_family("signature\nbox\n cell u = 2.. step 2\n")
ODDS = parse_family("signature\nbox\n cell u = 1.. step 2\n")
FINITE = parse_family("signature P\nbox\n cell !P = {1,2}\n cell P = {0,4}\n")


class TestBuildAccumulationPoint:
    def test_pure(self, f_pure):
        assert build_accumulation_point(f_pure, "prefer-positive") == TheoryVector(EMPTY, (INF,))

    def test_two_depends_on_tie_break(self, f_two):
        pos = build_accumulation_point(f_two, "prefer-positive")
        neg = build_accumulation_point(f_two, "prefer-negative")
        assert {pos, neg} == {TheoryVector(SIG_P, (0, INF)), TheoryVector(SIG_P, (INF, 0))}
        assert is_accumulation_point(f_two, pos) and is_accumulation_point(f_two, neg)

    def test_box(self, f_box):
        for tb in TIE_BREAKS:
            t = build_accumulation_point(f_box, tb)
            assert t.has_inf and family_member(accumulation_points(f_box), t)

    def test_refuses_finite(self):
        with pytest.raises(FiniteFamilyError):
            build_accumulation_point(FINITE)

    def test_rejects_unknown_tie_break(self, f_pure):
        with pytest.raises(ValueError):
            build_accumulation_point(f_pure, "coin")


class TestApproximatingSubfamily:
    def test_pure(self, f_pure):
        sub, t = approximating_subfamily(f_pure)
        assert same_set(sub, f_pure) and t == TheoryVector(EMPTY, (INF,))

    def test_removal_matters(self, f_pure):
        c = closure(f_pure)
        sub, t = approximating_subfamily(c)
        assert not same_set(sub, c)
        assert is_approximated_by(t, sub)

    def test_finite(self):
        assert approximating_subfamily(FINITE) is None


class TestCategoricity:
    def test_examples(self, f_pure, f_two):
        assert is_e_categorical(f_pure)
        assert not is_e_categorical(f_two)
        assert is_e_minimal(f_pure)
        assert not is_e_minimal(f_two)
        assert not is_e_minimal(FINITE) and not is_e_categorical(FINITE)

    def test_bounded_witness(self, f_two):
        ok, witness = e_minimal_bounded(f_two)
        assert not ok
        assert format_sentence(witness) == "forall x. P(x)"
        assert neighborhood_count(f_two, witness).is_infinite
        assert neighborhood_count(f_two, Not(witness)).is_infinite

    def test_infinite_subfamilies_inherit(self, f_pure):
        pieces = [
            EVENS,
            ODDS,
            parse_family("signature\nbox\n cell u = 5..\n"),
            parse_family("signature\nbox\n cell u = {1,4} | 7.. step 3\n"),
        ]
        point = accumulation_points(f_pure)
        for p in pieces:
            assert is_e_categorical(p)
            assert same_set(accumulation_points(p), point)

    def test_bounded_check_matches(self):
        rng = random.Random(31)
        seen = 0
        while seen < 60:
            f = random_family(rng)
            if not family_cardinality(f).is_infinite:
                continue
            seen += 1
            ok, witness = e_minimal_bounded(f)
            assert ok == is_e_categorical(f)
            if witness is not None:
                assert neighborhood_count(f, witness).is_infinite
                assert neighborhood_count(f, Not(witness)).is_infinite


class TestPartition:
    def test_two(self, f_two):
        c = closure(f_two)
        parts = partition_e_categorical(c)
        assert len(parts) == 2
        assert intersection(parts[0], parts[1]).is_empty
        assert same_set(union(parts[0], parts[1]), c)
        assert all(is_e_categorical(p) for p in parts)
        points = [set(enumerate_members(accumulation_points(p), 3)) for p in parts]
        assert points[0] | points[1] == {TheoryVector(SIG_P, (0, INF)), TheoryVector(SIG_P, (INF, 0))}

    def test_single_part(self, f_pure):
        c = closure(f_pure)
        (part,) = partition_e_categorical(c)
        assert same_set(part, c)

    def test_preconditions(self, f_pure, f_box):
        with pytest.raises(NotEClosedError):
            partition_e_categorical(f_pure)
        with pytest.raises(PreconditionError):
            partition_e_categorical(FINITE)
        with pytest.raises(PreconditionError):
            partition_e_categorical(closure(f_box))

    def test_arbitrary_split_can_exceed_spectrum(self, f_pure):
        # evens and odds are each e-categorical, but share their accumulation point
        assert is_e_categorical(EVENS) and is_e_categorical(ODDS)
        assert e_spectrum(union(EVENS, ODDS)) == CardCount(1)
        assert same_set(accumulation_points(EVENS), accumulation_points(ODDS))


class TestWitnesses:
    def test_two(self, f_two):
        ws = spectrum_witnesses(f_two, 2)
        assert [format_sentence(w) for w in ws] == [
            "(forall x. P(x)) & exists x1. P(x1)",
            "(exists x1. !P(x1)) & forall x. !P(x)",
        ]
        for w in ws:
            assert neighborhood_count(f_two, w).is_infinite
        assert to_normal_form(BinOp("&", ws[0], ws[1]), SIG_P).is_false

    def test_pure_has_no_two(self, f_pure):
        assert spectrum_witnesses(f_pure, 2) is None
        assert len(spectrum_witnesses(f_pure, 1)) == 1

    def test_box_pins_the_first_cell(self, f_box):
        ws = spectrum_witnesses(f_box, 3)
        for k, w in enumerate(ws):
            assert neighborhood_count(f_box, w).is_infinite
            assert holds(TheoryVector(SIG_P, (k, 10)), w)
            assert not holds(TheoryVector(SIG_P, (k + 1, 10)), w)
        for a, b in itertools.combinations(ws, 2):
            assert to_normal_form(BinOp("&", a, b), SIG_P).is_false

    def test_lower_bound(self):
        rng = random.Random(32)
        for _ in range(30):
            f = random_family(rng)
            for k in (1, 2, 3):
                ws = spectrum_witnesses(f, k)
                count = accumulation_count(f)
                assert (ws is not None) == (count >= k)
