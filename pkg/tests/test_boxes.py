import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from monapprox.boxes import (
    ANY,
    EMPTY as EMPTY_SET,
    NAT,
    OMEGA,
    Box,
    CardCount,
    ValueSet,
    box_cardinality,
    box_difference,
    box_intersect,
    box_member,
    box_members,
    boxes_subset,
    format_valueset,
    parse_valueset,
    uncovered_vector,
)
from monapprox.errors import LiteralSyntaxError
from monapprox.logic import INF, TheoryVector

from conftest import EMPTY, SIG_P


@st.composite
def valuesets(draw):
    explicit = draw(st.frozensets(st.integers(0, 8), max_size=5))
    start = draw(st.integers(0, 8))
    period = draw(st.integers(0, 4))
    residues = draw(st.frozensets(st.integers(0, 3), max_size=3)) if period else ()
    return ValueSet.make(explicit, start, period, residues, draw(st.booleans()))


def horizon(*sets):
    lcm = math.lcm(*(s.period or 1 for s in sets))
    top = max(max(s.explicit, default=0) for s in sets)
    return max(top, max(s.start for s in sets)) + 3 * lcm + 2


def brute(vs, bound):
    return {x for x in range(bound + 1) if x in vs} | ({INF} if vs.inf else set())


class TestValueSetExamples:
    def test_evens_meet_ray(self):
        evens = ValueSet.progression(0, 2)
        got = evens & ValueSet.ray(5)
        assert got == ValueSet.progression(6, 2)
        assert [x for x in got.iter_finite(12)] == [6, 8, 10, 12]

    def test_complement_of_empty(self):
        assert EMPTY_SET.complement() == ANY

    def test_count(self):
        assert ValueSet.finite([1, 3, 5]).count() == CardCount(3)
        assert NAT.count() == OMEGA

    def test_canonical(self):
        a = ValueSet.make({0, 2, 4}, 6, 2, {0})
        assert a == ValueSet.progression(0, 2)
        assert ValueSet.make((), 0, 4, {0, 2}) == ValueSet.progression(0, 2)


class TestValueSetText:
    @pytest.mark.parametrize(
        "text, expect",
        [
            ("any", ANY),
            ("{1,3,5}", ValueSet.finite([1, 3, 5])),
            ("1..", ValueSet.ray(1)),
            ("2..5", ValueSet.interval(2, 5)),
            ("0.. step 2", ValueSet.progression(0, 2)),
            ("{2,4} | 6.. step 2", ValueSet.progression(2, 2)),
            ("inf", ValueSet.make(inf=True)),
            ("1.. | inf", ValueSet.ray(1, inf=True)),
        ],
    )
    def test_parse(self, text, expect):
        assert parse_valueset(text) == expect

    @pytest.mark.parametrize("text", ["n..", "{1,", "1.. step 0", "5..2", ""])
    def test_rejects(self, text):
        with pytest.raises(LiteralSyntaxError):
            parse_valueset(text)

    @given(valuesets())
    def test_round_trip(self, vs):
        assert parse_valueset(format_valueset(vs)) == vs


class TestValueSetAlgebra:
    @given(valuesets(), valuesets())
    def test_against_enumeration(self, a, b):
        n = horizon(a, b)
        A, B = brute(a, n), brute(b, n)
        assert brute(a & b, n) == A & B
        assert brute(a | b, n) == A | B
        assert brute(a - b, n) == A - B
        assert brute(a.complement(), n) == (set(range(n + 1)) | {INF}) - A

    @given(valuesets(), valuesets())
    def test_structural_equality_is_set_equality(self, a, b):
        n = horizon(a, b)
        assert (a == b) == (brute(a, n) == brute(b, n))

    @given(valuesets())
    def test_closure(self, a):
        c = a.closure()
        assert c.inf == (a.inf or a.finite_part_infinite)
        assert c.finite_only() == a.finite_only()


class TestBoxes:
    def test_membership(self):
        b = Box.from_cells(SIG_P, {"!P": ValueSet.finite([0]), "P": ValueSet.ray(1)})
        assert box_member(b, TheoryVector(SIG_P, (0, 7)))
        assert not box_member(b, TheoryVector(SIG_P, (1, 7)))

    def test_zero_vector_excluded(self):
        b = Box(EMPTY, (NAT,))
        assert list(box_members(b, 2)) == [TheoryVector(EMPTY, (1,)), TheoryVector(EMPTY, (2,))]
        assert Box(EMPTY, (ValueSet.finite([0]),)).is_empty

    def test_intersection(self):
        a = Box(EMPTY, (ValueSet.interval(1, 5),))
        b = Box(EMPTY, (ValueSet.interval(3, 9),))
        meet = box_intersect(a, b)
        assert meet.sets[0] == ValueSet.finite([3, 4, 5])
        assert box_cardinality(meet) == CardCount(3)

    def test_cover_by_parities(self):
        b = Box(EMPTY, (ValueSet.ray(1),))
        odds, evens = ValueSet.progression(1, 2), ValueSet.progression(2, 2)
        assert boxes_subset(b, [Box(EMPTY, (odds,)), Box(EMPTY, (evens,))])
        missing = uncovered_vector(b, [Box(EMPTY, (odds,))])
        assert missing is not None and missing.cards[0] % 2 == 0

    def test_cardinality_with_infinity(self):
        b = Box(SIG_P, (ValueSet.finite([0, 1]), ValueSet.finite([2], inf=True)))
        assert box_cardinality(b) == CardCount(4)
        assert len(list(box_members(b, 10))) == 4

    @given(valuesets(), valuesets(), valuesets(), valuesets())
    def test_difference_is_disjoint_and_exact(self, a, b, c, d):
        x, y = Box(SIG_P, (a, b)), Box(SIG_P, (c, d))
        pieces = box_difference(x, y)
        n = horizon(a, b, c, d)
        got = [set(box_members(p, n)) for p in pieces]
        for p, q in itertools.combinations(got, 2):
            assert not p & q
        want = set(box_members(x, n)) - set(box_members(y, n))
        assert set().union(*got) == want

    @given(valuesets(), valuesets(), st.lists(st.tuples(valuesets(), valuesets()), max_size=3))
    def test_subset_agrees_with_sampling(self, a, b, cover):
        box = Box(SIG_P, (a, b))
        boxes = [Box(SIG_P, c) for c in cover]
        n = horizon(a, b, *(s for c in cover for s in c))
        inside = all(any(box_member(c, t) for c in boxes) for t in box_members(box, n))
        verdict = boxes_subset(box, boxes)
        if verdict:
            assert inside
        else:
            t = uncovered_vector(box, boxes)
            assert box_member(box, t) and not any(box_member(c, t) for c in boxes)
