import itertools

import pytest
from hypothesis import given, strategies as st

from multirec.interval_core import (
    DISJOINT_RELATIONS,
    AllenRelation as R,
    DisjointPair,
    DurationScale,
    Interval,
    InvalidInterval,
    InvalidTimeMap,
    IrrationalOrNonDecimal,
    NonPositiveDuration,
    NotMeeting,
    TickOverflow,
    TimeMap,
    aux,
    common,
    cover,
    cover_star,
    is_disjoint,
    is_sub,
    is_within,
    normalize_durations,
    relate,
)


def I(a, b):
    return Interval(a, b)


@st.composite
def intervals(draw, lo=-20, hi=20):
    a = draw(st.integers(lo, hi - 1))
    b = draw(st.integers(a + 1, hi))
    return Interval(a, b)


def test_rejects_empty_and_reversed():
    with pytest.raises(InvalidInterval):
        I(3, 3)
    with pytest.raises(InvalidInterval):
        I(4, 2)
    with pytest.raises(InvalidInterval):
        Interval(0.5, 2)


def test_overflow_is_an_error():
    with pytest.raises(TickOverflow):
        Interval(0, 2**63)
    with pytest.raises(TickOverflow):
        I(2**63 - 2, 2**63 - 1).shift(5)


@pytest.mark.parametrize("i, j, rel", [
    (I(0, 2), I(2, 5), R.MEETS),
    (I(0, 5), I(1, 3), R.CONTAINS),
    (I(0, 3), I(2, 5), R.OVERLAPS),
    (I(0, 2), I(5, 7), R.BEFORE),
    (I(0, 2), I(0, 5), R.STARTS),
    (I(3, 5), I(0, 5), R.FINISHES),
    (I(0, 5), I(0, 5), R.EQUALS),
])
def test_relate_examples(i, j, rel):
    assert relate(i, j) is rel
    assert relate(j, i) is rel.converse


def test_disjoint_examples():
    assert is_disjoint(I(0, 2), I(2, 5))
    assert not is_disjoint(I(0, 3), I(2, 5))
    assert is_disjoint(I(0, 2), I(5, 7))


def test_within_and_sub():
    assert is_within(I(0, 2), I(0, 5))
    assert not is_within(I(0, 5), I(0, 5))
    assert is_sub(I(0, 5), I(0, 5))
    assert not is_within(I(1, 3), I(2, 6))


def test_common_examples():
    assert common(I(0, 4), I(2, 6)) == I(2, 4)
    assert common(I(0, 10), I(3, 5)) == I(3, 5)
    with pytest.raises(DisjointPair):
        common(I(0, 2), I(2, 4))


def test_aux_examples():
    assert aux(I(0, 4), I(2, 6)) == {I(0, 2), I(4, 6)}
    assert aux(I(0, 2), I(5, 7)) == {I(2, 5)}
    assert aux(I(0, 2), I(2, 5)) == set()
    assert aux(I(1, 4), I(1, 4)) == set()


def test_cover_examples():
    assert cover(I(0, 2), I(2, 5)) == I(0, 5)
    with pytest.raises(NotMeeting):
        cover(I(0, 2), I(3, 5))
    with pytest.raises(NotMeeting):
        cover(I(0, 2), I(1, 5))


def test_cover_star_examples():
    assert cover_star(TimeMap([I(0, 2)])) == I(0, 2)
    assert cover_star(TimeMap([I(0, 2), I(2, 5), I(5, 6)])) == I(0, 6)
    assert cover_star(TimeMap([I(-3, 0), I(0, 4)])) == I(-3, 4)


def test_time_map_is_one_based_and_contiguous():
    tm = TimeMap([I(0, 2), I(2, 5), I(5, 6)])
    assert tm[1] == I(0, 2) and tm[3] == I(5, 6) and tm.dim == 3
    assert tm.head() == I(0, 2)
    assert list(tm.tail()) == [I(2, 5), I(5, 6)]
    assert TimeMap([I(0, 1)]).tail() is None
    with pytest.raises(IndexError):
        tm[0]
    with pytest.raises(InvalidTimeMap):
        TimeMap([I(0, 2), I(3, 4)])
    with pytest.raises(InvalidTimeMap):
        TimeMap([])


def test_normalize_examples():
    assert normalize_durations(["12", "13.5"]) == ([120, 135], DurationScale(1))
    assert normalize_durations(["3", "7"]) == ([3, 7], DurationScale(0))
    with pytest.raises(NonPositiveDuration):
        normalize_durations(["0"])
    with pytest.raises(NonPositiveDuration):
        normalize_durations(["-1.5"])


@pytest.mark.parametrize("bad", ["pi", "1/3", "1e3", "nan", "inf", "", "1.", True, 1.5])
def test_normalize_rejects_non_decimal(bad):
    with pytest.raises(IrrationalOrNonDecimal):
        normalize_durations([bad])


@given(st.integers(0, 6), st.integers(-10**9, 10**9))
def test_scale_render_round_trip(k, ticks):
    scale = DurationScale(k)
    assert scale.to_ticks(scale.render(ticks)) == ticks


# Properties over an exhaustive small grid.

GRID = [I(a, b) for a in range(8) for b in range(a + 1, 8)]


def test_partition_exhaustive():
    for i, j in itertools.product(GRID, GRID):
        holds = [r for r in R if _holds(i, j, r)]
        assert holds == [relate(i, j)]


def _holds(i, j, r):
    # Endpoint definitions, written independently of relate().
    return {
        R.BEFORE: i.end < j.start,
        R.AFTER: j.end < i.start,
        R.MEETS: i.end == j.start,
        R.MET_BY: j.end == i.start,
        R.OVERLAPS: i.start < j.start < i.end < j.end,
        R.OVERLAPPED_BY: j.start < i.start < j.end < i.end,
        R.STARTS: i.start == j.start and i.end < j.end,
        R.STARTED_BY: i.start == j.start and j.end < i.end,
        R.DURING: j.start < i.start and i.end < j.end,
        R.CONTAINS: i.start < j.start and j.end < i.end,
        R.FINISHES: i.end == j.end and j.start < i.start,
        R.FINISHED_BY: i.end == j.end and i.start < j.start,
        R.EQUALS: i == j,
    }[r]


@given(intervals(), intervals())
def test_converse_and_symmetric_disjoint(i, j):
    assert relate(i, j) is relate(j, i).converse
    assert is_disjoint(i, j) == is_disjoint(j, i)
    assert is_disjoint(i, j) == (relate(i, j) in DISJOINT_RELATIONS)
    assert is_disjoint(i, j) == (i.end <= j.start or j.end <= i.start)


@given(intervals(), intervals())
def test_common_is_maximal_common_sub(i, j):
    if is_disjoint(i, j):
        return
    m = common(i, j)
    assert is_sub(m, i) and is_sub(m, j)
    # No strict super-interval of m (within a margin) is a sub of both.
    for a in range(m.start - 3, m.start + 1):
        for b in range(m.end, m.end + 4):
            m1 = Interval(a, b)
            if is_within(m, m1):
                assert not (is_sub(m1, i) and is_sub(m1, j))


@given(intervals(), intervals())
def test_aux_structure(i, j):
    rel = relate(i, j)
    got = aux(i, j)
    expected_size = {R.EQUALS: 0, R.MEETS: 0, R.MET_BY: 0, R.BEFORE: 1, R.AFTER: 1,
                     R.STARTS: 1, R.STARTED_BY: 1, R.FINISHES: 1, R.FINISHED_BY: 1,
                     R.OVERLAPS: 2, R.OVERLAPPED_BY: 2, R.DURING: 2, R.CONTAINS: 2}[rel]
    assert len(got) == expected_size
    for m in got:
        if is_disjoint(i, j):
            # gap: met by one input and meets the other
            assert {relate(m, i), relate(m, j)} == {R.MEETS, R.MET_BY}
        else:
            touches = {relate(m, i), relate(m, j)} & {R.MEETS, R.MET_BY}
            bounds = {relate(m, i), relate(m, j), relate(i, m), relate(j, m)} & {
                R.STARTS, R.FINISHES}
            assert touches and bounds
            assert is_disjoint(m, common(i, j))


@given(intervals(), st.integers(1, 10))
def test_cover_clauses(i, n):
    j = Interval(i.end, i.end + n)
    c = cover(i, j)
    assert relate(i, c) is R.STARTS and relate(j, c) is R.FINISHES


@given(st.lists(st.integers(1, 5), min_size=1, max_size=6), st.integers(-10, 10))
def test_cover_star_clauses(lengths, start):
    ivs, t = [], start
    for n in lengths:
        ivs.append(Interval(t, t + n))
        t += n
    tm = TimeMap(ivs)
    c = cover_star(tm)
    if tm.dim == 1:
        assert c == tm[1]
    else:
        assert relate(tm[1], c) is R.STARTS
        assert relate(tm[tm.dim], c) is R.FINISHES
