"""Integer-tick intervals and Allen's interval algebra.

Intervals are half-open ``[start, end)`` over signed integer ticks, so two
intervals *meet* exactly when one's end equals the other's start.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

TICK_MIN = -(2**63)
TICK_MAX = 2**63 - 1


class IntervalError(ValueError):
    """Base class for errors raised by the interval layer."""


class InvalidInterval(IntervalError):
    pass


class DisjointPair(IntervalError):
    pass


class NotMeeting(IntervalError):
    pass


class InvalidTimeMap(IntervalError):
    pass


class NonPositiveDuration(IntervalError):
    pass


class IrrationalOrNonDecimal(IntervalError):
    pass


class TickOverflow(OverflowError):
    """A tick value left the signed 64-bit range."""


def checked(value: int) -> int:
    """Return ``value`` unchanged, or raise if it does not fit in 64 bits."""
    if not TICK_MIN <= value <= TICK_MAX:
        raise TickOverflow(f"tick value {value} outside signed 64-bit range")
    return value


@dataclass(frozen=True, order=True)
class Interval:
    start: int
    end: int

    def __post_init__(self):
        for v in (self.start, self.end):
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidInterval(f"interval endpoints must be integers, got {v!r}")
            checked(v)
        if self.start >= self.end:
            raise InvalidInterval(f"empty or reversed interval [{self.start},{self.end})")

    @property
    def duration(self) -> int:
        return self.end - self.start

    def shift(self, delta: int) -> "Interval":
        return Interval(checked(self.start + delta), checked(self.end + delta))

    def __str__(self):
        return f"[{self.start},{self.end})"


class AllenRelation(Enum):
    BEFORE = "before"
    AFTER = "after"
    MEETS = "meets"
    MET_BY = "met-by"
    OVERLAPS = "overlaps"
    OVERLAPPED_BY = "overlapped-by"
    STARTS = "starts"
    STARTED_BY = "started-by"
    DURING = "during"
    CONTAINS = "contains"
    FINISHES = "finishes"
    FINISHED_BY = "finished-by"
    EQUALS = "equals"

    @property
    def converse(self) -> "AllenRelation":
        return _CONVERSE[self]

    def __str__(self):
        return self.value


R = AllenRelation

_CONVERSE = {
    R.BEFORE: R.AFTER,
    R.AFTER: R.BEFORE,
    R.MEETS: R.MET_BY,
    R.MET_BY: R.MEETS,
    R.OVERLAPS: R.OVERLAPPED_BY,
    R.OVERLAPPED_BY: R.OVERLAPS,
    R.STARTS: R.STARTED_BY,
    R.STARTED_BY: R.STARTS,
    R.DURING: R.CONTAINS,
    R.CONTAINS: R.DURING,
    R.FINISHES: R.FINISHED_BY,
    R.FINISHED_BY: R.FINISHES,
    R.EQUALS: R.EQUALS,
}

DISJOINT_RELATIONS = frozenset({R.BEFORE, R.AFTER, R.MEETS, R.MET_BY})
WITHIN_RELATIONS = frozenset({R.STARTS, R.DURING, R.FINISHES})


def relate(i: Interval, j: Interval) -> AllenRelation:
    """Return the unique Allen relation holding from ``i`` to ``j``."""
    if i.end < j.start:
        return R.BEFORE
    if j.end < i.start:
        return R.AFTER
    if i.end == j.start:
        return R.MEETS
    if j.end == i.start:
        return R.MET_BY
    if i.start == j.start:
        if i.end == j.end:
            return R.EQUALS
        return R.STARTS if i.end < j.end else R.STARTED_BY
    if i.end == j.end:
        return R.FINISHES if i.start > j.start else R.FINISHED_BY
    if j.start < i.start and i.end < j.end:
        return R.DURING
    if i.start < j.start and j.end < i.end:
        return R.CONTAINS
    return R.OVERLAPS if i.start < j.start else R.OVERLAPPED_BY


def is_disjoint(i: Interval, j: Interval) -> bool:
    return relate(i, j) in DISJOINT_RELATIONS


def is_within(i: Interval, j: Interval) -> bool:
    return relate(i, j) in WITHIN_RELATIONS


def is_sub(i: Interval, j: Interval) -> bool:
    return i == j or is_within(i, j)


def common(i: Interval, j: Interval) -> Interval:
    """Maximal common subinterval of two non-disjoint intervals."""
    if is_disjoint(i, j):
        raise DisjointPair(f"{i} and {j} are disjoint; common is undefined")
    return Interval(max(i.start, j.start), min(i.end, j.end))


def aux(i: Interval, j: Interval) -> frozenset[Interval]:
    """Auxiliary intervals of a pair.

    For a disjoint pair this is the gap between them (empty when they meet).
    Otherwise it is what remains of the convex hull once the common part is
    removed: a leading piece when the starts differ and a trailing piece when
    the ends differ.
    """
    rel = relate(i, j)
    if rel in (R.MEETS, R.MET_BY, R.EQUALS):
        return frozenset()
    if rel is R.BEFORE:
        return frozenset({Interval(i.end, j.start)})
    if rel is R.AFTER:
        return frozenset({Interval(j.end, i.start)})
    out = set()
    if i.start != j.start:
        out.add(Interval(min(i.start, j.start), max(i.start, j.start)))
    if i.end != j.end:
        out.add(Interval(min(i.end, j.end), max(i.end, j.end)))
    return frozenset(out)


def cover(i: Interval, j: Interval) -> Interval:
    if i.end != j.start:
        raise NotMeeting(f"{i} does not meet {j}")
    return Interval(i.start, j.end)


class TimeMap:
    """A non-empty run of meeting intervals, indexed from 1.

    ``tm[p]`` is 1-based to match the usual ``tm[1] ... tm[dim]`` notation.
    """

    __slots__ = ("_items",)

    def __init__(self, intervals: Iterable[Interval]):
        items = tuple(intervals)
        if not items:
            raise InvalidTimeMap("a time map needs at least one interval")
        for a, b in zip(items, items[1:]):
            if a.end != b.start:
                raise InvalidTimeMap(f"{a} does not meet {b}")
        self._items = items

    @property
    def dim(self) -> int:
        return len(self._items)

    def index(self, p: int) -> Interval:
        if not 1 <= p <= len(self._items):
            raise IndexError(f"time map index {p} outside 1..{len(self._items)}")
        return self._items[p - 1]

    def __getitem__(self, p):
        if isinstance(p, slice):
            raise TypeError("time maps do not support slicing; use tail()")
        return self.index(p)

    def __len__(self):
        return len(self._items)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._items)

    def __eq__(self, other):
        if isinstance(other, TimeMap):
            return self._items == other._items
        return NotImplemented

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        return "TimeMap<" + ",".join(str(i) for i in self._items) + ">"

    def head(self) -> Interval:
        return self._items[0]

    def tail(self) -> Optional["TimeMap"]:
        """The map without its first interval, or None for a single interval."""
        if len(self._items) == 1:
            return None
        return TimeMap(self._items[1:])


def cover_star(tm: TimeMap) -> Interval:
    if tm.dim == 1:
        return tm[1]
    return Interval(tm[1].start, tm[tm.dim].end)


# Composition table over Allen's relations. Rows are the relation from i to
# j, columns the relation from j to k; cells list every possible relation from
# i to k. Abbreviations are expanded by _TABLE_CODES.
_TABLE_CODES = {
    "<": R.BEFORE, ">": R.AFTER, "m": R.MEETS, "mi": R.MET_BY,
    "o": R.OVERLAPS, "oi": R.OVERLAPPED_BY, "s": R.STARTS, "si": R.STARTED_BY,
    "d": R.DURING, "di": R.CONTAINS, "f": R.FINISHES, "fi": R.FINISHED_BY,
    "=": R.EQUALS,
}
_ALL = "< > m mi o oi s si d di f fi ="
_SHARED = "o oi s si d di f fi ="
_ORDER = [R.BEFORE, R.AFTER, R.MEETS, R.MET_BY, R.OVERLAPS, R.OVERLAPPED_BY,
          R.STARTS, R.STARTED_BY, R.DURING, R.CONTAINS, R.FINISHES,
          R.FINISHED_BY, R.EQUALS]
_ROWS = {
    R.BEFORE: ["<", _ALL, "<", "< m o s d", "<", "< m o s d", "<", "<",
               "< m o s d", "<", "< m o s d", "<", "<"],
    R.AFTER: [_ALL, ">", "> mi oi d f", ">", "> mi oi d f", ">",
              "> mi oi d f", ">", "> mi oi d f", ">", ">", ">", ">"],
    R.MEETS: ["<", "> mi oi si di", "<", "f fi =", "<", "o s d", "m", "m",
              "o s d", "<", "o s d", "<", "m"],
    R.MET_BY: ["< m o di fi", ">", "s si =", ">", "oi d f", ">", "oi d f",
               ">", "oi d f", ">", "mi", "mi", "mi"],
    R.OVERLAPS: ["<", "> mi oi si di", "<", "oi si di", "< m o", _SHARED, "o",
                 "o di fi", "o s d", "< m o di fi", "o s d", "< m o", "o"],
    R.OVERLAPPED_BY: ["< m o di fi", ">", "o di fi", ">", _SHARED, "> mi oi",
                      "oi d f", "> mi oi", "oi d f", "> mi oi si di", "oi",
                      "oi si di", "oi"],
    R.STARTS: ["<", ">", "<", "mi", "< m o", "oi d f", "s", "s si =", "d",
               "< m o di fi", "d", "< m o", "s"],
    R.STARTED_BY: ["< m o di fi", ">", "o di fi", "mi", "o di fi", "oi",
                   "s si =", "si", "oi d f", "di", "oi", "di", "si"],
    R.DURING: ["<", ">", "<", ">", "< m o s d", "> mi oi d f", "d",
               "> mi oi d f", "d", _ALL, "d", "< m o s d", "d"],
    R.CONTAINS: ["< m o di fi", "> mi oi si di", "o di fi", "oi si di",
                 "o di fi", "oi si di", "o di fi", "di", _SHARED, "di",
                 "oi si di", "di", "di"],
    R.FINISHES: ["<", ">", "m", ">", "o s d", "> mi oi", "d", "> mi oi", "d",
                 "> mi oi si di", "f", "f fi =", "f"],
    R.FINISHED_BY: ["<", "> mi oi si di", "m", "oi si di", "o", "oi si di",
                    "o", "di", "o s d", "di", "f fi =", "fi", "fi"],
    R.EQUALS: ["<", ">", "m", "mi", "o", "oi", "s", "si", "d", "di", "f",
               "fi", "="],
}
COMPOSITION_TABLE: dict[tuple[AllenRelation, AllenRelation], frozenset[AllenRelation]] = {
    (r1, r2): frozenset(_TABLE_CODES[c] for c in cell.split())
    for r1, row in _ROWS.items()
    for r2, cell in zip(_ORDER, row)
}


def compose(r1: AllenRelation, r2: AllenRelation) -> frozenset[AllenRelation]:
    return COMPOSITION_TABLE[(r1, r2)]


# Decimal duration normalization.

_DECIMAL_RE = re.compile(r"^[+-]?(\d+)(?:\.(\d+))?$")


@dataclass(frozen=True)
class DurationScale:
    """Unit change that turns decimal durations into whole ticks.

    One tick equals ``10**-k`` of the original unit.
    """

    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("scale exponent must be non-negative")

    @property
    def factor(self) -> int:
        return 10**self.k

    def to_ticks(self, text) -> int:
        value = parse_decimal(text)
        scaled = value.scaleb(self.k)
        if scaled != scaled.to_integral_value():
            raise IrrationalOrNonDecimal(
                f"{text!r} has more than {self.k} decimal places")
        return checked(int(scaled))

    def render(self, ticks: int) -> str:
        """Render a tick count back in the original unit, without exponent."""
        sign = "-" if ticks < 0 else ""
        whole, frac = divmod(abs(ticks), self.factor)
        if self.k == 0 or frac == 0:
            return f"{sign}{whole}"
        digits = str(frac).rjust(self.k, "0").rstrip("0")
        return f"{sign}{whole}.{digits}"


def parse_decimal(text) -> Decimal:
    """Parse a plain decimal numeral such as ``"13.5"`` or ``"-2"``.

    Fractions, exponents, NaN and infinities are rejected since they do not
    name a finitely written decimal duration.
    """
    if isinstance(text, bool):
        raise IrrationalOrNonDecimal(f"not a decimal numeral: {text!r}")
    if isinstance(text, int):
        return Decimal(text)
    if not isinstance(text, str) or not _DECIMAL_RE.match(text.strip()):
        raise IrrationalOrNonDecimal(f"not a finite decimal numeral: {text!r}")
    return Decimal(text.strip())


def decimal_places(text) -> int:
    m = _DECIMAL_RE.match(str(text).strip())
    if not m:
        raise IrrationalOrNonDecimal(f"not a finite decimal numeral: {text!r}")
    return len(m.group(2) or "")


def normalize_durations(durations: Sequence) -> tuple[list[int], DurationScale]:
    """Rescale decimal durations to positive integers.

    >>> normalize_durations(["12", "13.5"])
    ([120, 135], DurationScale(k=1))
    """
    values = [parse_decimal(d) for d in durations]
    for raw, v in zip(durations, values):
        if v <= 0:
            raise NonPositiveDuration(f"duration {raw!r} is not positive")
    k = max((decimal_places(d) for d in durations), default=0)
    scale = DurationScale(k)
    return [scale.to_ticks(d) for d in durations], scale
