"""Deciding whether two designated components ever coincide.

Three engines answer the same question:

* :func:`solve_in_cycle` projects over the first cycle only;
* :func:`solve_brute_force` walks every period pair of the whole horizon and
  serves as the reference oracle;
* :func:`solve_residue` reduces the question to one congruence test on the
  component offsets.

The appendix machinery (:func:`similar` and :func:`check_cycle_regularity`)
checks that every cycle looks exactly like the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .eventuality import layout
from .interval_core import Interval, aux, common, is_disjoint, relate
from .recurrence import CheckReport, MultiRecurrence, RecurrenceError, cycles, eta, phi


class NeedTwoCycles(RecurrenceError):
    pass


@dataclass(frozen=True)
class CoincidenceQuery:
    p: int
    q: int

    def validate(self, mr: MultiRecurrence) -> None:
        nx, ny = len(mr.x.eventuality), len(mr.y.eventuality)
        if not (0 <= self.p < nx and 0 <= self.q < ny):
            raise IndexError(
                f"query ({self.p}, {self.q}) outside [0..{nx - 1}] x [0..{ny - 1}]")

    @classmethod
    def from_labels(cls, mr: MultiRecurrence, x_label: str, y_label: str) -> "CoincidenceQuery":
        return cls(mr.x.eventuality.index_of(x_label), mr.y.eventuality.index_of(y_label))


@dataclass(frozen=True)
class Witness:
    """Period ``r`` of x and period ``s`` of y (1-based) overlap on ``overlap``."""

    r: int
    s: int
    overlap: Interval


@dataclass(frozen=True)
class Found:
    witness: Witness
    found = True


@dataclass(frozen=True)
class Impossible:
    """No overlap exists; names the span searched and the pairs examined."""

    span: Interval
    cycles_examined: int
    pairs_checked: int
    found = False


Decision = Union[Found, Impossible]


def _incidences(mr: MultiRecurrence, query: CoincidenceQuery, span: Interval):
    xs = [phi(mr.x.eventuality, query.p, k) for k in eta(mr.x, span)]
    ys = [phi(mr.y.eventuality, query.q, k) for k in eta(mr.y, span)]
    return xs, ys


def solve_in_cycle(mr: MultiRecurrence, query: CoincidenceQuery) -> Decision:
    """Decide coincidence by projecting over the first cycle.

    Period pairs are tried in (r, s) order, so the witness is the
    lexicographically first overlapping pair of the cycle.
    """
    query.validate(mr)
    omega = cycles(mr)[1]
    xs, ys = _incidences(mr, query, omega)
    for r, i in enumerate(xs, 1):
        for s, j in enumerate(ys, 1):
            if not is_disjoint(i, j):
                return Found(Witness(r, s, common(i, j)))
    return Impossible(omega, 1, len(xs) * len(ys))


def solve_brute_force(mr: MultiRecurrence, query: CoincidenceQuery) -> Decision:
    """Reference oracle: examine every period pair over the whole horizon.

    Returns the temporally earliest overlap (ties broken by end, then r, s).
    """
    query.validate(mr)
    h = mr.horizon
    xs, ys = _incidences(mr, query, h)
    best: Optional[tuple] = None
    for r, i in enumerate(xs, 1):
        for s, j in enumerate(ys, 1):
            if i.end <= j.start or j.end <= i.start:
                continue
            key = (max(i.start, j.start), min(i.end, j.end), r, s)
            if best is None or key < best:
                best = key
    if best is None:
        return Impossible(h, cycles(mr).dim, len(xs) * len(ys))
    start, end, r, s = best
    return Found(Witness(r, s, Interval(start, end)))


def solve_residue(mr: MultiRecurrence, query: CoincidenceQuery) -> Decision:
    """Decide coincidence from the component offsets alone.

    With x_p at ``[a, a')`` modulo ``Px`` and y_q at ``[b, b')`` modulo
    ``Py``, period r of x and period s of y overlap iff
    ``b - a' < r*Px - s*Py < b' - a``. Differences ``r*Px - s*Py`` range
    over the multiples of ``g = gcd(Px, Py)``, so coincidence exists iff one
    lies strictly inside that window. The witness is the smallest (r, s) of
    the first cycle, matching :func:`solve_in_cycle`.
    """
    query.validate(mr)
    ex, ey = mr.x.eventuality, mr.y.eventuality
    px, py = ex.period, ey.period
    g = math.gcd(px, py)
    a, a2 = layout(ex)[query.p]
    b, b2 = layout(ey)[query.q]
    lo, hi = b - a2, b2 - a
    omega = cycles(mr)[1]
    nx, ny = py // g, px // g  # periods of x and y per cycle
    inv = pow(px // g, -1, nx) if nx > 1 else 0
    best = None
    tried = 0
    d = (lo // g + 1) * g
    while d < hi:
        # r*px - s*py = d  =>  r*(px/g) = d/g (mod py/g)
        tried += 1
        r = (d // g) * inv % nx if nx > 1 else 0
        s, rem = divmod(r * px - d, py)
        if rem == 0 and 0 <= s < ny and (best is None or (r, s) < best):
            best = (r, s)
        d += g
    if best is None:
        return Impossible(omega, 1, tried)
    r, s = best
    i = Interval(omega.start + r * px + a, omega.start + r * px + a2)
    j = Interval(omega.start + s * py + b, omega.start + s * py + b2)
    return Found(Witness(r + 1, s + 1, common(i, j)))


ENGINES = {
    "cycle": solve_in_cycle,
    "oracle": solve_brute_force,
    "residue": solve_residue,
}


def all_coincidences(mr: MultiRecurrence, query: CoincidenceQuery) -> list[Witness]:
    """Every overlapping period pair over the horizon; test helper."""
    query.validate(mr)
    xs, ys = _incidences(mr, query, mr.horizon)
    return [Witness(r, s, common(i, j))
            for r, i in enumerate(xs, 1) for s, j in enumerate(ys, 1) if not is_disjoint(i, j)]


# Similarity of interval pairs.

@dataclass(frozen=True)
class SimilarVerdict:
    similar: bool
    clause: Optional[str] = None  # "duration", "relation" or "auxiliary"

    def __bool__(self):
        return self.similar


Pair = tuple[Interval, Interval]


def similar(pair1: Pair, pair2: Pair) -> SimilarVerdict:
    x, y = pair1
    x1, y1 = pair2
    if x.duration != x1.duration or y.duration != y1.duration:
        return SimilarVerdict(False, "duration")
    if relate(x, y) is not relate(x1, y1):
        return SimilarVerdict(False, "relation")
    others = aux(x1, y1)
    for k in aux(x, y):
        if not any(k.duration == k1.duration
                   and relate(x, k) is relate(x1, k1)
                   and relate(k, y) is relate(k1, y1) for k1 in others):
            return SimilarVerdict(False, "auxiliary")
    return SimilarVerdict(True)


def _cycle_table(mr: MultiRecurrence, window: Interval):
    """Period pairs and component relations of one cycle, keyed by (r, s)."""
    xs = list(eta(mr.x, window))
    ys = list(eta(mr.y, window))
    ex, ey = mr.x.eventuality, mr.y.eventuality
    xslots = [[phi(ex, p, k) for p in range(len(ex))] for k in xs]
    yslots = [[phi(ey, q, k) for q in range(len(ey))] for k in ys]
    periods, comps = {}, {}
    for r, (k, islots) in enumerate(zip(xs, xslots), 1):
        for s, (m, jslots) in enumerate(zip(ys, yslots), 1):
            periods[r, s] = (k, m)
            comps[r, s] = tuple(relate(i, j) for i in islots for j in jslots)
    return periods, comps


def check_cycle_regularity(mr: MultiRecurrence) -> CheckReport:
    """Check that period and component relations repeat in every cycle."""
    cyc = cycles(mr)
    if cyc.dim < 2:
        raise NeedTwoCycles(f"horizon {mr.horizon} holds a single cycle")
    ny = len(mr.y.eventuality)
    tables = [_cycle_table(mr, w) for w in cyc]
    report = CheckReport()
    for (c1, (per1, comp1)), (c2, (per2, comp2)) in combinations(enumerate(tables, 1), 2):
        for key, (x1, y1) in per1.items():
            x2, y2 = per2[key]
            where = f"cycles {c1}/{c2}, periods r={key[0]} s={key[1]}"
            report.expect("period relation repeats", relate(x1, y1) is relate(x2, y2), where)
            report.expect("periods similar across cycles",
                          bool(similar((x1, y1), (x2, y2))), where)
            rel1, rel2 = comp1[key], comp2[key]
            if rel1 == rel2:
                report.tally("component relation repeats", len(rel1))
                continue
            for n, (a, b) in enumerate(zip(rel1, rel2)):
                report.expect("component relation repeats", a is b,
                              f"{where}, p={n // ny} q={n % ny}")
    return report
