"""Anchored recurrence and double recurrence of eventualities.

A recurrence tiles its horizon with whole periods of one eventuality,
starting at the horizon's start. Two recurrences over the same horizon form
a :class:`MultiRecurrence`, whose cycles have the least common multiple of the
two periods as their duration.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Union

from .eventuality import Eventuality, comp, layout, plus_interval
from .interval_core import (
    AllenRelation,
    Interval,
    TimeMap,
    checked,
    cover,
    cover_star,
    is_disjoint,
    is_sub,
    is_within,
    relate,
)

SIDES = ("x", "y")


class RecurrenceError(ValueError):
    pass


class NotRecurrent(RecurrenceError):
    pass


class HorizonTooLarge(RecurrenceError):
    pass


def lcm(a: int, b: int) -> int:
    return checked(a // math.gcd(a, b) * b)


@dataclass(frozen=True)
class Recurrence:
    eventuality: Eventuality
    horizon: Interval

    def __post_init__(self):
        period = self.eventuality.period
        if self.horizon.duration % period:
            raise NotRecurrent(
                f"{self.eventuality.name} (period {period}) cannot tile "
                f"{self.horizon} of duration {self.horizon.duration}")

    @property
    def anchor(self) -> int:
        return self.horizon.start

    @property
    def period(self) -> int:
        return self.eventuality.period

    def periods(self) -> TimeMap:
        return eta(self, self.horizon)


@dataclass(frozen=True)
class MultiRecurrence:
    x: Recurrence
    y: Recurrence

    def __post_init__(self):
        if self.x.horizon != self.y.horizon:
            raise RecurrenceError(
                f"double recurrence needs one horizon, got {self.x.horizon} and {self.y.horizon}")

    @classmethod
    def build(cls, x: Eventuality, y: Eventuality, horizon: Interval) -> "MultiRecurrence":
        return cls(Recurrence(x, horizon), Recurrence(y, horizon))

    @property
    def horizon(self) -> Interval:
        return self.x.horizon

    def side(self, name: str) -> Recurrence:
        if name == "x":
            return self.x
        if name == "y":
            return self.y
        raise KeyError(f"unknown side {name!r}")


def eta(rec: Recurrence, within: Interval) -> TimeMap:
    """Consecutive periods of ``rec`` that exactly tile ``within``."""
    period = rec.period
    if not is_sub(within, rec.horizon):
        raise NotRecurrent(f"{within} is not inside the horizon {rec.horizon}")
    if (within.start - rec.anchor) % period or within.duration % period:
        raise NotRecurrent(
            f"{rec.eventuality.name} does not recur over {within} (period {period}, "
            f"anchor {rec.anchor})")
    return TimeMap(Interval(s, s + period) for s in range(within.start, within.end, period))


def phi(ev: Eventuality, p: int, period_interval: Interval) -> Interval:
    """Interval of component ``p`` inside one period of ``ev``."""
    c = comp(ev, p)
    if period_interval.duration != ev.period:
        raise NotRecurrent(f"{period_interval} is not a period of {ev.name}")
    a, _ = layout(ev)[p]
    start = period_interval.start + a
    return Interval(start, start + c.duration)


def cycle_duration(x: Eventuality, y: Eventuality) -> int:
    return lcm(x.period, y.period)


def cycles(mr: MultiRecurrence) -> TimeMap:
    size = cycle_duration(mr.x.eventuality, mr.y.eventuality)
    h = mr.horizon
    return TimeMap(Interval(s, s + size) for s in range(h.start, h.end, size))


class Target(NamedTuple):
    """A whole eventuality (``p is None``) or one of its components."""

    side: str
    p: Optional[int] = None

    @property
    def is_component(self) -> bool:
        return self.p is not None


class IncidenceModel:
    """Maximal-truth incidences of every component and of both sequences.

    Normally derived from a :class:`MultiRecurrence`; :meth:`replace` builds
    a modified copy, which is how faulty models are fed to the checker.
    """

    def __init__(self, mr: MultiRecurrence, incidences: dict[Target, Iterable[Interval]]):
        self.mr = mr
        self._mt = {t: tuple(sorted(v)) for t, v in incidences.items()}
        self._starts = {t: [i.start for i in v] for t, v in self._mt.items()}

    @classmethod
    def from_multirecurrence(cls, mr: MultiRecurrence) -> "IncidenceModel":
        inc: dict[Target, list[Interval]] = {}
        for side in SIDES:
            rec = mr.side(side)
            periods = list(rec.periods())
            inc[Target(side)] = periods
            for p in range(len(rec.eventuality)):
                inc[Target(side, p)] = [phi(rec.eventuality, p, k) for k in periods]
        return cls(mr, inc)

    def eventuality(self, side: str) -> Eventuality:
        return self.mr.side(side).eventuality

    def targets(self) -> list[Target]:
        return list(self._mt)

    def component_targets(self, side: Optional[str] = None) -> list[Target]:
        return [t for t in self._mt if t.is_component and (side is None or t.side == side)]

    def resolve(self, name: Union[str, Target]) -> Target:
        """Look up a target by component label or eventuality name."""
        if isinstance(name, Target):
            if name not in self._mt:
                raise KeyError(f"unknown target {name}")
            return name
        found = []
        for side in SIDES:
            ev = self.eventuality(side)
            if ev.name == name:
                found.append(Target(side))
            for p, c in enumerate(ev.components):
                if c.label == name:
                    found.append(Target(side, p))
        if len(found) != 1:
            raise KeyError(f"label {name!r} matches {len(found)} targets")
        return found[0]

    def label(self, target: Target) -> str:
        ev = self.eventuality(target.side)
        return ev.name if target.p is None else ev.components[target.p].label

    def mt(self, target: Target) -> tuple[Interval, ...]:
        return self._mt[target]

    def is_mt(self, target: Target, j: Interval) -> bool:
        seq = self._mt[target]
        k = bisect.bisect_left(self._starts[target], j.start)
        return k < len(seq) and seq[k] == j

    def hereditary(self, target: Target) -> bool:
        # Sequences of length > 1 are true only over their maximal incidences.
        return target.is_component or len(self.eventuality(target.side)) == 1

    def replace(self, target: Target, n: int, interval: Interval) -> "IncidenceModel":
        inc = dict(self._mt)
        seq = list(inc[target])
        seq[n] = interval
        inc[target] = seq
        return IncidenceModel(self.mr, inc)


def mt_intervals(model: IncidenceModel, target, within: Interval) -> list[Interval]:
    t = model.resolve(target)
    return [i for i in model.mt(t) if is_sub(i, within)]


def tt_holds(model: IncidenceModel, target, j: Interval) -> bool:
    t = model.resolve(target)
    if not model.hereditary(t):
        return model.is_mt(t, j)
    seq = model.mt(t)
    # Only the incidences starting at or before j.start can contain it; in a
    # well-formed model that is the last one, in a faulty one scan them all.
    k = bisect.bisect_right(model._starts[t], j.start)
    return any(is_sub(j, i) for i in seq[:k])


# Axiom checking.

@dataclass
class Violation:
    check: str
    detail: str

    def __str__(self):
        return f"{self.check}: {self.detail}"


@dataclass
class CheckReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    def expect(self, check: str, ok: bool, detail: str = "") -> bool:
        self.checked[check] = self.checked.get(check, 0) + 1
        if not ok:
            self.violations.append(Violation(check, detail))
        return ok

    def tally(self, check: str, n: int) -> None:
        """Record ``n`` passing instances of ``check`` at once."""
        self.checked[check] = self.checked.get(check, 0) + n

    @property
    def ok(self) -> bool:
        return not self.violations

    def violated(self) -> set[str]:
        return {v.check for v in self.violations}

    def lines(self) -> list[str]:
        out = []
        for name, n in self.checked.items():
            bad = sum(v.check == name for v in self.violations)
            out.append(f"{name}: {n} instances, {bad} violations")
        return out


DEFAULT_MAX_GRID_POINTS = 128


def endpoint_grid(model: IncidenceModel) -> list[int]:
    """Incidence endpoints plus one interior point of every wider gap."""
    pts = {model.mr.horizon.start, model.mr.horizon.end}
    for t in model.targets():
        for i in model.mt(t):
            pts.update((i.start, i.end))
    pts = sorted(pts)
    mids = [(a + b) // 2 for a, b in zip(pts, pts[1:]) if b - a >= 2]
    return sorted(set(pts).union(mids))


def _grid_intervals(points: list[int]) -> list[Interval]:
    return [Interval(a, b) for n, a in enumerate(points) for b in points[n + 1:]]


def check_axioms(subject: Union[MultiRecurrence, IncidenceModel],
                 max_grid_points: int = DEFAULT_MAX_GRID_POINTS) -> CheckReport:
    """Check the recurrence theory against one concrete model.

    Every truth-predicate instance is evaluated over all intervals whose
    endpoints lie on :func:`endpoint_grid`; truth values cannot change between
    consecutive grid points, so the grid is a complete witness set.
    """
    model = subject if isinstance(subject, IncidenceModel) else IncidenceModel.from_multirecurrence(subject)
    mr = model.mr
    points = endpoint_grid(model)
    if len(points) > max_grid_points:
        raise HorizonTooLarge(
            f"endpoint grid has {len(points)} points, limit is {max_grid_points}")
    grid = _grid_intervals(points)
    report = CheckReport()
    tt_cache: dict[Target, list[bool]] = {
        t: [tt_holds(model, t, j) for j in grid] for t in model.targets()}

    _check_truth_axioms(model, grid, tt_cache, report)
    _check_exclusion(model, report)
    _check_plus(model, grid, report)
    _check_periods_and_cycles(model, grid, report)
    return report


def _check_truth_axioms(model, grid, tt_cache, report):
    for t in model.targets():
        tt = tt_cache[t]
        name = model.label(t)
        mts = model.mt(t)
        for k in mts:
            report.expect("maximal truth implies truth", tt_holds(model, t, k), f"{name} over {k}")
        durations = {k.duration for k in mts}
        report.expect("fixed incidence duration", len(durations) == 1,
                      f"{name} has incidence durations {sorted(durations)}")
        for j, holds in zip(grid, tt):
            if holds:
                report.expect("truth lies inside a maximal incidence",
                              any(is_sub(j, k) for k in mts), f"{name} over {j}")

        if model.hereditary(t):
            spoilers = (AllenRelation.OVERLAPS, AllenRelation.OVERLAPPED_BY)
            for k in mts:
                bad = [j for j, holds in zip(grid, tt)
                       if holds and (relate(j, k) in spoilers or is_within(k, j))]
                report.expect("maximal truth has no overlapping or enclosing truth", not bad,
                              f"{name} incidence {k} but also true over {bad[:1]}")
        else:
            ev = model.eventuality(t.side)
            first = model.mt(Target(t.side, 0))
            for j, holds in zip(grid, tt):
                report.expect("sequence truth is maximal", holds == model.is_mt(t, j),
                              f"{name} over {j}")
                if not holds:
                    continue
                ok = any(relate(k1, j) is AllenRelation.STARTS for k1 in first)
                for p in range(1, len(ev)):
                    prev = [k for k in model.mt(Target(t.side, p - 1)) if is_within(k, j)]
                    cur = [k for k in model.mt(Target(t.side, p)) if is_within(k, j)]
                    ok = ok and any(a.end == b.start for a in prev for b in cur)
                report.expect("sequence truth chains its components", ok, f"{name} over {j}")


def _check_exclusion(model, report):
    for side in SIDES:
        comps = model.component_targets(side)
        for n, a in enumerate(comps):
            for b in comps[n + 1:]:
                for i in model.mt(a):
                    for j in model.mt(b):
                        report.expect("components are mutually exclusive", is_disjoint(i, j),
                                      f"{model.label(a)} {i} and {model.label(b)} {j}")


def _check_plus(model, grid, report):
    for a in model.component_targets("x"):
        for b in model.component_targets("y"):
            fwd = {plus_interval(i, j) for i in model.mt(a) for j in model.mt(b)} - {None}
            back = {plus_interval(j, i) for i in model.mt(a) for j in model.mt(b)} - {None}
            pair = f"{model.label(a)}+{model.label(b)}"
            report.expect("coincidence is commutative", fwd == back, pair)
            for m in fwd:
                for j in grid:
                    if is_within(j, m):
                        report.expect("coincidence is downward hereditary",
                                      tt_holds(model, a, j) and tt_holds(model, b, j)
                                      and any(is_sub(j, n) for n in fwd),
                                      f"{pair} over {j} inside {m}")
            for c in model.component_targets():
                for i in model.mt(a):
                    for j in model.mt(b):
                        ij = plus_interval(i, j)
                        if ij is None:
                            continue
                        for k in model.mt(c):
                            m = plus_interval(ij, k)
                            if m is None:
                                continue
                            parts = (ij, plus_interval(j, k), plus_interval(i, k))
                            report.expect("triple coincidence implies pairwise",
                                          all(q is not None and is_sub(m, q) for q in parts),
                                          f"{pair}+{model.label(c)} over {m}")


def _recurs_over(model: IncidenceModel, side: str, j: Interval) -> bool:
    seq = model.mt(Target(side))
    return any(k.start == j.start for k in seq) and any(k.end == j.end for k in seq)


def _check_periods_and_cycles(model, grid, report):
    mr = model.mr
    h = mr.horizon
    size = cycle_duration(mr.x.eventuality, mr.y.eventuality)
    for side in SIDES:
        rec = mr.side(side)
        ev = rec.eventuality
        report.expect("horizon is a multiple of the period",
                      h.duration % ev.period == 0, ev.name)
        tm = eta(rec, h)
        report.expect("period map covers the horizon", cover_star(tm) == h, ev.name)
        for k in tm:
            report.expect("period map entries are maximal incidences",
                          model.is_mt(Target(side), k) and k.duration == ev.period,
                          f"{ev.name} period {k}")
        periods = model.mt(Target(side))
        report.expect("periods share a duration",
                      len({k.duration for k in periods}) == 1, ev.name)
        report.expect("an incidence starts the horizon",
                      any(k.start == h.start for k in periods), ev.name)
        report.expect("an incidence finishes the horizon",
                      any(k.end == h.end for k in periods), ev.name)
        for j in grid:
            report.expect("every overlapping probe touches a period",
                          any(not is_disjoint(k, j) for k in tm), f"{ev.name} probe {j}")

    cyc = cycles(mr)
    for w in cyc:
        report.expect("cycles share a duration", w.duration == cyc[1].duration, str(w))
        report.expect("cycle duration is the lcm", w.duration == size, str(w))
        for side in SIDES:
            rec = mr.side(side)
            tm = eta(rec, w)
            report.expect("cycle is tiled by periods", cover_star(tm) == w,
                          f"{rec.eventuality.name} in {w}")
            for t in model.component_targets(side):
                for k in model.mt(t):
                    if is_sub(k, w):
                        report.expect("incidence is a component slot of a period",
                                      any(k == phi(rec.eventuality, t.p, e) for e in tm),
                                      f"{model.label(t)} {k} in {w}")
        for j in grid:
            if is_within(j, w):
                report.expect("cycles are minimal",
                              not (_recurs_over(model, "x", j) and _recurs_over(model, "y", j)),
                              f"{j} within cycle {w}")
    # The horizon splits into its first cycle and a doubly recurrent remainder.
    first = cyc[1]
    if cyc.dim == 1:
        report.expect("horizon splits into a cycle and a recurrent remainder", first == h, str(h))
    else:
        rest = Interval(first.end, h.end)
        ok = cover(first, rest) == h
        try:
            MultiRecurrence.build(mr.x.eventuality, mr.y.eventuality, rest)
            eta(mr.x, rest)
            eta(mr.y, rest)
        except RecurrenceError:
            ok = False
        report.expect("horizon splits into a cycle and a recurrent remainder", ok, f"{first} + {rest}")
