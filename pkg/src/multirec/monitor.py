"""Runtime avoidance of an unwanted coincidence.

When durations cannot be predicted, coincidence of x_p and y_q can still be
averted online. A start trigger for one side (received at the right limit of
its predecessor's incidence) disables the other side, unless the triggering
side is itself disabled. Simultaneous start triggers for both sides would
disable each other, so the engine halts instead.

Events at one timestamp are processed clips first.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import groupby
from types import MappingProxyType
from typing import Iterable, Mapping, Optional


class MonitorError(ValueError):
    pass


class OutOfOrderEvent(MonitorError):
    pass


class Halted(MonitorError):
    pass


class EventKind(Enum):
    X_START = "x-start"
    Y_START = "y-start"
    CLIP = "clip"


TARGETS = ("x", "y")
_OTHER = {"x": "y", "y": "x"}
_STARTS = {EventKind.X_START: "x", EventKind.Y_START: "y"}


@dataclass(frozen=True)
class TriggerEvent:
    time: int
    kind: EventKind
    target: Optional[str] = None  # only for clips: "x" (x_p) or "y" (y_q)

    def __post_init__(self):
        if not isinstance(self.kind, EventKind):
            object.__setattr__(self, "kind", EventKind(self.kind))
        if self.kind is EventKind.CLIP:
            if self.target not in TARGETS:
                raise MonitorError(f"clip needs target 'x' or 'y', got {self.target!r}")
        elif self.target is not None and self.target != _STARTS[self.kind]:
            raise MonitorError(f"{self.kind.value} trigger cannot name target {self.target!r}")


@dataclass(frozen=True)
class Action:
    type: str  # "disable" or "halt"
    time: int
    target: Optional[str] = None

    def to_record(self, render=str, labels: Optional[Mapping[str, str]] = None) -> dict:
        target = self.target
        if target is not None and labels:
            target = labels.get(target, target)
        return {"type": self.type, "target": target, "time": render(self.time)}


def disable(target: str, time: int) -> Action:
    return Action("disable", time, target)


def halt(time: int) -> Action:
    return Action("halt", time)


@dataclass(frozen=True)
class AvoidancePolicy:
    """Averting the coincidence of component ``p`` of x and ``q`` of y.

    Both components need a predecessor whose right limit fires the trigger.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise MonitorError(
                f"averted components need predecessors: p={self.p}, q={self.q} must be >= 1")

    def check_lengths(self, len_x: int, len_y: int) -> None:
        if self.p >= len_x or self.q >= len_y:
            raise MonitorError(f"policy ({self.p}, {self.q}) outside eventuality lengths")


@dataclass(frozen=True)
class MonitorState:
    disabled: Mapping[str, int] = field(default_factory=lambda: MappingProxyType({}))
    now: Optional[int] = None
    started: frozenset = frozenset()  # start triggers already seen at ``now``
    halted: bool = False

    def currently_disabled(self, target: str, now: int) -> bool:
        since = self.disabled.get(target)
        return since is not None and since < now


def step(state: MonitorState, event: TriggerEvent, policy: AvoidancePolicy):
    """Consume one event; return the new state and the actions it caused."""
    if state.halted:
        raise Halted(f"monitor halted at {state.now}")
    now = event.time
    if state.now is not None and now < state.now:
        raise OutOfOrderEvent(f"event at {now} after {state.now}")
    started = state.started if now == state.now else frozenset()
    disabled = dict(state.disabled)

    if event.kind is EventKind.CLIP:
        disabled.pop(event.target, None)
        return replace(state, disabled=MappingProxyType(disabled), now=now, started=started), []

    side = _STARTS[event.kind]
    if _OTHER[side] in started:
        return replace(state, now=now, halted=True), [halt(now)]
    started = started | {side}
    actions = []
    if not state.currently_disabled(side, now):
        other = _OTHER[side]
        disabled.setdefault(other, now)
        actions.append(disable(other, now))
    return replace(state, disabled=MappingProxyType(disabled), now=now, started=started), actions


def _clip_first(event: TriggerEvent) -> int:
    return 0 if event.kind is EventKind.CLIP else 1


def run(events: Iterable[TriggerEvent], policy: AvoidancePolicy) -> list[Action]:
    """Replay an event stream and collect every action it causes.

    Opposing start triggers at one timestamp produce a single halt for that
    timestamp and end the run.
    """
    state = MonitorState()
    actions: list[Action] = []
    last = None
    for now, group in groupby(events, key=lambda e: e.time):
        if last is not None and now < last:
            raise OutOfOrderEvent(f"event at {now} after {last}")
        last = now
        group = sorted(group, key=_clip_first)
        kinds = {e.kind for e in group}
        if EventKind.X_START in kinds and EventKind.Y_START in kinds:
            actions.append(halt(now))
            return actions
        for event in group:
            state, out = step(state, event, policy)
            actions.extend(out)
    return actions
