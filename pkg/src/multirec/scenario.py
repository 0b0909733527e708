"""JSON scenario and event-log files.

A scenario names two eventualities, the shared anchor and the horizon
length, all in one decimal unit::

    {
      "name": "factory",
      "unit": "day",
      "anchor": "0",
      "horizon": "56",
      "x": {"name": "Machine",
            "components": [{"label": "Working", "duration": "5"},
                           {"label": "Maintenance", "duration": "3"}]},
      "y": {"name": "Week", "components": [...]},
      "queries": [{"x": "Maintenance", "y": "Wednesday"}]
    }

An event log lists trigger events for the monitor::

    {
      "policy": {"x": "Maintenance", "y": "Wednesday"},
      "events": [{"time": "5", "kind": "x-start"},
                 {"time": "6", "kind": "clip", "target": "y"}]
    }

The policy may give labels (resolved against a scenario) or ordinals
``{"p": 1, "q": 1}``. Clip targets are ``"x"``/``"y"`` or the averted labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .eventuality import Component, Eventuality
from .interval_core import DurationScale, Interval, decimal_places, normalize_durations, parse_decimal
from .monitor import AvoidancePolicy, EventKind, TriggerEvent
from .recurrence import MultiRecurrence


class ScenarioError(ValueError):
    pass


def _decimal_text(value, what: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ScenarioError(f"{what} must be a decimal string, got {value!r}")
    text = str(value).strip()
    try:
        parse_decimal(text)
    except ValueError as exc:
        raise ScenarioError(f"{what}: {exc}") from None
    return text


def read_json(path: Union[str, Path]):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from None


@dataclass(frozen=True)
class EventualitySpec:
    name: str
    components: tuple[tuple[str, str], ...]

    @classmethod
    def from_dict(cls, data: dict, side: str) -> "EventualitySpec":
        if not isinstance(data, dict) or "name" not in data or "components" not in data:
            raise ScenarioError(f"eventuality {side!r} needs 'name' and 'components'")
        comps = []
        for n, c in enumerate(data["components"]):
            try:
                label = c["label"]
                duration = c["duration"]
            except (KeyError, TypeError):
                raise ScenarioError(f"{side} component {n} needs 'label' and 'duration'") from None
            comps.append((str(label), _decimal_text(duration, f"{side}.{label} duration")))
        if not comps:
            raise ScenarioError(f"eventuality {side!r} has no components")
        return cls(str(data["name"]), tuple(comps))

    def to_dict(self) -> dict:
        return {"name": self.name,
                "components": [{"label": l, "duration": d} for l, d in self.components]}


@dataclass(frozen=True)
class Scenario:
    name: str
    x: EventualitySpec
    y: EventualitySpec
    horizon: str
    anchor: str = "0"
    unit: str = "tick"
    queries: tuple[tuple[str, str], ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be a JSON object")
        for key in ("x", "y", "horizon"):
            if key not in data:
                raise ScenarioError(f"scenario is missing {key!r}")
        queries = []
        for q in data.get("queries", []):
            try:
                queries.append((str(q["x"]), str(q["y"])))
            except (KeyError, TypeError):
                raise ScenarioError(f"query {q!r} needs 'x' and 'y' labels") from None
        scenario = cls(
            name=str(data.get("name", "scenario")),
            x=EventualitySpec.from_dict(data["x"], "x"),
            y=EventualitySpec.from_dict(data["y"], "y"),
            horizon=_decimal_text(data["horizon"], "horizon"),
            anchor=_decimal_text(data.get("anchor", "0"), "anchor"),
            unit=str(data.get("unit", "tick")),
            queries=tuple(queries),
        )
        scenario.normalize()  # fail early on invalid content
        return scenario

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Scenario":
        return cls.from_dict(read_json(path))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "unit": self.unit,
            "anchor": self.anchor,
            "horizon": self.horizon,
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
            "queries": [{"x": a, "y": b} for a, b in self.queries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def normalize(self) -> "NormalizedScenario":
        raw = [d for _, d in self.x.components] + [d for _, d in self.y.components] + [self.horizon]
        try:
            _, scale = normalize_durations(raw)
            scale = DurationScale(max(scale.k, decimal_places(self.anchor)))
            evs = []
            for spec in (self.x, self.y):
                evs.append(Eventuality(spec.name, [Component(l, scale.to_ticks(d))
                                                   for l, d in spec.components]))
            start = scale.to_ticks(self.anchor)
            horizon = Interval(start, start + scale.to_ticks(self.horizon))
            mr = MultiRecurrence.build(evs[0], evs[1], horizon)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None
        for a, b in self.queries:
            if a not in {l for l, _ in self.x.components}:
                raise ScenarioError(f"query label {a!r} is not a component of {self.x.name}")
            if b not in {l for l, _ in self.y.components}:
                raise ScenarioError(f"query label {b!r} is not a component of {self.y.name}")
        return NormalizedScenario(self, scale, mr)


@dataclass(frozen=True)
class NormalizedScenario:
    source: Scenario
    scale: DurationScale
    mr: MultiRecurrence

    def render(self, ticks: int) -> str:
        return self.scale.render(ticks)

    def ticks(self, text) -> int:
        return self.scale.to_ticks(text)


@dataclass
class EventLog:
    events: list[TriggerEvent]
    scale: DurationScale
    policy: Optional[dict] = None


def load_event_log(path_or_data, scale: Optional[DurationScale] = None,
                   clip_labels: Optional[dict[str, str]] = None) -> EventLog:
    """Parse an event log, scaling times to integer ticks.

    ``scale`` is widened if event times carry more decimal places.
    ``clip_labels`` maps component labels to ``"x"``/``"y"``.
    """
    if isinstance(path_or_data, (str, Path)):
        data = read_json(path_or_data)
    else:
        data = path_or_data
    if isinstance(data, list):
        data = {"events": data}
    records = data.get("events", [])
    times = [_decimal_text(r.get("time"), f"event {n} time") for n, r in enumerate(records)]
    k = max([decimal_places(t) for t in times] + [scale.k if scale else 0])
    scale = DurationScale(k)
    clip_labels = dict(clip_labels or {})
    events = []
    for n, (r, t) in enumerate(zip(records, times)):
        target = r.get("target")
        if target is not None:
            target = clip_labels.get(target, target)
        try:
            events.append(TriggerEvent(scale.to_ticks(t), EventKind(r.get("kind")), target))
        except ValueError as exc:
            raise ScenarioError(f"event {n}: {exc}") from None
    return EventLog(events, scale, data.get("policy"))


def policy_from(spec: Optional[dict], normalized: Optional[NormalizedScenario]) -> AvoidancePolicy:
    if not spec:
        raise ScenarioError("no avoidance policy given")
    if "p" in spec and "q" in spec:
        policy = AvoidancePolicy(int(spec["p"]), int(spec["q"]))
    elif "x" in spec and "y" in spec:
        if normalized is None:
            raise ScenarioError("label policies need a scenario to resolve labels")
        try:
            policy = AvoidancePolicy(normalized.mr.x.eventuality.index_of(spec["x"]),
                                     normalized.mr.y.eventuality.index_of(spec["y"]))
        except KeyError as exc:
            raise ScenarioError(str(exc)) from None
    else:
        raise ScenarioError(f"policy {spec!r} needs p/q ordinals or x/y labels")
    if normalized is not None:
        policy.check_lengths(len(normalized.mr.x.eventuality), len(normalized.mr.y.eventuality))
    return policy
