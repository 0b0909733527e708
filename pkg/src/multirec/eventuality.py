"""Eventualities: ordered sequences of fixed-duration labeled components."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Optional, Sequence

from .interval_core import Interval, common, is_disjoint


class EventualityError(ValueError):
    pass


class IndexOutOfRange(EventualityError, IndexError):
    pass


@dataclass(frozen=True)
class Component:
    label: str
    duration: int

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise EventualityError("component label must be a non-empty string")
        if isinstance(self.duration, bool) or not isinstance(self.duration, int):
            raise EventualityError(f"duration of {self.label} must be an integer")
        if self.duration < 1:
            raise EventualityError(f"duration of {self.label} must be at least 1 tick")

    def __str__(self):
        return f"{self.label}:{self.duration}"


@dataclass(frozen=True)
class PeriodLayout:
    """Offsets of each component relative to the start of a period."""

    offsets: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.offsets or self.offsets[0][0] != 0:
            raise EventualityError("layout must start at offset 0")
        for (a, b), (c, _) in zip(self.offsets, self.offsets[1:]):
            if b != c:
                raise EventualityError("layout offsets must form a contiguous chain")
        if any(a >= b for a, b in self.offsets):
            raise EventualityError("every component slot must be non-empty")

    @property
    def period(self) -> int:
        return self.offsets[-1][1]

    def __getitem__(self, p: int) -> tuple[int, int]:
        return self.offsets[p]

    def __len__(self):
        return len(self.offsets)


@dataclass(frozen=True)
class Eventuality:
    name: str
    components: tuple[Component, ...]

    def __init__(self, name: str, components: Sequence[Component]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "components", tuple(components))
        if not self.components:
            raise EventualityError(f"eventuality {name!r} needs at least one component")
        labels = [c.label for c in self.components]
        if len(set(labels)) != len(labels):
            raise EventualityError(f"duplicate component labels in {name!r}")

    @classmethod
    def of(cls, name: str, *parts: tuple[str, int]) -> "Eventuality":
        """Shorthand: ``Eventuality.of("Machine", ("Working", 5), ("Maintenance", 3))``."""
        return cls(name, [Component(label, d) for label, d in parts])

    def __len__(self):
        return len(self.components)

    @property
    def period(self) -> int:
        return sum(c.duration for c in self.components)

    def comp(self, p: int) -> Component:
        return comp(self, p)

    def index_of(self, label: str) -> int:
        for p, c in enumerate(self.components):
            if c.label == label:
                return p
        raise KeyError(f"{self.name} has no component labeled {label!r}")

    def layout(self) -> PeriodLayout:
        return layout(self)

    def __str__(self):
        return f"{self.name}(" + ", ".join(str(c) for c in self.components) + ")"


def period_duration(ev: Eventuality) -> int:
    return ev.period


def layout(ev: Eventuality) -> PeriodLayout:
    ends = list(accumulate(c.duration for c in ev.components))
    starts = [0] + ends[:-1]
    return PeriodLayout(tuple(zip(starts, ends)))


def comp(ev: Eventuality, p: int) -> Component:
    """Component ``p`` of ``ev``, counting from 0."""
    if isinstance(p, bool) or not isinstance(p, int) or not 0 <= p < len(ev):
        raise IndexOutOfRange(f"{ev.name} has components 0..{len(ev) - 1}, not {p!r}")
    return ev.components[p]


def plus_interval(i: Interval, j: Interval) -> Optional[Interval]:
    """Maximal-truth interval of ``x + y`` for one incidence of each operand.

    Returns None when the incidences are disjoint (meeting counts as disjoint).
    """
    if is_disjoint(i, j):
        return None
    return common(i, j)
