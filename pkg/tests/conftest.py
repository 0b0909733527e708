import random
from pathlib import Path

import pytest

from multirec import Eventuality, Interval, MultiRecurrence
from multirec.recurrence import cycle_duration

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]


def machine():
    return Eventuality.of("Machine", ("Working", 5), ("Maintenance", 3))


def week():
    return Eventuality.of("Week", *[(d, 1) for d in DAYS])


def factory(days=56):
    return MultiRecurrence.build(machine(), week(), Interval(0, days))


def random_eventuality(rng, name, max_len=5, max_dur=6):
    n = rng.randint(1, max_len)
    return Eventuality.of(name, *[(f"{name}{p}", rng.randint(1, max_dur)) for p in range(n)])


def random_multirecurrence(rng, n_cycles=3, max_len=5, max_dur=6):
    x = random_eventuality(rng, "x", max_len, max_dur)
    y = random_eventuality(rng, "y", max_len, max_dur)
    anchor = rng.randint(-50, 50)
    size = cycle_duration(x, y)
    return MultiRecurrence.build(x, y, Interval(anchor, anchor + n_cycles * size))


def scenario_corpus(n, seed, **kw):
    rng = random.Random(seed)
    return [random_multirecurrence(rng, **kw) for _ in range(n)]


@pytest.fixture
def factory_mr():
    return factory()


@pytest.fixture
def scenarios_dir():
    return SCENARIOS
