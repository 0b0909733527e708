import random

import pytest

from multirec.monitor import (
    Action,
    AvoidancePolicy,
    EventKind,
    Halted,
    MonitorError,
    MonitorState,
    OutOfOrderEvent,
    TriggerEvent,
    disable,
    halt,
    run,
    step,
)

POLICY = AvoidancePolicy(1, 1)
X, Y, CLIP = EventKind.X_START, EventKind.Y_START, EventKind.CLIP


def ev(t, kind, target=None):
    return TriggerEvent(t, kind, target)


def test_step_examples():
    _, out = step(MonitorState(), ev(5, X), POLICY)
    assert out == [disable("y", 5)]

    guarded = MonitorState(disabled={"x": 3}, now=3)
    _, out = step(guarded, ev(5, X), POLICY)
    assert out == []

    state, out = step(guarded, ev(4, CLIP, "x"), POLICY)
    assert out == [] and "x" not in state.disabled
    _, out = step(state, ev(5, X), POLICY)
    assert out == [disable("y", 5)]


def test_step_errors():
    state, _ = step(MonitorState(), ev(5, X), POLICY)
    with pytest.raises(OutOfOrderEvent):
        step(state, ev(4, Y), POLICY)
    state, out = step(state, ev(5, Y), POLICY)
    assert out == [halt(5)] and state.halted
    with pytest.raises(Halted):
        step(state, ev(6, X), POLICY)


def test_run_examples():
    assert run([ev(10, X), ev(10, Y)], POLICY) == [halt(10)]
    assert run([ev(1, X), ev(3, Y)], POLICY) == [disable("y", 1)]
    assert run([ev(1, X), ev(2, CLIP, "y"), ev(3, Y)], POLICY) == [disable("y", 1), disable("x", 3)]
    assert run([], POLICY) == []
    with pytest.raises(OutOfOrderEvent):
        run([ev(3, X), ev(2, Y)], POLICY)


def test_clip_at_same_time_is_applied_first():
    # Listed after the start, but the clip still restores x before it fires.
    events = [ev(1, Y), ev(4, X), ev(4, CLIP, "x")]
    assert run(events, POLICY) == [disable("x", 1), disable("y", 4)]


def test_halt_ends_the_run():
    events = [ev(1, X), ev(2, CLIP, "y"), ev(2, Y), ev(2, X), ev(9, X)]
    assert run(events, POLICY) == [disable("y", 1), halt(2)]


def test_policy_needs_predecessors():
    with pytest.raises(MonitorError):
        AvoidancePolicy(0, 1)
    with pytest.raises(MonitorError):
        AvoidancePolicy(1, 0)
    with pytest.raises(MonitorError):
        AvoidancePolicy(2, 1).check_lengths(2, 7)


def test_event_validation():
    with pytest.raises(MonitorError):
        ev(1, CLIP)
    with pytest.raises(MonitorError):
        ev(1, X, "y")
    assert ev(1, "clip", "x").kind is CLIP


def test_action_record():
    a = Action("disable", 15, "y")
    assert a.to_record(lambda t: f"{t / 10:g}", {"y": "Open"}) == {
        "type": "disable", "target": "Open", "time": "1.5"}


# Randomized interleavings checked against a reference that reads the
# guard straight from the action history.

def random_events(rng, n):
    t, events = 0, []
    for _ in range(n):
        t += rng.choice([0, 0, 1, 1, 2, 3])
        kind = rng.choice([X, Y, CLIP, CLIP])
        events.append(ev(t, kind, rng.choice("xy") if kind is CLIP else None))
    return events


def reference(events):
    actions, clips = [], []
    times = sorted({e.time for e in events})
    for t in times:
        group = [e for e in events if e.time == t]
        kinds = {e.kind for e in group}
        if X in kinds and Y in kinds:
            actions.append(halt(t))
            return actions
        clips += [(e.target, t) for e in group if e.kind is CLIP]
        for e in group:
            if e.kind is CLIP:
                continue
            side = "x" if e.kind is X else "y"
            guarded = any(
                a.target == side and a.time < t
                and not any(c == side and a.time < ct <= t for c, ct in clips)
                for a in actions)
            if not guarded:
                actions.append(disable("y" if side == "x" else "x", t))
    return actions


def random_runs(count, length, seed=0):
    rng = random.Random(seed)
    for _ in range(count):
        events = random_events(rng, length)
        yield events, run(events, POLICY)


def test_matches_reference():
    for events, actions in random_runs(200, 40):
        assert actions == reference(events)


def test_persistence_and_halt_precedence_over_1000_events():
    for events, actions in random_runs(5, 1000, seed=42):
        _check_properties(events, actions)


def _check_properties(events, actions):
    halts = [a for a in actions if a.type == "halt"]
    assert len(halts) <= 1 and (not halts or actions[-1] is halts[0])
    by_time = {}
    for e in events:
        by_time.setdefault(e.time, set()).add(e.kind)
    first_clash = min((t for t, ks in by_time.items() if {X, Y} <= ks), default=None)
    if first_clash is None:
        assert not halts
    else:
        assert halts == [halt(first_clash)]
        assert all(a.time < first_clash for a in actions[:-1])
    # Never both sides disabled at the same instant.
    stamps = {}
    for a in actions:
        if a.type == "disable":
            stamps.setdefault(a.time, set()).add(a.target)
    assert all(len(s) == 1 for s in stamps.values())
    # Persistence: once a side is disabled, its starts fire nothing until a clip.
    end = halts[0].time if halts else None
    for a in actions:
        if a.type != "disable":
            continue
        for e in sorted(events, key=lambda e: (e.time, e.kind is not CLIP)):
            if end is not None and e.time >= end:
                break
            if e.time <= a.time:
                continue
            if e.kind is CLIP and e.target == a.target:
                break
            if e.kind is (X if a.target == "x" else Y):
                other = "y" if a.target == "x" else "x"
                assert disable(other, e.time) not in actions
