"""Command line interface.

Exit codes: 0 success (or coincidence found), 1 usage or validation error,
2 axiom or regularity violations, 3 coincidence impossible, 4 monitor halted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .coincidence import ENGINES, CoincidenceQuery, Found, NeedTwoCycles, check_cycle_regularity
from .monitor import run as run_monitor
from .recurrence import HorizonTooLarge, check_axioms, cycle_duration, cycles, eta, phi
from .scenario import NormalizedScenario, Scenario, ScenarioError, load_event_log, policy_from, read_json

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATIONS = 2
EXIT_IMPOSSIBLE = 3
EXIT_HALT = 4

CHART_MAX_WIDTH = 400
_GLYPHS = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class UsageError(ValueError):
    pass


def _emit(records: list[dict], fmt: str, out, extra: Optional[dict] = None) -> None:
    """Write records as one JSON document or as ``kind key=value ...`` lines."""
    if fmt == "json":
        doc = {"records": records}
        if extra:
            doc.update(extra)
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    for rec in records:
        rec = dict(rec)
        kind = rec.pop("record")
        fields = " ".join(f"{k}={_text(v)}" for k, v in rec.items())
        out.write(f"{kind} {fields}".rstrip() + "\n")
    for line in (extra or {}).get("chart", []):
        out.write(line + "\n")


def _text(v) -> str:
    if v is None:
        return "-"
    s = str(v)
    return json.dumps(s) if (" " in s or not s) else s


def _load(args) -> NormalizedScenario:
    if not args.scenario:
        raise UsageError("--scenario is required")
    return Scenario.load(args.scenario).normalize()


def cmd_validate(args, out) -> int:
    ns = _load(args)
    mr = ns.mr
    src = ns.source
    records = [{"record": "scenario", "name": src.name, "unit": src.unit,
                "scale_k": ns.scale.k, "horizon": src.horizon, "anchor": src.anchor}]
    for side in ("x", "y"):
        ev = mr.side(side).eventuality
        records.append({"record": "eventuality", "side": side, "name": ev.name,
                        "length": len(ev), "period": ns.render(ev.period)})
    records.append({"record": "valid", "cycles": cycles(mr).dim})
    _emit(records, args.format, out)
    return EXIT_OK


def cmd_cycle(args, out) -> int:
    ns = _load(args)
    mr = ns.mr
    size = cycle_duration(mr.x.eventuality, mr.y.eventuality)
    records = [{"record": "cycle-duration", "value": ns.render(size)}]
    for n, w in enumerate(cycles(mr), 1):
        records.append({"record": "cycle", "index": n,
                        "start": ns.render(w.start), "end": ns.render(w.end)})
    _emit(records, args.format, out)
    return EXIT_OK


def coincidence_report(ns: NormalizedScenario, x_label: str, y_label: str, engine: str) -> dict:
    if engine not in ENGINES:
        raise UsageError(f"unknown engine {engine!r}; choose from {sorted(ENGINES)}")
    mr = ns.mr
    try:
        query = CoincidenceQuery.from_labels(mr, x_label, y_label)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    decision = ENGINES[engine](mr, query)
    rec = {"record": "coincidence", "engine": engine, "x": x_label, "y": y_label,
           "verdict": "found" if decision.found else "impossible",
           "r": None, "s": None, "start": None, "end": None,
           "span_start": None, "span_end": None, "cycles_examined": None, "pairs_checked": None}
    if isinstance(decision, Found):
        w = decision.witness
        rec.update(r=w.r, s=w.s, start=ns.render(w.overlap.start), end=ns.render(w.overlap.end))
    else:
        rec.update(span_start=ns.render(decision.span.start), span_end=ns.render(decision.span.end),
                   cycles_examined=decision.cycles_examined, pairs_checked=decision.pairs_checked)
    return rec


def cmd_coincide(args, out) -> int:
    ns = _load(args)
    if args.x or args.y:
        if not (args.x and args.y):
            raise UsageError("give both --x and --y")
        pairs = [(args.x, args.y)]
    else:
        pairs = list(ns.source.queries)
        if not pairs:
            raise UsageError("no --x/--y given and the scenario lists no queries")
    records = [coincidence_report(ns, a, b, args.engine) for a, b in pairs]
    _emit(records, args.format, out)
    return EXIT_OK if all(r["verdict"] == "found" for r in records) else EXIT_IMPOSSIBLE


def cmd_oracle(args, out) -> int:
    args.engine = "oracle"
    return cmd_coincide(args, out)


def timeline(ns: NormalizedScenario, until_ticks: int) -> tuple[list[dict], list[str]]:
    mr = ns.mr
    h = mr.horizon
    end = h.start + until_ticks
    records = []
    rows = []
    for side in ("x", "y"):
        rec = mr.side(side)
        ev = rec.eventuality
        row = []
        for r, period in enumerate(eta(rec, h), 1):
            if period.start >= end:
                break
            for p, c in enumerate(ev.components):
                i = phi(ev, p, period)
                if i.start >= end:
                    break
                records.append({"record": "incidence", "side": side, "eventuality": ev.name,
                                "label": c.label, "period": r,
                                "start": ns.render(i.start), "end": ns.render(i.end)})
                row.extend(_GLYPHS[p % len(_GLYPHS)] * (min(i.end, end) - i.start))
        rows.append((ev, "".join(row)))
    boundaries = [w.end for w in cycles(mr) if w.end <= end]
    for b in boundaries:
        records.append({"record": "cycle-boundary", "time": ns.render(b)})

    chart = []
    if until_ticks <= CHART_MAX_WIDTH:
        width = max(len(ev.name) for ev, _ in rows)
        marks = ["."] * until_ticks
        for b in boundaries:
            marks[b - h.start - 1] = "|"
        chart.append(" " * width + " " + "".join(marks))
        for ev, row in rows:
            chart.append(ev.name.ljust(width) + " " + row)
        for ev, _ in rows:
            legend = " ".join(f"{_GLYPHS[p % len(_GLYPHS)]}={c.label}"
                              for p, c in enumerate(ev.components))
            chart.append(f"{ev.name}: {legend}")
    else:
        chart.append(f"(chart omitted: {until_ticks} ticks exceed {CHART_MAX_WIDTH})")
    return records, chart


def cmd_timeline(args, out) -> int:
    ns = _load(args)
    if args.until is None:
        raise UsageError("--until is required")
    try:
        until = ns.ticks(args.until)
    except ValueError:
        raise UsageError(f"--until {args.until!r} is not a whole number of ticks") from None
    if until <= 0:
        raise UsageError("--until must be positive")
    if until > ns.mr.horizon.duration:
        raise UsageError(f"--until {args.until} exceeds the horizon {ns.source.horizon}")
    records, chart = timeline(ns, until)
    _emit(records, args.format, out, {"chart": chart})
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    if not args.events:
        raise UsageError("--events is required")
    ns = _load(args) if args.scenario else None
    policy_spec = None
    if args.x or args.y:
        policy_spec = {"x": args.x, "y": args.y}
    data = read_json(args.events)
    if not policy_spec and isinstance(data, dict):
        policy_spec = data.get("policy")
    policy = policy_from(policy_spec, ns)
    labels = {"x": f"x_{policy.p}", "y": f"y_{policy.q}"}
    aliases = {v: k for k, v in labels.items()}
    if ns is not None:
        labels = {"x": ns.mr.x.eventuality.comp(policy.p).label,
                  "y": ns.mr.y.eventuality.comp(policy.q).label}
        aliases.update({v: k for k, v in labels.items()})
    log = load_event_log(data, ns.scale if ns else None, aliases)
    actions = run_monitor(log.events, policy)
    records = [{"record": "action", **a.to_record(log.scale.render, labels)} for a in actions]
    _emit(records, args.format, out)
    return EXIT_HALT if actions and actions[-1].type == "halt" else EXIT_OK


def cmd_check_axioms(args, out) -> int:
    ns = _load(args)
    report = check_axioms(ns.mr, max_grid_points=args.max_grid)
    records = [{"record": "check", "name": name, "instances": n,
                "violations": sum(v.check == name for v in report.violations)}
               for name, n in report.checked.items()]
    ok = report.ok
    try:
        regular = check_cycle_regularity(ns.mr)
    except NeedTwoCycles:
        regular = None
    if regular is not None:
        records += [{"record": "check", "name": name, "instances": n,
                     "violations": sum(v.check == name for v in regular.violations)}
                    for name, n in regular.checked.items()]
        ok = ok and regular.ok
    records.append({"record": "summary", "ok": ok})
    _emit(records, args.format, out)
    return EXIT_OK if ok else EXIT_VIOLATIONS


COMMANDS = {
    "validate": (cmd_validate, "check a scenario file and summarize it"),
    "cycle": (cmd_cycle, "print the cycle duration and cycle map"),
    "coincide": (cmd_coincide, "decide whether two components ever overlap"),
    "oracle": (cmd_oracle, "coincide using the brute-force engine"),
    "timeline": (cmd_timeline, "list incidences and draw a chart"),
    "simulate": (cmd_simulate, "replay an event log through the avoidance monitor"),
    "check-axioms": (cmd_check_axioms, "check the recurrence theory on a scenario"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multirec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", help="scenario JSON file")
        p.add_argument("--format", choices=["json", "text"], default="text")
        if name in ("coincide", "oracle", "simulate"):
            p.add_argument("--x", help="component label of the x eventuality")
            p.add_argument("--y", help="component label of the y eventuality")
        if name == "coincide":
            p.add_argument("--engine", choices=sorted(ENGINES), default="cycle")
        if name == "timeline":
            p.add_argument("--until", help="length from the anchor, in scenario units")
        if name == "simulate":
            p.add_argument("--events", help="event log JSON file")
        if name == "check-axioms":
            p.add_argument("--max-grid", type=int, default=128,
                           help="largest endpoint grid to enumerate")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    handler = COMMANDS[args.command][0]
    try:
        return handler(args, out)
    except (UsageError, ScenarioError, HorizonTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
