"""Command-line entry point: ``gen``, ``run`` and ``analyze``."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import QueueError, TraceError
from .tf_queue import DEFAULT_MAX_FINGERS
from .trace import (
    WORKLOADS,
    TraceMismatch,
    TraceRunner,
    analyze_sequence,
    gen_trace,
    parse_trace,
    serialize_trace,
)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _emit(out, rec):
    out.write(json.dumps(rec, separators=(",", ":")) + "\n")


def cmd_gen(args, out):
    out.write(gen_trace(args.workload, args.size, args.seed, args.live))
    return 0


def cmd_run(args, out):
    ops = parse_trace(_read(args.trace))
    runner = TraceRunner(oracle=args.oracle, validate=args.validate, max_fingers=args.max_fingers)
    report = None
    if args.report == "-":
        report = out
    elif args.report:
        report = open(args.report, "w", encoding="utf-8")
    try:
        for rec in runner.run(ops):
            if report is not None:
                _emit(report, rec.as_dict())
        summary = runner.summary()
        if report is not None and report is not out:
            _emit(report, summary)
    except TraceMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        print(f"failing prefix ({len(e.prefix)} ops):", file=sys.stderr)
        sys.stderr.write(serialize_trace(e.prefix))
        return 1
    finally:
        if report is not None and report is not out:
            report.close()
    _emit(out, summary)
    return 0


def cmd_analyze(args, out):
    rep = analyze_sequence(_read(args.seq), args.finger, _read(args.ranks))
    for rec in rep.records():
        _emit(out, rec)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="timefinger", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated trace to stdout")
    g.add_argument("--workload", required=True, choices=WORKLOADS)
    g.add_argument("--size", required=True, type=int, help="number of operations")
    g.add_argument("--seed", required=True, type=int)
    g.add_argument("--live", type=int, default=None, help="target live count")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="execute a trace and print a summary record")
    r.add_argument("--trace", required=True, help="trace file, or - for stdin")
    r.add_argument("--oracle", action="store_true", help="cross-check every answer")
    r.add_argument("--validate", action="store_true", help="check invariants after every op")
    r.add_argument("--report", help="write per-op records here (- for stdout)")
    r.add_argument("--max-fingers", type=int, default=DEFAULT_MAX_FINGERS)
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("analyze", help="bounds of an access sequence")
    a.add_argument("--seq", required=True, help="access sequence file")
    a.add_argument("--finger", required=True, help="finger element")
    a.add_argument("--ranks", required=True, help="file of 'element rank' lines")
    a.set_defaults(func=cmd_analyze)
    return p


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    out = sys.stdout if out is None else out
    try:
        return args.func(args, out)
    except (TraceError, QueueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
