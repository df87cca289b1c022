"""Command line front end: parse a thread-quiver file, run a check, print JSON.

Every check-style subcommand prints one JSON report object with
lexicographically ordered keys and exits 0 on pass, 1 on fail; usage and
parse errors exit 2.  The `dot` subcommand prints DOT text instead.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ParseError, ThreadQuiverError
from .dsl import emit_dot, parse_tq, sanitize_names, serialize_tq
from .linalg import field_by_name
from .report import Report
from .reps import PROJECTIVE, SIMPLE, ext_dim, std_module
from .serre import check_dualizing, check_serre
from .threads import extract_threadquiver, thread_analysis, thread_hom_check
from .windows import expand, normalize, window_iso


def _emit(report: Report) -> int:
    print(json.dumps(report.to_json_dict(), sort_keys=True, indent=2))
    return 0 if report.passed else 1


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tq(fh.read())


def _window(args, tq=None):
    tq = tq if tq is not None else _load(args.file)
    return expand(tq, args.depth, field=field_by_name(args.field))


def _probes(w, skip_boundary: bool):
    verts = w.interior_vertices() if skip_boundary else list(w.quiver.vertices)
    out = []
    for v in verts:
        out.append((f"P({v})", std_module(w, v, PROJECTIVE)))
        out.append((f"S({v})", std_module(w, v, SIMPLE)))
    return out


def cmd_check(args) -> int:
    report = Report("check")
    try:
        tq = _load(args.file)
    except ParseError as e:
        print(str(e), file=sys.stderr)
        return 2
    report.tally()
    # statistics go through stderr; the machine answer is the report
    print(
        f"vertices={len(tq.vertices)} standard={len(tq.standard_arrows)}"
        f" threads={len(tq.thread_arrows)} relations={len(tq.relations)}",
        file=sys.stderr,
    )
    return _emit(report)


def cmd_normalize(args) -> int:
    tq = sanitize_names(normalize(_load(args.file)))
    sys.stdout.write(serialize_tq(tq))
    return 0


def cmd_expand(args) -> int:
    w = _window(args)
    report = Report("expand")
    report.tally()
    print(
        json.dumps(
            {
                "arrows": len(w.quiver.arrows),
                "boundary": sorted(w.boundary),
                "depth": args.depth,
                "relations": len(w.relations),
                "vertices": len(w.quiver.vertices),
            },
            sort_keys=True,
            indent=2,
        )
    )
    return 0


def cmd_dot(args) -> int:
    tq = _load(args.file)
    if args.expanded:
        sys.stdout.write(emit_dot(_window(args, tq)))
    else:
        sys.stdout.write(emit_dot(tq))
    return 0


def cmd_hom(args) -> int:
    w = _window(args)
    report = Report("hom")
    report.tally()
    if args.x not in set(w.quiver.vertices) or args.y not in set(w.quiver.vertices):
        print("unknown vertex", file=sys.stderr)
        return 2
    d = w.hom_dim(args.x, args.y)
    print(json.dumps({"check": "hom", "items": [
        {"actual": str(d), "expected": "", "location": "",
         "subject": f"dim hom({args.x}, {args.y})"}],
        "status": "pass"}, sort_keys=True, indent=2))
    return 0


def cmd_ext(args) -> int:
    w = _window(args)
    if args.x not in set(w.quiver.vertices) or args.y not in set(w.quiver.vertices):
        print("unknown vertex", file=sys.stderr)
        return 2
    sx = std_module(w, args.x, SIMPLE)
    sy = std_module(w, args.y, SIMPLE)
    try:
        d = ext_dim(args.degree, sx, sy, args.max_len)
        actual = str(d)
        status = "pass"
        items = [{"actual": actual, "expected": "", "location": "",
                  "subject": f"dim ext^{args.degree}(S({args.x}), S({args.y}))"}]
    except ThreadQuiverError as e:
        status = "fail"
        items = [{"actual": type(e).__name__, "expected": f"<= {args.max_len}",
                  "location": "", "subject": f"ext^{args.degree}"}]
    print(json.dumps({"check": "ext", "items": items, "status": status},
                     sort_keys=True, indent=2))
    return 0 if status == "pass" else 1


def cmd_serre_check(args) -> int:
    w = _window(args)
    report = check_serre(
        w,
        _probes(w, args.skip_boundary),
        args.max_len,
        forbid_boundary=args.skip_boundary,
    )
    return _emit(report)


def cmd_dualizing_check(args) -> int:
    w = _window(args)
    report = check_dualizing(w, max_len=args.max_len,
                             strict_boundary=args.strict_boundary)
    return _emit(report)


def cmd_threads(args) -> int:
    w = _window(args)
    tv, intervals = thread_analysis(w)
    report = thread_hom_check(w)
    report.check = "threads"
    print(
        f"thread vertices: {len(tv)}; maximal threads: "
        + ", ".join(f"[{a}..{b}]" for a, b in intervals),
        file=sys.stderr,
    )
    return _emit(report)


def cmd_extract(args) -> int:
    w = _window(args)
    tq = sanitize_names(extract_threadquiver(w, args.min_thread_len))
    sys.stdout.write(serialize_tq(tq))
    return 0


def cmd_roundtrip(args) -> int:
    tq = _load(args.file)
    w = expand(tq, args.depth, field=field_by_name(args.field))
    report = Report("roundtrip")
    report.tally()
    extracted = extract_threadquiver(w, args.min_thread_len)
    w0 = expand(extracted, 0, field=field_by_name(args.field))
    iso = window_iso(w0, w)
    if iso is None:
        report.fail(
            "expand(extract(expand(tq, depth)), 0)",
            "isomorphic to expand(tq, depth)",
            "NotIsomorphic",
        )
    return _emit(report)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="threadquiver",
        description="thread-quiver expansion and homological structure checks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="thread-quiver DSL file")
        p.add_argument("--depth", type=int, default=2)
        p.add_argument("--max-len", type=int, default=6, dest="max_len")
        p.add_argument("--min-thread-len", type=int, default=3, dest="min_thread_len")
        p.add_argument("--field", default="q", help="q or fp:<prime>")
        p.add_argument(
            "--skip-boundary", action=argparse.BooleanOptionalAction, default=True,
            help="restrict checks to interior vertices (default on)")

    for name, fn in [
        ("check", cmd_check),
        ("normalize", cmd_normalize),
        ("expand", cmd_expand),
        ("dot", cmd_dot),
        ("hom", cmd_hom),
        ("ext", cmd_ext),
        ("serre-check", cmd_serre_check),
        ("dualizing-check", cmd_dualizing_check),
        ("threads", cmd_threads),
        ("extract", cmd_extract),
        ("roundtrip", cmd_roundtrip),
    ]:
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)
        if name == "dot":
            p.add_argument("--expanded", action="store_true",
                           help="render the expanded window instead")
        if name == "dualizing-check":
            p.add_argument("--strict-boundary", action="store_true",
                           help="fail presentations that touch truncation artifacts")
        if name in ("hom", "ext"):
            p.add_argument("x")
            p.add_argument("y")
        if name == "ext":
            p.add_argument("--degree", type=int, default=1)
    return ap


def run(argv: list[str]) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as e:
        print(str(e), file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(str(e), file=sys.stderr)
        return 2
    except ThreadQuiverError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
