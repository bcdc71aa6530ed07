"""``pathlens analyze`` command line."""

from __future__ import annotations

import argparse
import ast
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import ir
from .backward import Refuted, WitnessFound
from .constraints import pretty
from .driver import AnalyzerConfig, analyze_program, refute
from .forward import DivergenceError
from .frontend import LoweringError, SourceProgram, SubsetSyntaxError
from .summaries import SummaryFormatError

EXIT_CLEAN, EXIT_CONFIRMED, EXIT_FAILURE = 0, 1, 2

ENV_SUMMARY_PATH = "PATHLENS_SUMMARY_PATH"
SUMMARY_SUFFIXES = (".summary", ".summaries", ".txt")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathlens", description="Attribute-error analysis for a Python subset.")
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="analyze a whole program")
    a.add_argument("files", nargs="+", type=Path)
    a.add_argument("--entry", help="function the program starts in (default: the only uncalled function, or main)")
    a.add_argument("--no-backward", dest="backward", action="store_false",
                   help="report forward-analysis candidates without refutation")
    a.add_argument("--max-stack", type=int, default=3)
    a.add_argument("--max-steps", type=int, default=20_000)
    a.add_argument("--unroll", type=int, default=2)
    a.add_argument("--k-prim", type=int, default=4)
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--summaries", action="append", default=[], type=Path, metavar="FILE")
    a.add_argument("--dump-states", action="store_true", help="write per-point forward states (JSON) to stderr")
    a.add_argument("--dump-cfg", action="store_true", help="write CFGs and the call graph (DOT) to stderr")
    a.add_argument("--explain", metavar="ID", help="print the backward search for one candidate")
    a.add_argument("--show-excluded", action="store_true", help="also list excluded error kinds")
    return parser


def summary_paths(explicit) -> list:
    """Files from PATHLENS_SUMMARY_PATH (files or directories), then ``--summaries``."""
    out = []
    for entry in filter(None, os.environ.get(ENV_SUMMARY_PATH, "").split(os.pathsep)):
        p = Path(entry)
        if p.is_dir():
            out += sorted(f for f in p.iterdir() if f.suffix in SUMMARY_SUFFIXES)
        else:
            out.append(p)
    return out + list(explicit)


def infer_entry(paths) -> str:
    """The single top-level function nobody calls by name; ``main`` breaks ties."""
    defined, called = [], set()
    for path in paths:
        tree = ast.parse(Path(path).read_text(), str(path))
        defined += [n.name for n in tree.body if isinstance(n, ast.FunctionDef)]
        for node in ast.walk(tree):
            if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
                called.add(node.func.id)
    roots = [f for f in defined if f not in called]
    if len(roots) == 1:
        return roots[0]
    if "main" in defined:
        return "main"
    raise UsageError("cannot infer the entry function; pass --entry")


def explain(analysis, cid: str, out) -> None:
    c = analysis.report.candidate(cid)
    if c is None:
        raise UsageError(f"no candidate {cid!r}")
    print(f"{c.id}: {c.variable} may be {c.type} at {c.file}:{c.line} ({c.point})", file=out)
    if c.kind != "attribute-error":
        print("  no backward query for this kind", file=out)
        return

    def log(pp: ir.ProgramPoint, frame: int, conj) -> None:
        print(f"  {pp} [frame {frame}]  {pretty(conj)}", file=out)

    r = refute(analysis.task, c, log=log)
    if isinstance(r, Refuted):
        print(f"refuted after {r.steps} steps", file=out)
    elif isinstance(r, WitnessFound):
        path = " <- ".join(str(p) for p in reversed(r.trace))
        print(f"witness ({r.note}) after {r.steps} steps: {pretty(r.conjunct)}", file=out)
        print(f"  path: {path or '(start point)'}", file=out)
    else:
        print(f"budget exceeded: {r.reason} after {r.steps} steps", file=out)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_FAILURE if e.code else EXIT_CLEAN
    out, err = sys.stdout, sys.stderr
    try:
        for f in args.files:
            if not f.is_file():
                raise UsageError(f"no such file: {f}")
        entry = args.entry or infer_entry(args.files)
        config = AnalyzerConfig(
            entry=entry, backward=args.backward, max_stack=args.max_stack, max_steps=args.max_steps,
            unroll=args.unroll, k_prim=args.k_prim, format=args.format,
            summary_paths=tuple(summary_paths(args.summaries)), dump_states=args.dump_states,
            dump_cfg=args.dump_cfg, show_excluded=args.show_excluded,
        )
        analysis = analyze_program(SourceProgram.from_paths(args.files, entry), config)
        if args.dump_states:
            print(json.dumps(analysis.forward.to_json(), indent=2, sort_keys=True), file=err)
        if args.dump_cfg:
            print(ir.program_to_dot(analysis.cfgs, analysis.callgraph), file=err)
        report = analysis.report
        if args.explain:
            explain(analysis, args.explain, out)
        elif config.format == "json":
            print(report.dumps(args.show_excluded), file=out)
        else:
            print(report.to_text(args.show_excluded), file=out)
    except (UsageError, ValueError, OSError, SyntaxError, SubsetSyntaxError, LoweringError, SummaryFormatError,
            DivergenceError, ir.UnresolvedCallee) as e:
        print(f"pathlens: error: {e}", file=err)
        return EXIT_FAILURE
    return EXIT_CONFIRMED if report.confirmed + report.budget else EXIT_CLEAN


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
