"""The two-phase pipeline: forward analysis, candidate extraction, backward refutation."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from . import ir
from .backward import BackwardTask, Budgets, BudgetExceeded, Refuted, WitnessFound, make_initial_query
from .forward import NONE, NUMERIC, Addr, Prim, Ty, Var, analyze, has_attr, type_from_name, type_of
from .frontend import SourceProgram, load_program
from .interp import interpret  # noqa: F401  (re-exported for the test oracles)
from .summaries import SummaryTable, load_summaries

ATTRIBUTE_ERROR = "attribute-error"
POSSIBLY_UNDEFINED = "possibly-undefined"
ZERO_DIVISION = "zero-division"
EXCLUDED_KINDS = (ZERO_DIVISION,)

CONFIRMED = "confirmed-possible"
REFUTED = "refuted"
BUDGET = "budget"


@dataclass(frozen=True)
class AnalyzerConfig:
    entry: Optional[str] = None
    backward: bool = True
    max_stack: int = 3
    max_steps: int = 20_000
    max_conjuncts: int = 5_000
    unroll: int = 2
    k_prim: int = 4
    format: str = "text"
    summary_paths: tuple = ()
    dump_states: bool = False
    dump_cfg: bool = False
    show_excluded: bool = False
    skip: bool = True

    def __post_init__(self):
        for name in ("max_stack", "max_steps", "max_conjuncts", "unroll", "k_prim"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")

    @property
    def budgets(self) -> Budgets:
        return Budgets(self.max_stack, self.max_steps, self.max_conjuncts, self.unroll)


@dataclass
class ErrorCandidate:
    kind: str
    point: ir.ProgramPoint
    file: str
    line: int
    col: int
    variable: str
    type: str  # offending type: NONE, INT, ..., or a class name
    context: Optional[ir.ProgramPoint] = None  # caller call site the query starts from
    id: str = ""
    status: str = CONFIRMED
    note: str = ""
    result: object = None  # the backward WitnessResult, when one was computed

    @property
    def key(self) -> tuple:
        return (self.point, self.variable, self.type, self.context)

    def sort_key(self) -> tuple:
        ctx = self.context
        cs = (ctx.fn, ctx.block, ctx.index) if ctx else ("", -1, -1)
        p = self.point
        return (self.file, self.line, self.col, p.fn, p.block, p.index, self.kind,
                self.variable, self.type, cs)

    def to_json(self) -> dict:
        out = {
            "id": self.id, "kind": self.kind, "file": self.file, "line": self.line,
            "variable": self.variable, "type": self.type,
            "context": str(self.context) if self.context else None,
            "status": self.status,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    candidates: list
    excluded: list = field(default_factory=list)
    forward_ms: float = 0.0
    backward_ms: float = 0.0
    total_ms: float = 0.0
    entry: str = ""

    def count(self, status: str) -> int:
        return sum(1 for c in self.candidates if c.status == status)

    @property
    def confirmed(self) -> int:
        return self.count(CONFIRMED)

    @property
    def refuted(self) -> int:
        return self.count(REFUTED)

    @property
    def budget(self) -> int:
        return self.count(BUDGET)

    @property
    def reported(self) -> list:
        """Candidates still reported as errors: confirmed-possible or budget."""
        return [c for c in self.candidates if c.status != REFUTED]

    def candidate(self, cid: str) -> Optional[ErrorCandidate]:
        return next((c for c in self.candidates + self.excluded if c.id == cid), None)

    def to_json(self, show_excluded: bool = False) -> dict:
        out = {
            "candidates": [c.to_json() for c in self.candidates],
            "totals": {"confirmed": self.confirmed, "refuted": self.refuted, "budget": self.budget},
            "timing": {"forward_ms": round(self.forward_ms, 3), "backward_ms": round(self.backward_ms, 3),
                       "total_ms": round(self.total_ms, 3)},
        }
        if show_excluded:
            out["excluded"] = [c.to_json() for c in self.excluded]
        return out

    def dumps(self, show_excluded: bool = False) -> str:
        return json.dumps(self.to_json(show_excluded), indent=2, sort_keys=True)

    def to_text(self, show_excluded: bool = False) -> str:
        lines = []
        shown = self.candidates + (self.excluded if show_excluded else [])
        for c in shown:
            where = f"{c.file}:{c.line}"
            ctx = f" [context {c.context}]" if c.context else ""
            note = f" ({c.note})" if c.note else ""
            if c.kind == ATTRIBUTE_ERROR:
                what = f"{c.variable} may be {c.type}"
            elif c.kind == POSSIBLY_UNDEFINED:
                what = f"{c.variable} may be undefined"
            else:
                what = f"{c.variable} may be zero"
            lines.append(f"{c.id} {where}: {c.kind}: {what}{ctx} -> {c.status}{note}")
        lines.append(f"confirmed:{self.confirmed} refuted:{self.refuted} budget:{self.budget}")
        return "\n".join(lines)


# -- analysis state shared by run() and the CLI -------------------------------


@dataclass
class Analysis:
    program: ir.IRProgram
    cfgs: dict
    forward: object
    callgraph: ir.CallGraph
    summaries: SummaryTable
    report: Report
    task: Optional[BackwardTask] = None


def _type_label(v) -> str:
    t = type_of(v)
    return t.name


def _access(stmt) -> Optional[tuple]:
    """(receiver variable, attribute) for statements that look an attribute up."""
    if isinstance(stmt, ir.AttrRead):
        return stmt.obj, stmt.attr
    if isinstance(stmt, ir.AttrWrite):
        return stmt.obj, stmt.attr
    if isinstance(stmt, ir.Call) and stmt.is_method:
        return stmt.receiver, stmt.callee
    return None


def _may_be_zero(v) -> bool:
    if isinstance(v, Prim):
        return v.type in NUMERIC and v.value == 0
    return isinstance(v, Ty) and v.type in NUMERIC


def extract_candidates(res, callgraph: Optional[ir.CallGraph] = None) -> list:
    """Error candidates from a finished forward pass, in a deterministic order.

    Attribute errors get one candidate per offending receiver type and per
    calling context (each call site of the enclosing function, when it has any).
    """
    out: dict = {}
    for pp, stmt, state in res.states():
        if state is None:
            continue
        ctx = res.context(pp.fn)
        sites = sorted(callgraph.callers.get(pp.fn, ()), key=lambda s: (s.fn, s.block, s.index)) \
            if callgraph is not None else []
        contexts = sites or [None]
        span = stmt.span

        def add(kind, var, typ):
            for site in contexts:
                c = ErrorCandidate(kind, pp, span.file, span.line, span.col, var, typ, site)
                out.setdefault((kind,) + c.key, c)

        for var in ir.used_vars(stmt):
            if Var(pp.fn, var) not in state:
                add(POSSIBLY_UNDEFINED, var, "UNDEF")
        acc = _access(stmt)
        if acc is not None:
            var, attr = acc
            vals = state.get(Var(pp.fn, var)) or frozenset({Ty(NONE)})
            for v in vals:
                if isinstance(stmt, ir.AttrWrite):
                    bad = not isinstance(v, Addr)
                else:
                    bad = not has_attr(v, attr, state, ctx)
                if bad:
                    add(ATTRIBUTE_ERROR, var, _type_label(v))
        if isinstance(stmt, ir.Binop) and stmt.op == "//":
            if any(_may_be_zero(v) for v in state.get(Var(pp.fn, stmt.right))):
                add(ZERO_DIVISION, stmt.right, "ZERO")
    cands = sorted(out.values(), key=ErrorCandidate.sort_key)
    return cands


def _query_for(c: ErrorCandidate):
    frame = 1 if c.context else 0
    return make_initial_query(c.point.fn, c.variable, type_from_name(c.type), frame)


def refute(task: BackwardTask, c: ErrorCandidate, log=None):
    stack = (c.context,) if c.context else ()
    return task.traverse(_query_for(c), c.point, stack, log=log)


def analyze_program(source: SourceProgram, config: AnalyzerConfig = AnalyzerConfig()) -> Analysis:
    """Run the whole pipeline and keep every intermediate result."""
    t0 = time.perf_counter()
    summaries = load_summaries(*config.summary_paths)
    program = load_program(source, summaries)
    cfgs = ir.build_cfgs(program)
    res = analyze(program, config.entry or program.entry, cfgs, summaries, config.k_prim)
    # only code the forward pass reached can call anything
    live = {q: cfgs[q] for q in res.reached}
    callgraph = ir.build_callgraph(program, live, summaries, res.receivers)
    cands = extract_candidates(res, callgraph)
    t1 = time.perf_counter()
    main = [c for c in cands if c.kind not in EXCLUDED_KINDS]
    excluded = [c for c in cands if c.kind in EXCLUDED_KINDS]
    for i, c in enumerate(main, 1):
        c.id = f"C{i}"
    for i, c in enumerate(excluded, 1):
        c.id = f"X{i}"
        c.status = "excluded"
    task = BackwardTask(program, cfgs, callgraph, summaries, config.budgets, skip=config.skip)
    if config.backward:
        for c in main:
            if c.kind != ATTRIBUTE_ERROR:
                continue
            r = refute(task, c)
            c.result = r
            if isinstance(r, Refuted):
                c.status = REFUTED
            elif isinstance(r, BudgetExceeded):
                c.status = BUDGET
                c.note = r.reason
            elif isinstance(r, WitnessFound) and r.note != "entry":
                c.note = r.note
    t2 = time.perf_counter()
    report = Report(main, excluded, (t1 - t0) * 1000, (t2 - t1) * 1000, (t2 - t0) * 1000,
                    program.entry)
    return Analysis(program, cfgs, res, callgraph, summaries, report, task)


def run(source: SourceProgram, config: AnalyzerConfig = AnalyzerConfig()) -> Report:
    return analyze_program(source, config).report


def run_paths(paths, entry: str, **options) -> Report:
    return run(SourceProgram.from_paths(paths, entry), AnalyzerConfig(entry=entry, **options))


def run_text(text: str, entry: str, **options) -> Report:
    return run(SourceProgram.from_text(text, entry), AnalyzerConfig(entry=entry, **options))


__all__ = [
    "AnalyzerConfig", "ErrorCandidate", "Report", "Analysis", "analyze_program", "extract_candidates",
    "run", "run_paths", "run_text", "load_summaries", "interpret", "refute",
]
