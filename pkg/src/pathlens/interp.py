"""Concrete interpreter for the IR, used as the ground-truth oracle in tests.

It executes the same CFGs the analyses see, so a discrepancy between an
analysis and the interpreter is an analysis bug, not a lowering artifact.
:func:`reference_run` executes the original source with CPython instead, which
is how lowering itself is checked.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional

from . import ir
from .concrete import FoldError, apply_binop, is_primitive, truthy, type_name
from .summaries import BUILTIN_CLASS, SummaryTable, default_summaries


class OracleTimeout(Exception):
    """Execution exceeded its step or recursion budget."""


class Obj:
    """A heap object; compared by identity."""

    __slots__ = ("site", "cls", "fields")

    def __init__(self, site: str, cls: str):
        self.site = site
        self.cls = cls
        self.fields: dict = {}

    def __repr__(self) -> str:
        return f"<{self.cls}@{self.site}>"


@dataclass(frozen=True)
class RuntimeFault:
    """The first error a run hit.

    ``kind`` is one of attribute-error, type-error, zero-division, name-error
    or value-error. For attribute errors ``var`` is the receiver variable and
    ``type`` the type name of the value it held. ``context`` is the call site
    that entered the faulting function (None in the entry function).
    """

    kind: str
    point: ir.ProgramPoint
    message: str
    var: Optional[str] = None
    type: Optional[str] = None
    context: Optional[ir.ProgramPoint] = None  # call site of the faulting frame


@dataclass
class ExecResult:
    value: object = None
    fault: Optional[RuntimeFault] = None
    steps: int = 0
    call_edges: set = field(default_factory=set)  # (call site, callee qualname or summary node)
    # (point, locals, heap) snapshots, taken before each statement when recording
    stores: list = field(default_factory=list)
    visited: set = field(default_factory=set)  # program points executed


class _Fault(Exception):
    def __init__(self, fault: RuntimeFault):
        super().__init__(fault.message)
        self.fault = fault


_UNSET = object()


class Interpreter:
    def __init__(self, program: ir.IRProgram, cfgs: Optional[dict] = None,
                 summaries: Optional[SummaryTable] = None, max_steps: int = 100_000,
                 max_depth: int = 200, record: bool = False):
        self.program = program
        self.cfgs = cfgs if cfgs is not None else ir.build_cfgs(program)
        self.summaries = summaries or default_summaries()
        self.max_steps = max_steps
        self.max_depth = max_depth
        self.record = record
        self.result = ExecResult()
        self._objects: list = []
        self._sites: list = []  # call sites of the active frames, outermost first

    def run(self, args=(), entry: Optional[str] = None) -> ExecResult:
        entry = entry or self.program.entry
        try:
            self.result.value = self.call(entry, list(args), 0)
        except _Fault as f:
            self.result.fault = f.fault
        return self.result

    # -- helpers ------------------------------------------------------------

    def fault(self, kind: str, pp, message: str, var=None, typ=None):
        site = self._sites[-1] if self._sites else None
        raise _Fault(RuntimeFault(kind, pp, message, var, typ, site))

    def read(self, env: dict, name: str, pp):
        v = env.get(name, _UNSET)
        if v is _UNSET:
            self.fault("name-error", pp, f"{name!r} referenced before assignment", name)
        return v

    def snapshot(self, pp, env: dict) -> None:
        heap = {}
        for o in self._objects:
            for a, v in o.fields.items():
                heap[(o, a)] = v
        self.result.stores.append((pp, dict(env), heap))

    # -- execution ----------------------------------------------------------

    def call(self, qualname: str, args: list, depth: int, site=None):
        if depth > self.max_depth:
            raise OracleTimeout("recursion too deep")
        if site is None:
            return self._body(qualname, args, depth)
        self._sites.append(site)
        try:
            return self._body(qualname, args, depth)
        finally:
            self._sites.pop()

    def _body(self, qualname: str, args: list, depth: int):
        fn = self.program.functions[qualname]
        cfg = self.cfgs[qualname]
        env = dict(zip(fn.params, args))
        bid = cfg.entry
        while True:
            block = cfg.block(bid)
            nxt = None
            for i, stmt in enumerate(block.stmts):
                pp = ir.ProgramPoint(qualname, bid, i)
                self.result.steps += 1
                if self.result.steps > self.max_steps:
                    raise OracleTimeout("step budget exhausted")
                self.result.visited.add(pp)
                if self.record:
                    self.snapshot(pp, env)
                if isinstance(stmt, ir.Return):
                    return self.read(env, stmt.value, pp) if stmt.value else None
                if isinstance(stmt, ir.Branch):
                    nxt = stmt.then_target if truthy(self.read(env, stmt.cond, pp)) else stmt.else_target
                    break
                self.execute(stmt, env, pp, depth)
            if nxt is None:
                nxt = block.succs[0][0]
            bid = nxt

    def execute(self, stmt, env: dict, pp, depth: int) -> None:
        if isinstance(stmt, ir.ConstAssign):
            env[stmt.target] = stmt.value
        elif isinstance(stmt, ir.Alias):
            env[stmt.target] = self.read(env, stmt.source, pp)
        elif isinstance(stmt, ir.Binop):
            a, b = self.read(env, stmt.left, pp), self.read(env, stmt.right, pp)
            try:
                env[stmt.target] = apply_binop(stmt.op, a, b)
            except ZeroDivisionError as e:
                self.fault("zero-division", pp, str(e))
            except TypeError as e:
                self.fault("type-error", pp, str(e))
            except FoldError as e:
                raise OracleTimeout(str(e)) from e
        elif isinstance(stmt, ir.AttrRead):
            env[stmt.target] = self.getattr(stmt.obj, self.read(env, stmt.obj, pp), stmt.attr, pp)
        elif isinstance(stmt, ir.AttrWrite):
            o = self.read(env, stmt.obj, pp)
            v = self.read(env, stmt.source, pp)
            if not isinstance(o, Obj):
                self.fault("attribute-error", pp, f"cannot set {stmt.attr!r} on {type_name(o)}",
                           stmt.obj, type_name(o))
            o.fields[stmt.attr] = v
        elif isinstance(stmt, ir.New):
            o = Obj(f"{pp.fn}:{stmt.span.line}:{stmt.span.col}", stmt.cls)
            self._objects.append(o)
            env[stmt.target] = o
        elif isinstance(stmt, ir.Call):
            v = self.invoke(stmt, env, pp, depth)
            if stmt.target:
                env[stmt.target] = v
        elif isinstance(stmt, ir.Nop):
            pass
        else:
            raise TypeError(f"unexpected statement {stmt!r}")

    def getattr(self, var: str, o, attr: str, pp):
        if isinstance(o, Obj):
            if attr not in o.fields:
                self.fault("attribute-error", pp, f"{o.cls} object has no attribute {attr!r}", var, o.cls)
            return o.fields[attr]
        tname = type_name(o)
        attrs = self.summaries.class_attrs(BUILTIN_CLASS[tname]) or {}
        if attr not in attrs or not hasattr(o, attr):
            self.fault("attribute-error", pp, f"{tname} has no attribute {attr!r}", var, tname)
        v = getattr(o, attr)
        if callable(v):
            raise NotImplementedError("bound builtin methods are not subset values")
        return v

    def invoke(self, stmt: ir.Call, env: dict, pp, depth: int):
        args = [self.read(env, a, pp) for a in stmt.args]
        if stmt.is_method:
            recv = self.read(env, stmt.receiver, pp)
            if isinstance(recv, Obj):
                m = self.program.method(recv.cls, stmt.callee)
                if m is None:
                    self.fault("attribute-error", pp, f"{recv.cls} object has no attribute {stmt.callee!r}",
                               stmt.receiver, recv.cls)
                self.result.call_edges.add((pp, m.qualname))
                return self.call(m.qualname, [recv] + args, depth + 1, pp)
            tname = type_name(recv)
            cname = BUILTIN_CLASS[tname]
            attrs = self.summaries.class_attrs(cname) or {}
            if stmt.callee not in attrs or not hasattr(recv, stmt.callee):
                self.fault("attribute-error", pp, f"{tname} has no attribute {stmt.callee!r}",
                           stmt.receiver, tname)
            self.result.call_edges.add((pp, ir.summary_node(f"{cname}.{stmt.callee}")))
            return self.builtin(getattr(recv, stmt.callee), args, pp)
        f = self.program.functions.get(stmt.callee)
        if f is not None and f.cls is None:
            self.result.call_edges.add((pp, f.qualname))
            return self.call(f.qualname, args, depth + 1, pp)
        self.result.call_edges.add((pp, ir.summary_node(stmt.callee)))
        impl = _BUILTINS.get(stmt.callee)
        if impl is None:
            raise NotImplementedError(f"no concrete implementation for {stmt.callee!r}")
        return self.builtin(impl, args, pp)

    def builtin(self, impl, args: list, pp):
        if not all(is_primitive(a) for a in args):
            self.fault("type-error", pp, "builtin called with an object argument")
        try:
            out = impl(*args)
        except TypeError as e:
            self.fault("type-error", pp, str(e))
        except ValueError as e:
            self.fault("value-error", pp, str(e))
        if not is_primitive(out):
            raise NotImplementedError(f"builtin returned a non-subset value {out!r}")
        return out


def _print(*args):
    return None


_BUILTINS = {"len": len, "str": str, "int": int, "float": float, "print": _print}


def interpret(program: ir.IRProgram, args=(), entry: Optional[str] = None, cfgs: Optional[dict] = None,
              summaries: Optional[SummaryTable] = None, max_steps: int = 100_000,
              record: bool = False) -> ExecResult:
    """Run ``entry`` (default: the program entry) on concrete ``args``."""
    return Interpreter(program, cfgs, summaries, max_steps, record=record).run(args, entry)


# -- CPython reference ----------------------------------------------------------


@dataclass
class ReferenceResult:
    value: object = None
    error: Optional[str] = None  # exception class name


_ERROR_NAMES = {
    "attribute-error": "AttributeError",
    "type-error": "TypeError",
    "zero-division": "ZeroDivisionError",
    "name-error": "NameError",
    "value-error": "ValueError",
}


def fault_exception_name(fault: Optional[RuntimeFault]) -> Optional[str]:
    return None if fault is None else _ERROR_NAMES[fault.kind]


def reference_run(sources: dict, entry: str, args=(), max_lines: int = 100_000) -> ReferenceResult:
    """Execute the original source text with CPython and call ``entry(*args)``.

    ``sources`` maps file names to text; all files share one namespace, as in
    the subset's whole-program model.
    """
    ns: dict = {"__name__": "__subset__", "print": _print}
    for path in sorted(sources):
        exec(compile(sources[path], path, "exec"), ns)
    count = [0]

    def tracer(frame, event, arg):
        if event == "line":
            count[0] += 1
            if count[0] > max_lines:
                raise OracleTimeout("line budget exhausted")
        return tracer

    old = sys.gettrace()
    sys.settrace(tracer)
    try:
        value = ns[entry](*args)
    except OracleTimeout:
        raise
    except RecursionError as e:
        raise OracleTimeout("recursion") from e
    except (AttributeError, TypeError, ZeroDivisionError, NameError, ValueError) as e:
        name = "NameError" if isinstance(e, NameError) else type(e).__name__
        return ReferenceResult(None, name)
    finally:
        sys.settrace(old)
    return ReferenceResult(value, None)
