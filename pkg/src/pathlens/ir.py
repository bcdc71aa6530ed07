"""Normalized IR, per-function control-flow graphs and the whole-program call graph.

Every statement the analyses see is one of a handful of shapes::

    x = p            ConstAssign
    x = y            Alias
    x = y op z       Binop
    x = y.attr       AttrRead
    y.attr = x       AttrWrite
    x = new C()      New
    x = f(a, ...)    Call (direct, or a method call on a receiver variable)
    return y         Return
    branch x T F     Branch (only inside a Cfg)

Lowering produces a structured body (``If``/``While`` nodes around flat
statement lists); :func:`build_cfg` turns that into basic blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

BINARY_OPS = ("+", "-", "*", "//", "==", "!=", "<", "and", "or")
COMPARISON_OPS = ("==", "!=", "<")


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int = 0

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


NO_SPAN = Span("<none>", 0, 0)


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class ConstAssign:
    target: str
    value: object
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"{self.target} = {self.value!r}"


@dataclass(frozen=True)
class Alias:
    target: str
    source: str
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"{self.target} = {self.source}"


@dataclass(frozen=True)
class Binop:
    target: str
    left: str
    op: str
    right: str
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"{self.target} = {self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class AttrRead:
    target: str
    obj: str
    attr: str
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"{self.target} = {self.obj}.{self.attr}"


@dataclass(frozen=True)
class AttrWrite:
    obj: str
    attr: str
    source: str
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"{self.obj}.{self.attr} = {self.source}"


@dataclass(frozen=True)
class New:
    target: str
    cls: str
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"{self.target} = new {self.cls}()"


@dataclass(frozen=True)
class Call:
    """``target = callee(*args)``, or ``target = receiver.callee(*args)``."""

    target: Optional[str]
    callee: str
    args: tuple[str, ...]
    receiver: Optional[str] = None
    span: Span = field(default=NO_SPAN, compare=False)

    @property
    def is_method(self) -> bool:
        return self.receiver is not None

    def __str__(self) -> str:
        lhs = f"{self.target} = " if self.target else ""
        fn = f"{self.receiver}.{self.callee}" if self.receiver else self.callee
        return f"{lhs}{fn}({', '.join(self.args)})"


@dataclass(frozen=True)
class Return:
    value: Optional[str]
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"return {self.value}" if self.value else "return"


@dataclass(frozen=True)
class Branch:
    cond: str
    then_target: int = -1
    else_target: int = -1
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return f"branch {self.cond} B{self.then_target} B{self.else_target}"


@dataclass(frozen=True)
class Nop:
    span: Span = field(default=NO_SPAN, compare=False)

    def __str__(self) -> str:
        return "nop"


IRStmt = Union[ConstAssign, Alias, Binop, AttrRead, AttrWrite, New, Call, Return, Branch, Nop]


def defined_var(stmt: IRStmt) -> Optional[str]:
    """The variable a statement assigns, if any."""
    if isinstance(stmt, (ConstAssign, Alias, Binop, AttrRead, New)):
        return stmt.target
    if isinstance(stmt, Call):
        return stmt.target
    return None


def used_vars(stmt: IRStmt) -> tuple[str, ...]:
    if isinstance(stmt, Alias):
        return (stmt.source,)
    if isinstance(stmt, Binop):
        return (stmt.left, stmt.right)
    if isinstance(stmt, AttrRead):
        return (stmt.obj,)
    if isinstance(stmt, AttrWrite):
        return (stmt.obj, stmt.source)
    if isinstance(stmt, Call):
        return ((stmt.receiver,) if stmt.receiver else ()) + stmt.args
    if isinstance(stmt, Return):
        return (stmt.value,) if stmt.value else ()
    if isinstance(stmt, Branch):
        return (stmt.cond,)
    return ()


# -- structured bodies produced by lowering -----------------------------------


@dataclass
class If:
    cond: str
    then: list
    orelse: list
    span: Span = NO_SPAN


@dataclass
class While:
    header: list  # statements re-evaluated before every test of ``cond``
    cond: str
    body: list
    span: Span = NO_SPAN


Structured = Union[IRStmt, If, While]


@dataclass
class IRFunction:
    name: str
    qualname: str
    params: tuple[str, ...]
    body: list
    cls: Optional[str] = None
    span: Span = NO_SPAN


@dataclass
class ClassInfo:
    name: str
    methods: dict[str, str]  # method name -> function qualname
    span: Span = NO_SPAN


@dataclass
class IRProgram:
    functions: dict[str, IRFunction]
    classes: dict[str, ClassInfo]
    constants: dict[str, object]
    entry: str
    files: tuple[str, ...] = ()

    def method(self, cls: str, name: str) -> Optional[IRFunction]:
        info = self.classes.get(cls)
        if info is None or name not in info.methods:
            return None
        return self.functions[info.methods[name]]


# -- control-flow graphs ------------------------------------------------------


@dataclass(frozen=True)
class ProgramPoint:
    """The point immediately before statement ``index`` of ``block``."""

    fn: str
    block: int
    index: int

    def __str__(self) -> str:
        return f"{self.fn}@B{self.block}.{self.index}"


@dataclass
class Block:
    id: int
    stmts: list
    succs: list = field(default_factory=list)  # (target block, kind); kind in fall/true/false
    preds: list = field(default_factory=list)  # (source block, kind)

    @property
    def is_branch(self) -> bool:
        return bool(self.stmts) and isinstance(self.stmts[-1], Branch)

    @property
    def terminator(self) -> Optional[IRStmt]:
        return self.stmts[-1] if self.stmts else None


@dataclass
class Cfg:
    fn: str
    blocks: list
    entry: int
    exits: list
    back_edges: set  # {(src, dst)}
    loop_headers: set
    # join block -> (block to resume at, blocks of the skipped region); if/else
    # diamonds and whole loops, used to jump over code a query does not care about
    regions: dict = field(default_factory=dict)

    def block(self, bid: int) -> Block:
        return self.blocks[bid]

    def edges(self) -> list:
        return [(b.id, t, k) for b in self.blocks for (t, k) in b.succs]

    def statements(self) -> Iterator[tuple[ProgramPoint, IRStmt]]:
        for b in self.blocks:
            for i, s in enumerate(b.stmts):
                yield ProgramPoint(self.fn, b.id, i), s

    def stmt_at(self, pp: ProgramPoint) -> IRStmt:
        return self.blocks[pp.block].stmts[pp.index]


class _CfgBuilder:
    def __init__(self, fn: IRFunction):
        self.fn = fn
        self.blocks: list[Block] = []
        self.back_edges: set = set()
        self.headers: set = set()
        self.regions: dict = {}

    def new_block(self) -> Block:
        b = Block(len(self.blocks), [])
        self.blocks.append(b)
        return b

    @staticmethod
    def link(src: Block, dst: Block, kind: str = "fall") -> None:
        src.succs.append((dst.id, kind))

    def emit(self, items: list, cur: Optional[Block]) -> Optional[Block]:
        """Append ``items`` starting in ``cur``; returns the open block, or None if all paths returned."""
        for item in items:
            if cur is None:
                break  # dead code after return
            if isinstance(item, If):
                cur.stmts.append(Branch(item.cond, span=item.span))
                then_b, else_b = self.new_block(), self.new_block()
                self.link(cur, then_b, "true")
                self.link(cur, else_b, "false")
                then_end = self.emit(item.then, then_b)
                else_end = self.emit(item.orelse, else_b)
                if then_end is None and else_end is None:
                    cur = None
                    continue
                join = self.new_block()
                for end in (then_end, else_end):
                    if end is not None:
                        self.link(end, join)
                if then_end is not None and else_end is not None:
                    self.regions[join.id] = (cur.id, set(range(then_b.id, join.id)))
                cur = join
            elif isinstance(item, While):
                header = self.new_block()
                self.link(cur, header)
                self.headers.add(header.id)
                header.stmts.extend(item.header)
                header.stmts.append(Branch(item.cond, span=item.span))
                body, after = self.new_block(), self.new_block()
                self.link(header, body, "true")
                self.link(header, after, "false")
                pre = cur
                body_end = self.emit(item.body, body)
                if body_end is not None:
                    self.link(body_end, header)
                    self.back_edges.add((body_end.id, header.id))
                region = {header.id} | set(range(body.id, len(self.blocks)))
                region.discard(after.id)
                self.regions[after.id] = (pre.id, region)
                cur = after
            else:
                cur.stmts.append(item)
                if isinstance(item, Return):
                    cur = None
        return cur

    def build(self) -> Cfg:
        entry = self.new_block()
        end = self.emit(self.fn.body, entry)
        if end is not None:
            end.stmts.append(Return(None, span=self.fn.span))
        return self._finish()

    def _finish(self) -> Cfg:
        # keep only blocks reachable from the entry, renumbered in discovery order
        order, seen, stack = [], set(), [0]
        while stack:
            bid = stack.pop()
            if bid in seen:
                continue
            seen.add(bid)
            order.append(bid)
            for t, _ in reversed(self.blocks[bid].succs):
                stack.append(t)
        order.sort()
        remap = {old: new for new, old in enumerate(order)}
        blocks = []
        for old in order:
            b = self.blocks[old]
            nb = Block(remap[old], list(b.stmts), [(remap[t], k) for t, k in b.succs])
            if nb.is_branch:
                br = nb.stmts[-1]
                tt = next(t for t, k in nb.succs if k == "true")
                ff = next(t for t, k in nb.succs if k == "false")
                nb.stmts[-1] = Branch(br.cond, tt, ff, span=br.span)
            blocks.append(nb)
        for b in blocks:
            for t, k in b.succs:
                blocks[t].preds.append((b.id, k))
        exits = [b.id for b in blocks if not b.succs]
        back = {(remap[s], remap[d]) for s, d in self.back_edges if s in remap and d in remap}
        headers = {remap[h] for h in self.headers if h in remap}
        regions = {}
        for join, (resume, region) in self.regions.items():
            if join in remap and resume in remap:
                regions[remap[join]] = (remap[resume], frozenset(remap[b] for b in region if b in remap))
        return Cfg(self.fn.qualname, blocks, 0, exits, back, headers, regions)


def build_cfg(fn: IRFunction) -> Cfg:
    return _CfgBuilder(fn).build()


def build_cfgs(prog: IRProgram) -> dict[str, Cfg]:
    return {q: build_cfg(f) for q, f in prog.functions.items()}


# -- call graph ---------------------------------------------------------------


class UnresolvedCallee(Exception):
    def __init__(self, site, name: str):
        super().__init__(f"{site}: call to unknown function {name!r}")
        self.site = site
        self.name = name


def summary_node(name: str) -> str:
    return f"summary:{name}"


@dataclass
class CallGraph:
    callees: dict  # ProgramPoint -> frozenset of function qualnames / summary nodes
    callers: dict  # function qualname -> set of ProgramPoints

    def sites_in(self, fn: str) -> list:
        return sorted((s for s in self.callees if s.fn == fn), key=lambda p: (p.block, p.index))

    def edges(self) -> set:
        return {(site.fn, callee) for site, cs in self.callees.items() for callee in cs}


def build_callgraph(prog: IRProgram, cfgs: dict, summaries=None, receivers=None) -> CallGraph:
    """Resolve every call site.

    Direct calls resolve by name (user function, then summary). Method calls
    resolve through ``receivers``: a mapping from call site to the set of
    class names the receiver may hold (computed by the forward analysis).
    Without it every class defining the method is a candidate.
    """
    callees: dict = {}
    callers: dict = {q: set() for q in prog.functions}
    for q in sorted(cfgs):
        for pp, stmt in cfgs[q].statements():
            if not isinstance(stmt, Call):
                continue
            targets = set()
            if stmt.is_method:
                if receivers is not None:
                    classes = receivers.get(pp, ())
                else:
                    classes = [c for c, info in prog.classes.items() if stmt.callee in info.methods]
                for c in classes:
                    m = prog.method(c, stmt.callee)
                    if m is not None:
                        targets.add(m.qualname)
                    elif summaries is not None and summaries.has_class(c):
                        targets.add(summary_node(f"{c}.{stmt.callee}"))
            elif stmt.callee in prog.functions and prog.functions[stmt.callee].cls is None:
                targets.add(stmt.callee)
            elif summaries is not None and summaries.has_function(stmt.callee):
                targets.add(summary_node(stmt.callee))
            else:
                raise UnresolvedCallee(pp, stmt.callee)
            callees[pp] = frozenset(targets)
            for t in targets:
                if t in callers:
                    callers[t].add(pp)
    return CallGraph(callees, callers)


# -- debug output -------------------------------------------------------------


def cfg_to_dot(cfg: Cfg) -> str:
    name = cfg.fn.replace(".", "_")
    lines = [f'  subgraph "cluster_{name}" {{', f'    label="{cfg.fn}";']
    for b in cfg.blocks:
        body = "\\l".join(str(s).replace('"', '\\"') for s in b.stmts) + "\\l"
        lines.append(f'    "{name}_B{b.id}" [shape=box,label="B{b.id}\\n{body}"];')
    for src, dst, kind in cfg.edges():
        style = ' style=dashed' if (src, dst) in cfg.back_edges else ""
        label = f' label="{kind}"' if kind != "fall" else ""
        lines.append(f'    "{name}_B{src}" -> "{name}_B{dst}" [{label}{style}];')
    lines.append("  }")
    return "\n".join(lines)


def program_to_dot(cfgs: dict, callgraph: Optional[CallGraph] = None) -> str:
    out = ["digraph program {"]
    for q in sorted(cfgs):
        out.append(cfg_to_dot(cfgs[q]))
    if callgraph is not None:
        for site in sorted(callgraph.callees, key=str):
            for callee in sorted(callgraph.callees[site]):
                src = f"{site.fn.replace('.', '_')}_B{site.block}"
                if callee in cfgs:
                    dst = f"{callee.replace('.', '_')}_B0"
                else:
                    dst = callee
                out.append(f'  "{src}" -> "{dst}" [color=blue];')
    out.append("}")
    return "\n".join(out)
