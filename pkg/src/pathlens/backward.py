"""Backward, path-sensitive refutation of error candidates.

A query is a disjunction of conjuncts; each conjunct pairs symbolic heap atoms
(``x↦v``, ``b.attr↦v``) with pure facts over the symbols. Traversal walks the
CFG against control flow, rewriting one conjunct per statement, and stops a
conjunct as soon as its facts are contradictory. If a conjunct survives to the
program entry the candidate has a possible witness.

Heap atoms are read conjunctively: two field atoms on different base symbols
may still alias. Every rule below is therefore a (possibly weakening)
precondition, which keeps refutation sound.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from . import ir
from .constraints import (
    FALSE, TRUE, UNDEF, BinExpr, Conjunct, Query, Sym, SymbolFactory, Truth, VarKey,
    Solver, _with_known, const, distinct, eq, extend_pure, is_refuted, simplify_conjunct,
)
from .forward import NONE, class_type, type_from_name
from .summaries import SummaryTable, default_summaries


_SOLVED_CACHE = 512
_REUSE_NODES = 600


@dataclass(frozen=True)
class Budgets:
    max_stack: int = 3
    max_steps: int = 20_000
    max_conjuncts: int = 5_000
    unroll: int = 2


@dataclass(frozen=True)
class Refuted:
    steps: int = 0

    kind = "refuted"


@dataclass(frozen=True)
class WitnessFound:
    trace: tuple
    conjunct: Conjunct
    note: str = "entry"  # "uncalled" when the search stopped at a function nobody calls
    steps: int = 0

    kind = "witness"


@dataclass(frozen=True)
class BudgetExceeded:
    reason: str  # max_stack, max_steps or max_conjuncts
    steps: int = 0

    kind = "budget"


WitnessResult = Union[Refuted, WitnessFound, BudgetExceeded]


# -- symbolic heap helpers ----------------------------------------------------


class _Heap:
    """Mutable working copy of a conjunct, used while applying one rule."""

    def __init__(self, c: Conjunct, symbols: SymbolFactory):
        self.vars = c.var_map
        self.fields = c.field_map
        self.base = c
        self.facts = list(c.pure)
        self.trace = c.trace
        self.symbols = symbols

    def pop(self, key: VarKey) -> Optional[Sym]:
        return self.vars.pop(key, None)

    def bind(self, key: VarKey) -> Sym:
        s = self.vars.get(key)
        if s is None:
            s = self.vars[key] = self.symbols.fresh(key.name.lstrip("$"))
        return s

    def put(self, key: VarKey, s: Sym) -> None:
        """Assert that ``key`` holds ``s`` in the pre-state."""
        old = self.vars.get(key)
        if old is None:
            self.vars[key] = s
        elif old != s:
            self.facts.append(eq(old, s))

    def done(self) -> Conjunct:
        n = len(self.base.pure)
        if self.facts[:n] != list(self.base.pure):  # pragma: no cover - rules only append
            return Conjunct.make(self.vars, self.fields, self.facts, self.trace)
        pure, known = extend_pure(self.base, self.facts[n:])
        c = Conjunct.make(self.vars, self.fields, (), self.trace)
        return _with_known(replace(c, pure=pure), known)


def wp_step(stmt, c: Conjunct, fn: str = "main", frame: int = 0,
            symbols: Optional[SymbolFactory] = None, summaries: Optional[SummaryTable] = None,
            refuted=None) -> Query:
    """Precondition of ``c`` across one intraprocedural statement.

    Calls to summarized functions are handled here as well (the callee's
    declared return type); calls into user code need the traversal context.
    ``refuted(conj, parent)`` decides the forks of an attribute write;
    by default each is solved from scratch.
    """
    symbols = symbols or SymbolFactory()
    h = _Heap(c, symbols)

    def key(name: str) -> VarKey:
        return VarKey(frame, fn, name)

    if isinstance(stmt, ir.ConstAssign):
        s = h.pop(key(stmt.target))
        if s is None:
            return Query((c,))
        h.facts.append(eq(s, const(stmt.value)))
    elif isinstance(stmt, ir.Alias):
        s = h.pop(key(stmt.target))
        if s is None:
            return Query((c,))
        h.put(key(stmt.source), s)
    elif isinstance(stmt, ir.Binop):
        s = h.pop(key(stmt.target))
        if s is None:
            return Query((c,))
        left, right = h.bind(key(stmt.left)), h.bind(key(stmt.right))
        h.facts.append(eq(s, BinExpr(left, stmt.op, right)))
    elif isinstance(stmt, ir.AttrRead):
        s = h.pop(key(stmt.target))
        if s is None:
            return Query((c,))
        base = h.bind(key(stmt.obj))
        old = h.fields.get((base, stmt.attr))
        if old is None:
            h.fields[(base, stmt.attr)] = s
        else:
            h.facts.append(eq(old, s))
    elif isinstance(stmt, ir.AttrWrite):
        return _attr_write(stmt, c, h, key, refuted or (lambda x, parent: is_refuted(x)))
    elif isinstance(stmt, ir.New):
        return _new(stmt, c, h, key, refuted or (lambda x, parent: is_refuted(x)))
    elif isinstance(stmt, ir.Call):
        s = h.pop(key(stmt.target)) if stmt.target else None
        if s is None:
            return Query((c,))
        ret = _summary_return(stmt, summaries or default_summaries())
        if ret is not None:
            h.facts.append(eq(s, const(ret)))
    else:  # Branch, Nop, Return: no effect on the pre-state of this frame
        return Query((c,))
    return Query((h.done(),))


def _attr_write(stmt: ir.AttrWrite, c: Conjunct, h: _Heap, key, refuted) -> Query:
    hits = [loc for loc in h.fields if loc[1] == stmt.attr]
    if not hits:
        return Query((c,))
    base = h.bind(key(stmt.obj))
    start = h.done()
    out = [start] if start.pure == c.pure or not refuted(start, c) else []
    for loc in hits:
        forked = []  # (conjunct, the conjunct it extends)
        for cur in out:
            fields = cur.field_map
            if loc not in fields:
                forked.append((cur, cur))
                continue
            val = fields[loc]
            # the write hit this location: the stored value came from the source
            alias = _Heap(cur, h.symbols)
            del alias.fields[loc]
            if loc[0] != base:
                alias.facts.append(eq(loc[0], base))
            alias.put(key(stmt.source), val)
            forked.append((alias.done(), cur))
            if loc[0] != base:
                forked.append((cur.add_facts(distinct(loc[0], base)), cur))
        out = [x for x, parent in forked if x.pure == parent.pure or not refuted(x, parent)]
    return Query(tuple(out))


def _new(stmt: ir.New, c: Conjunct, h: _Heap, key, refuted) -> Query:
    s = h.pop(key(stmt.target))
    if s is None:
        return Query((c,))
    h.facts.append(eq(s, const(class_type(stmt.cls))))
    for loc in [loc for loc in h.fields if loc[0] == s]:
        h.facts.append(eq(h.fields.pop(loc), const(UNDEF)))
    start = h.done()
    out = [start]
    # a field atom on another symbol may still name the new object, whose fields start
    # undefined; a base some variable holds before the allocation cannot be that object
    held = {v for _, v in start.vars}
    for loc in [loc for loc, _ in start.fields if loc[0] not in held]:
        forked = []
        for cur in out:
            fresh = _Heap(cur, h.symbols)
            val = fresh.fields.pop(loc)
            fresh.facts += [eq(loc[0], s), eq(val, const(UNDEF))]
            forked.append((fresh.done(), cur))
            forked.append((cur.add_facts(distinct(loc[0], s)), cur))
        out = [x for x, parent in forked if not refuted(x, parent)]
    return Query(tuple(out))


def _summary_return(stmt: ir.Call, summaries: SummaryTable):
    """Declared return type of a summarized call, or None if unconstrained."""
    if stmt.is_method:
        return None  # receiver class decides; the traversal passes the callee
    fs = summaries.functions.get(stmt.callee)
    return type_from_name(fs.returns) if fs is not None else None


def summary_node_return(node: str, summaries: SummaryTable):
    name = node.split(":", 1)[1]
    if "." in name:
        cls, attr = name.split(".", 1)
        attrs = summaries.class_attrs(cls) or {}
        ret = attrs.get(attr)
    else:
        fs = summaries.functions.get(name)
        ret = fs.returns if fs is not None else None
    return type_from_name(ret) if ret is not None else None


# -- traversal ----------------------------------------------------------------


@dataclass(frozen=True)
class _Item:
    fn: str
    block: int
    index: int  # statements [0, index) of the block remain to be processed
    conj: Conjunct
    stack: tuple  # call sites we descended through, innermost last
    frame: int
    loops: tuple  # sorted ((frame, fn, header), passes)


@dataclass
class BackwardTask:
    """Everything traversal needs that does not change between queries."""

    program: ir.IRProgram
    cfgs: dict
    callgraph: ir.CallGraph
    summaries: SummaryTable = field(default_factory=default_summaries)
    budgets: Budgets = field(default_factory=Budgets)
    skip: bool = True  # footprint-based statement and region skipping
    _writes: dict = field(default_factory=dict, repr=False)
    _mods: Optional[dict] = field(default=None, repr=False)

    # -- write sets used for skipping ---------------------------------------

    def region_writes(self, fn: str, blocks) -> tuple:
        key = (fn, blocks)
        if key not in self._writes:
            names, attrs, calls = set(), set(), set()
            cfg = self.cfgs[fn]
            for b in blocks:
                for i, s in enumerate(cfg.block(b).stmts):
                    d = ir.defined_var(s)
                    if d:
                        names.add(d)
                    if isinstance(s, ir.AttrWrite):
                        attrs.add(s.attr)
                    if isinstance(s, ir.Call):
                        calls.add(ir.ProgramPoint(fn, b, i))
            for site in calls:
                for callee in self.callgraph.callees.get(site, ()):
                    attrs |= self.modified_attrs(callee)
            self._writes[key] = (frozenset(names), frozenset(attrs))
        return self._writes[key]

    def modified_attrs(self, callee: str) -> frozenset:
        """Attributes a call to ``callee`` may write, transitively."""
        if self._mods is None:
            direct = {}
            for q, cfg in self.cfgs.items():
                direct[q] = {s.attr for _, s in cfg.statements() if isinstance(s, ir.AttrWrite)}
            mods = {q: set(a) for q, a in direct.items()}
            changed = True
            while changed:
                changed = False
                for site, callees in self.callgraph.callees.items():
                    for t in callees:
                        if t in mods and not mods[t] <= mods[site.fn]:
                            mods[site.fn] |= mods[t]
                            changed = True
            self._mods = {q: frozenset(a) for q, a in mods.items()}
        return self._mods.get(callee, frozenset())

    def loop_blocks(self, fn: str, header: int) -> frozenset:
        """Blocks of the natural loop(s) closing at ``header``."""
        key = ("loop", fn, header)
        if key not in self._writes:
            cfg = self.cfgs[fn]
            body = {header}
            work = [src for src, dst in cfg.back_edges if dst == header]
            while work:
                b = work.pop()
                if b in body:
                    continue
                body.add(b)
                work += [p for p, _ in cfg.block(b).preds]
            self._writes[key] = frozenset(body)
        return self._writes[key]

    def touches(self, c: Conjunct, frame: int, fn: str, names, attrs) -> bool:
        if any(k.frame == frame and k.fn == fn and k.name in names for k, _ in c.vars):
            return True
        return any(a in attrs for (_, a), _ in c.fields)

    def traverse(self, c: Conjunct, start: ir.ProgramPoint, stack: tuple = (), log=None) -> WitnessResult:
        """Search backward from ``start`` for a path on which ``c`` can hold.

        ``stack`` holds call sites already entered (the query's calling
        context); ``log``, if given, is called with each visited point, the frame and
        the conjunct current there.
        """
        return _Traversal(self, stack, log).run(c, start)


class _Traversal:
    def __init__(self, task: BackwardTask, stack: tuple, log=None):
        self.t = task
        self.log = log
        self.initial_stack = tuple(stack)
        self.symbols = SymbolFactory()
        self.steps = 0
        self.created = 0
        self.budget: Optional[str] = None
        self.seen: set = set()
        self.verdicts: dict = {}
        self.solved: OrderedDict = OrderedDict()  # recent satisfiable pure parts -> solver state
        self.simplified: dict = {}  # pure part -> its simplified form

    def refuted(self, c: Conjunct, parent: Optional[Conjunct] = None) -> bool:
        """Decide ``c``, extending the solved state of ``parent`` when its facts are a prefix."""
        pure = c.pure
        r = self.verdicts.get(pure)
        if r is not None:
            return r
        s = None
        if parent is not None:
            for prefix in (parent.pure, self.simplified.get(parent.pure)):
                base = self.solved.get(prefix) if prefix is not None else None
                if base is not None and pure[:len(prefix)] == prefix:
                    s = base.clone()
                    ok = s.extend(pure[len(prefix):])
                    break
        if s is None:
            s = Solver(pure)
            ok = s.check()
        self.verdicts[pure] = not ok
        if ok:
            self.solved[pure] = s
            if len(self.solved) > _SOLVED_CACHE:
                self.solved.popitem(last=False)
        return not ok

    def reuse(self, pure: tuple, simpler: tuple) -> None:
        """Let ``simpler`` borrow the solver state of ``pure``.

        Simplification only removes symbols no heap atom binds, which no
        later fact can mention, so both decide every extension alike. The
        borrowed state keeps the old facts, hence the size cap.
        """
        base = self.solved.get(pure)
        if base is not None and len(base.parent) <= _REUSE_NODES:
            self.simplified[pure] = simpler
            self.solved.setdefault(simpler, base)
            self.verdicts[simpler] = False

    def run(self, c: Conjunct, start: ir.ProgramPoint) -> WitnessResult:
        # symbols already present must never be reissued
        for _ in range(max((s.id for s in c.symbols()), default=0)):
            self.symbols.fresh()
        b = self.t.budgets
        work = [_Item(start.fn, start.block, start.index, c, self.initial_stack, len(self.initial_stack), ())]
        while work:
            item = work.pop()
            self.steps += 1
            if self.steps > b.max_steps:
                return BudgetExceeded("max_steps", self.steps)
            state = (item.fn, item.block, item.index, item.conj.vars, item.conj.fields,
                     item.conj.pure, item.stack, item.frame, item.loops)
            if state in self.seen:
                continue
            self.seen.add(state)
            if self.log is not None:
                self.log(ir.ProgramPoint(item.fn, item.block, item.index), item.frame, item.conj)
            try:
                succ = self.step(item)
            except _Witness as w:
                return WitnessFound(w.trace, w.conj, w.note, self.steps)
            succ = [s for s in succ if s.conj.pure == item.conj.pure or not self.refuted(s.conj, item.conj)]
            self.created += len(succ)
            if self.created > b.max_conjuncts:
                return BudgetExceeded("max_conjuncts", self.steps)
            work.extend(reversed(succ))
        if self.budget is not None:
            return BudgetExceeded(self.budget, self.steps)
        return Refuted(self.steps)

    # one backward move from ``item``
    def step(self, item: _Item) -> list:
        cfg = self.t.cfgs[item.fn]
        if item.index > 0:
            i = item.index - 1
            stmt = cfg.block(item.block).stmts[i]
            pp = ir.ProgramPoint(item.fn, item.block, i)
            if isinstance(stmt, ir.Call):
                return self.call(item, stmt, pp)
            q = wp_step(stmt, item.conj, item.fn, item.frame, self.symbols, self.t.summaries, self.refuted)
            return [_at(item, c.at(pp) if c is not item.conj else c, index=i) for c in q]
        return self.block_entry(item, cfg)

    def block_entry(self, item: _Item, cfg: ir.Cfg) -> list:
        c = simplify_conjunct(item.conj)
        if c.pure != item.conj.pure:
            self.reuse(item.conj.pure, c.pure)
        if item.block == cfg.entry:
            return self.function_entry(_at(item, c))
        region = cfg.regions.get(item.block) if self.t.skip else None
        if region is not None:
            resume, blocks = region
            names, attrs = self.t.region_writes(item.fn, blocks)
            if not self.t.touches(c, item.frame, item.fn, names, attrs):
                return [_at(item, c, block=resume, index=_end(cfg.block(resume)))]
        out = []
        for pred, kind in cfg.block(item.block).preds:
            loops = dict(item.loops)
            lkey = (item.frame, item.fn, item.block)
            if (pred, item.block) in cfg.back_edges:
                n = loops.get(lkey, 0)
                if n >= self.t.budgets.unroll:
                    out += self.leave_loop(item, c, cfg)
                    continue
                loops[lkey] = n + 1
            elif item.block in cfg.loop_headers:
                loops.pop(lkey, None)
            pc = c
            pblock = cfg.block(pred)
            if kind in ("true", "false"):
                h = _Heap(c, self.symbols)
                t = h.bind(VarKey(item.frame, item.fn, pblock.stmts[-1].cond))
                h.facts.append(eq(Truth(t), TRUE if kind == "true" else FALSE))
                pc = h.done()
            out.append(_Item(item.fn, pred, _end(pblock), pc, item.stack, item.frame,
                             tuple(sorted(loops.items()))))
        return out

    def leave_loop(self, item: _Item, c: Conjunct, cfg: ir.Cfg) -> list:
        """Stop unrolling: forget what the loop may write and exit through its entry edge.

        Any number of further iterations leaves the locations the loop does
        not write unchanged, so the havocked conjunct is a sound precondition.
        """
        names, attrs = self.t.region_writes(item.fn, self.t.loop_blocks(item.fn, item.block))
        h = _Heap(c, self.symbols)
        h.vars = {k: s for k, s in h.vars.items()
                  if not (k.frame == item.frame and k.fn == item.fn and k.name in names)}
        h.fields = {loc: v for loc, v in h.fields.items() if loc[1] not in attrs}
        havocked = h.done()
        loops = tuple(x for x in item.loops if x[0] != (item.frame, item.fn, item.block))
        out = []
        for pred, _ in cfg.block(item.block).preds:
            if (pred, item.block) not in cfg.back_edges:
                out.append(_Item(item.fn, pred, _end(cfg.block(pred)), havocked, item.stack,
                                 item.frame, loops))
        return out

    def function_entry(self, item: _Item) -> list:
        fn = item.fn
        if item.stack:
            sites = [item.stack[-1]]
            stack = item.stack[:-1]
        elif fn == self.t.program.entry:
            if item.conj.fields:
                return []  # the heap is empty when the program starts
            raise _Witness(item.conj.trace, item.conj, "entry")
        else:
            sites = sorted(self.t.callgraph.callers.get(fn, ()), key=lambda p: (p.fn, p.block, p.index))
            stack = ()
            if not sites:
                # never called: the conjunct cannot be ruled out from here
                raise _Witness(item.conj.trace, item.conj, "uncalled")
        out = []
        f = self.t.program.functions[fn]
        for site in sites:
            call = self.t.cfgs[site.fn].stmt_at(site)
            h = _Heap(item.conj, self.symbols)
            actuals = ((call.receiver,) if call.is_method else ()) + tuple(call.args)
            outer = item.frame - 1
            for p, a in zip(f.params, actuals):
                s = h.pop(VarKey(item.frame, fn, p))
                if s is not None:
                    h.put(VarKey(outer, site.fn, a), s)
            # remaining callee locals were never assigned before the call
            h.vars = {k: s for k, s in h.vars.items() if k.frame != item.frame}
            loops = tuple(x for x in item.loops if x[0][0] < item.frame)
            out.append(_Item(site.fn, site.block, site.index, h.done(), stack, outer, loops))
        return out

    def call(self, item: _Item, stmt: ir.Call, pp: ir.ProgramPoint) -> list:
        c = item.conj
        tkey = VarKey(item.frame, item.fn, stmt.target) if stmt.target else None
        bound = tkey is not None and c.lookup(tkey) is not None
        out = []
        for callee in sorted(self.t.callgraph.callees.get(pp, ())):
            if callee.startswith("summary:"):
                if not bound:
                    out.append(_at(item, c, index=pp.index))
                    continue
                h = _Heap(c, self.symbols)
                s = h.pop(tkey)
                ret = summary_node_return(callee, self.t.summaries)
                if ret is not None:
                    h.facts.append(eq(s, const(ret)))
                out.append(_at(item, h.done().at(pp), index=pp.index))
                continue
            if not bound:
                # frame rule: the callee leaves every atom of c alone
                attrs = self.t.modified_attrs(callee)
                if not any(a in attrs for (_, a), _ in c.fields):
                    out.append(_at(item, c, index=pp.index))
                    continue
            if len(item.stack) >= self.t.budgets.max_stack:
                self.budget = "max_stack"
                continue
            inner = item.frame + 1
            cfg = self.t.cfgs[callee]
            loops = tuple(x for x in item.loops if x[0][0] < inner)
            for e in cfg.exits:
                ret = cfg.block(e).stmts[-1]
                h = _Heap(c, self.symbols)
                if bound:
                    s = h.pop(tkey)
                    if ret.value is not None:
                        h.put(VarKey(inner, callee, ret.value), s)
                    else:
                        h.facts.append(eq(s, const(None)))
                conj = h.done().at(pp)
                out.append(_Item(callee, e, len(cfg.block(e).stmts) - 1, conj,
                                 item.stack + (pp,), inner, loops))
        return out


class _Witness(Exception):
    def __init__(self, trace, conj, note):
        super().__init__(note)
        self.trace, self.conj, self.note = trace, conj, note


def _end(block: ir.Block) -> int:
    return len(block.stmts) - 1 if block.is_branch else len(block.stmts)


def _at(item: _Item, c: Conjunct, block: Optional[int] = None, index: Optional[int] = None) -> _Item:
    return _Item(item.fn, item.block if block is None else block,
                 item.index if index is None else index, c, item.stack, item.frame, item.loops)


# -- candidate queries --------------------------------------------------------


def make_initial_query(fn: str, var: str, typ, frame: int = 0) -> Conjunct:
    """``var↦v ∧ v == typ``: the receiver ``var`` holds a value of type ``typ``."""
    symbols = SymbolFactory()
    s = symbols.fresh(var.lstrip("$"))
    return Conjunct.make({VarKey(frame, fn, var): s}, {}, [eq(s, const(typ))])


__all__ = [
    "Budgets", "BackwardTask", "BudgetExceeded", "Refuted", "WitnessFound", "WitnessResult",
    "make_initial_query", "wp_step", "NONE",
]
