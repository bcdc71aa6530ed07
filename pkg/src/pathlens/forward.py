"""Flow-sensitive, path-insensitive forward type analysis.

Abstract values are allocation-site addresses, types, and primitive
constants; an abstract state maps variables and (address, attribute)
pairs to sets of abstract values. Branch joins take the pointwise union,
which is exactly where path information gets lost.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from . import ir
from .concrete import FoldError, apply_binop, truthy, type_name
from .summaries import BUILTIN_CLASS, PRIMITIVE_TYPES, SummaryTable, default_summaries

DEFAULT_K_PRIM = 4
DEFAULT_MAX_VISITS = 200_000


class DivergenceError(RuntimeError):
    pass


# -- abstract values ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class Type:
    name: str
    is_class: bool = False

    def __str__(self) -> str:
        return self.name


BOOL, INT, FLOAT, STR, NONE = (Type(n) for n in PRIMITIVE_TYPES)
NUMERIC = frozenset({BOOL, INT, FLOAT})


def class_type(name: str) -> Type:
    return Type(name, True)


def type_from_name(name: str) -> Type:
    return Type(name) if name in PRIMITIVE_TYPES else class_type(name)


@dataclass(frozen=True, order=True)
class Addr:
    site: str
    cls: str

    @property
    def type(self) -> Type:
        return class_type(self.cls)

    def __str__(self) -> str:
        return f"addr_{self.cls}@{self.site}"


@dataclass(frozen=True, order=True)
class Ty:
    type: Type

    def __str__(self) -> str:
        return str(self.type)


@dataclass(frozen=True, order=True)
class Prim:
    tag: str  # type name; keeps 1, 1.0 and True apart
    value: object

    @property
    def type(self) -> Type:
        return Type(self.tag)

    def __str__(self) -> str:
        return repr(self.value)


AbstractValue = Union[Addr, Ty, Prim]


def prim(value) -> Prim:
    return Prim(type_name(value), value)


def type_of(v: AbstractValue) -> Type:
    return v.type


ANY_PRIM = frozenset(Ty(t) for t in (BOOL, INT, FLOAT, STR, NONE))


@dataclass(frozen=True, order=True)
class Var:
    fn: str
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Field:
    addr: Addr
    attr: str

    def __str__(self) -> str:
        return f"{self.addr}.{self.attr}"


MemLoc = Union[Var, Field]


def widen(values, k_prim: int = DEFAULT_K_PRIM) -> frozenset:
    """Canonical form: more than k_prim Prims of one type collapse to that type,
    and Prims subsumed by a Ty are dropped.

    Counting per type keeps this a closure operator, so join stays associative.
    """
    values = frozenset(values)
    prims = [v for v in values if isinstance(v, Prim)]
    if not prims:
        return values
    tys = {v.type for v in values if isinstance(v, Ty)}
    counts = Counter(p.type for p in prims)
    tys |= {t for t, n in counts.items() if n > k_prim}
    if not tys.intersection(counts):
        return values
    return frozenset(v for v in values if not (isinstance(v, Prim) and v.type in tys)) | {Ty(t) for t in tys}


class AbstractState:
    """Immutable partial map from memory locations to non-empty value sets."""

    __slots__ = ("_map", "k_prim")

    def __init__(self, mapping=None, k_prim: int = DEFAULT_K_PRIM):
        self._map = dict(mapping or {})
        self.k_prim = k_prim

    def get(self, loc: MemLoc) -> frozenset:
        return self._map.get(loc, frozenset())

    def __contains__(self, loc) -> bool:
        return loc in self._map

    def __iter__(self):
        return iter(self._map)

    def items(self):
        return self._map.items()

    def __len__(self) -> int:
        return len(self._map)

    def set(self, loc: MemLoc, values) -> "AbstractState":
        m = dict(self._map)
        values = widen(values, self.k_prim)
        if values:
            m[loc] = values
        else:
            m.pop(loc, None)
        return AbstractState(m, self.k_prim)

    def update(self, changes: dict) -> "AbstractState":
        m = dict(self._map)
        for loc, values in changes.items():
            values = widen(values, self.k_prim)
            if values:
                m[loc] = values
            else:
                m.pop(loc, None)
        return AbstractState(m, self.k_prim)

    def restrict(self, keep: Callable[[MemLoc], bool]) -> "AbstractState":
        return AbstractState({k: v for k, v in self._map.items() if keep(k)}, self.k_prim)

    def heap(self) -> "AbstractState":
        return self.restrict(lambda loc: isinstance(loc, Field))

    def __eq__(self, other) -> bool:
        return isinstance(other, AbstractState) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def leq(self, other: "AbstractState") -> bool:
        return all(loc in other._map and vals <= other._map[loc] for loc, vals in self._map.items())

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {{{', '.join(sorted(map(str, v)))}}}" for k, v in sorted(self._map.items(), key=lambda kv: str(kv[0])))
        return f"AbstractState({inner})"

    def to_json(self) -> dict:
        return {str(k) if isinstance(k, Var) else str(k): sorted(str(v) for v in vals)
                for k, vals in sorted(self._map.items(), key=lambda kv: str(kv[0]))}


def join(a: Optional[AbstractState], b: Optional[AbstractState]) -> Optional[AbstractState]:
    """Pointwise union; ``None`` is the unreachable state."""
    if a is None:
        return b
    if b is None:
        return a
    m = dict(a._map)
    for loc, vals in b._map.items():
        m[loc] = widen(m.get(loc, frozenset()) | vals, a.k_prim)
    return AbstractState(m, a.k_prim)


# -- binary operators ---------------------------------------------------------


COMPARISONS = ("==", "!=", "<")


def _result_type(op: str, ta: Type, tb: Type) -> Optional[Type]:
    if op in ("==", "!="):
        return BOOL
    if op == "<":
        if (ta in NUMERIC and tb in NUMERIC) or (ta == STR and tb == STR):
            return BOOL
        return None
    if ta in NUMERIC and tb in NUMERIC:
        if op in ("+", "-", "*", "//"):
            return FLOAT if FLOAT in (ta, tb) else INT
    if op == "+" and ta == STR and tb == STR:
        return STR
    if op == "*" and ((ta == STR and tb in (INT, BOOL)) or (tb == STR and ta in (INT, BOOL))):
        return STR
    return None


def _truth(v: AbstractValue) -> Optional[bool]:
    if isinstance(v, Prim):
        return truthy(v.value)
    if isinstance(v, Addr):
        return True
    if v.type == NONE:
        return False
    if v.type.is_class:
        return True
    return None


def binop_values(op: str, left: frozenset, right: frozenset) -> set:
    """Abstract ``left op right``.

    Constant pairs fold. Otherwise arithmetic yields the join of the operand
    types plus the promoted result type (``bool + bool`` is an int), and
    comparisons yield BOOL. Pairs that raise TypeError contribute nothing.
    """
    out: set = set()
    if op in ("and", "or"):
        for a in left:
            t = _truth(a)
            take_left = (t is False) if op == "and" else (t is True)
            take_right = (t is not False) if op == "and" else (t is not True)
            if take_left or t is None:
                out.add(a)
            if take_right:
                out |= right
        return out
    for a in left:
        for b in right:
            if isinstance(a, Prim) and isinstance(b, Prim):
                try:
                    out.add(prim(apply_binop(op, a.value, b.value)))
                    continue
                except FoldError:
                    pass
                except (TypeError, ZeroDivisionError):
                    continue
            if op in ("==", "!=") and (isinstance(a, Addr) or isinstance(b, Addr)):
                if isinstance(a, Addr) and isinstance(b, Addr) and a == b:
                    out.add(Ty(BOOL))
                else:
                    out.add(prim(op == "!="))
                continue
            rt = _result_type(op, a.type, b.type)
            if rt is None:
                continue
            out.add(Ty(rt))
            if op not in COMPARISONS:
                out |= {Ty(a.type), Ty(b.type)}
    return out


# -- transfer -----------------------------------------------------------------


@dataclass
class Context:
    """What a transfer function needs beyond the statement and the state."""

    fn: str = "main"
    program: Optional[ir.IRProgram] = None
    summaries: SummaryTable = field(default_factory=default_summaries)
    on_undefined: Optional[Callable[[str], None]] = None

    def class_has_method(self, cls: str, attr: str) -> bool:
        return self.program is not None and self.program.method(cls, attr) is not None

    def summary_attr(self, v: AbstractValue, attr: str):
        """(present, result values) for an attribute of a non-address value."""
        t = v.type
        cname = t.name if t.is_class else BUILTIN_CLASS[t.name]
        attrs = self.summaries.class_attrs(cname)
        if attrs is None or attr not in attrs:
            return False, frozenset()
        ret = attrs[attr]
        if ret is None:
            return True, ANY_PRIM
        return True, frozenset({Ty(type_from_name(ret))})


def new_site(stmt: ir.New, fn: str) -> Addr:
    sp = stmt.span
    return Addr(f"{fn}:{sp.line}:{sp.col}", stmt.cls)


def read_var(state: AbstractState, ctx: Context, name: str) -> frozenset:
    vals = state.get(Var(ctx.fn, name))
    if not vals:
        if ctx.on_undefined is not None:
            ctx.on_undefined(name)
        return frozenset({Ty(NONE)})
    return vals


def has_attr(v: AbstractValue, attr: str, state: AbstractState, ctx: Context) -> bool:
    if isinstance(v, Addr):
        return Field(v, attr) in state or ctx.class_has_method(v.cls, attr)
    return ctx.summary_attr(v, attr)[0]


def transfer(stmt, state: AbstractState, ctx: Optional[Context] = None) -> Optional[AbstractState]:
    """Abstract effect of one non-call statement; ``None`` means no execution gets past it."""
    ctx = ctx or Context()
    fn = ctx.fn
    if isinstance(stmt, ir.ConstAssign):
        return state.set(Var(fn, stmt.target), {prim(stmt.value)})
    if isinstance(stmt, ir.Alias):
        return state.set(Var(fn, stmt.target), read_var(state, ctx, stmt.source))
    if isinstance(stmt, ir.Binop):
        vals = binop_values(stmt.op, read_var(state, ctx, stmt.left), read_var(state, ctx, stmt.right))
        if not vals:
            return None
        return state.set(Var(fn, stmt.target), vals)
    if isinstance(stmt, ir.AttrRead):
        out: set = set()
        for v in read_var(state, ctx, stmt.obj):
            if isinstance(v, Addr):
                out |= state.get(Field(v, stmt.attr))
            else:
                out |= ctx.summary_attr(v, stmt.attr)[1]
        if not out:
            return None
        return state.set(Var(fn, stmt.target), out)
    if isinstance(stmt, ir.AttrWrite):
        src = read_var(state, ctx, stmt.source)
        changes = {}
        for v in read_var(state, ctx, stmt.obj):
            if isinstance(v, Addr):
                loc = Field(v, stmt.attr)
                changes[loc] = state.get(loc) | src  # weak update
        if not changes:
            return None
        return state.update(changes)
    if isinstance(stmt, ir.New):
        return state.set(Var(fn, stmt.target), {new_site(stmt, fn)})
    if isinstance(stmt, (ir.Branch, ir.Nop, ir.Return)):
        if isinstance(stmt, ir.Return) and stmt.value:
            read_var(state, ctx, stmt.value)
        return state
    raise TypeError(f"transfer does not handle {type(stmt).__name__}; calls go through analyze()")


# -- branch refinement --------------------------------------------------------


def _compatible_eq(v: AbstractValue, c) -> bool:
    """Could a value described by ``v`` compare equal to the primitive ``c``?"""
    if isinstance(v, Prim):
        return v.value == c
    if isinstance(v, Addr):
        return False
    t = v.type
    if t.is_class:
        return False
    ct = type_name(c)
    if t in NUMERIC and Type(ct) in NUMERIC:
        if t == BOOL:
            return c in (0, 1)
        return True
    return t.name == ct


def refine_branch(cond: str, polarity: bool, state: AbstractState, ctx: Optional[Context] = None,
                  definition: Optional[ir.IRStmt] = None) -> Optional[AbstractState]:
    """Filter ``state`` along one branch edge; ``None`` if the edge is infeasible.

    ``definition`` is the statement computing ``cond`` when it immediately
    precedes the branch. Conditions of the form ``y == c`` / ``y != c`` with
    ``c`` a single constant refine ``y``; the condition variable itself is
    always filtered by truthiness.
    """
    ctx = ctx or Context()
    cvar = Var(ctx.fn, cond)
    cvals = state.get(cvar)
    if cvals:
        kept = {v for v in cvals if _truth(v) in (None, polarity)}
        if not kept:
            return None
        state = state.set(cvar, kept)
    if isinstance(definition, ir.Binop) and definition.target == cond and definition.op in ("==", "!="):
        y, z = definition.left, definition.right
        if y == cond or z == cond:
            return state
        yv, zv = state.get(Var(ctx.fn, y)), state.get(Var(ctx.fn, z))
        if not (len(zv) == 1 and isinstance(next(iter(zv)), Prim)):
            y, z, yv, zv = z, y, zv, yv
        if yv and len(zv) == 1 and isinstance(next(iter(zv)), Prim):
            c = next(iter(zv)).value
            equal = polarity if definition.op == "==" else not polarity
            if equal:
                kept = {v for v in yv if _compatible_eq(v, c)}
            else:
                kept = {v for v in yv if not (isinstance(v, Prim) and v.value == c)
                        and not (c is None and isinstance(v, Ty) and v.type == NONE)}
            if not kept:
                return None
            state = state.set(Var(ctx.fn, y), kept)
    return state


# -- whole-program analysis ---------------------------------------------------


RETURN = "$return"


@dataclass
class ForwardResult:
    program: ir.IRProgram
    cfgs: dict
    block_in: dict  # (fn, block) -> AbstractState at block entry
    exits: dict  # fn -> AbstractState holding the heap and RETURN at function exit
    receivers: dict  # call site -> set of class names the receiver may hold
    summaries: SummaryTable
    k_prim: int
    visits: int = 0

    @property
    def reached(self) -> set:
        return {fn for fn, b in self.block_in if b == 0}

    def context(self, fn: str, on_undefined=None) -> Context:
        return Context(fn, self.program, self.summaries, on_undefined)

    def block_states(self, fn: str, bid: int) -> list:
        """States before each statement of the block (``None`` where unreachable)."""
        state = self.block_in.get((fn, bid))
        block = self.cfgs[fn].block(bid)
        out = []
        ctx = self.context(fn)
        for i, stmt in enumerate(block.stmts):
            out.append(state)
            if state is None:
                continue
            if isinstance(stmt, ir.Call):
                state = _call_post(self, ir.ProgramPoint(fn, bid, i), stmt, state)
            else:
                state = transfer(stmt, state, ctx)
        return out

    def state_at(self, pp: ir.ProgramPoint) -> Optional[AbstractState]:
        return self.block_states(pp.fn, pp.block)[pp.index]

    def states(self) -> Iterator:
        for fn in sorted(self.cfgs):
            for block in self.cfgs[fn].blocks:
                if (fn, block.id) not in self.block_in:
                    continue
                for i, s in enumerate(self.block_states(fn, block.id)):
                    yield ir.ProgramPoint(fn, block.id, i), block.stmts[i], s

    def values_at(self, pp: ir.ProgramPoint, var: str) -> frozenset:
        s = self.state_at(pp)
        return s.get(Var(pp.fn, var)) if s is not None else frozenset()

    def to_json(self) -> dict:
        out = {}
        for pp, stmt, s in self.states():
            out[str(pp)] = {"stmt": str(stmt), "line": stmt.span.line,
                            "state": s.to_json() if s is not None else None}
        return out


def _dispatch(res_or_an, site, stmt: ir.Call, state: AbstractState, fn: str):
    """Resolve a call: returns list of (callee qualname, bound param values) and summary results."""
    program = res_or_an.program
    summaries = res_or_an.summaries
    ctx = Context(fn, program, summaries)
    user: list = []
    summary_vals: set = set()
    classes: set = set()
    if stmt.is_method:
        groups: dict = {}
        for v in read_var(state, ctx, stmt.receiver):
            t = v.type
            if t.is_class and program.method(t.name, stmt.callee) is not None:
                groups.setdefault(t.name, set()).add(v)
                classes.add(t.name)
            elif not isinstance(v, Addr):
                present, vals = ctx.summary_attr(v, stmt.callee)
                if present:
                    summary_vals |= vals
                    classes.add(t.name if t.is_class else BUILTIN_CLASS[t.name])
        args = [read_var(state, ctx, a) for a in stmt.args]
        for cname in sorted(groups):
            callee = program.method(cname, stmt.callee)
            user.append((callee.qualname, [frozenset(groups[cname])] + args))
    else:
        args = [read_var(state, ctx, a) for a in stmt.args]
        f = program.functions.get(stmt.callee)
        if f is not None and f.cls is None:
            user.append((f.qualname, args))
        else:
            fs = summaries.functions[stmt.callee]
            summary_vals.add(Ty(type_from_name(fs.returns)))
    return user, summary_vals, classes


def _call_post(res, site, stmt: ir.Call, state: AbstractState) -> Optional[AbstractState]:
    user, summary_vals, _ = _dispatch(res, site, stmt, state, site.fn)
    ret: set = set(summary_vals)
    heap = None
    returned = bool(summary_vals)
    for callee, _ in user:
        ex = res.exits.get(callee)
        if ex is None:
            continue
        returned = True
        ret |= ex.get(Var(callee, RETURN))
        heap = join(heap, ex.heap())
    if not returned:
        return None
    post = join(state, heap) if heap is not None else state
    if stmt.target:
        post = post.set(Var(site.fn, stmt.target), ret)
    return post


class _Analyzer:
    def __init__(self, program, cfgs, entry, summaries, k_prim, max_visits, entry_values):
        self.program = program
        self.cfgs = cfgs
        self.entry = entry
        self.summaries = summaries
        self.k_prim = k_prim
        self.max_visits = max_visits
        self.entry_values = entry_values
        self.block_in: dict = {}
        self.exits: dict = {}
        self.receivers: dict = {}
        self.callers: dict = {}  # callee -> {(caller fn, block)}
        self.work: list = []
        self.queued: set = set()

    def push(self, key) -> None:
        if key not in self.queued:
            self.queued.add(key)
            self.work.append(key)

    def flow(self, fn: str, bid: int, state: Optional[AbstractState]) -> None:
        if state is None:
            return
        key = (fn, bid)
        old = self.block_in.get(key)
        new = join(old, state)
        if old is None or new != old:
            self.block_in[key] = new
            self.push(key)

    def run(self) -> ForwardResult:
        f = self.program.functions[self.entry]
        init = AbstractState({}, self.k_prim)
        for p in f.params:
            vals = self.entry_values.get(p, ANY_PRIM) if self.entry_values else ANY_PRIM
            init = init.set(Var(f.qualname, p), vals)
        self.flow(f.qualname, 0, init)
        visits = 0
        while self.work:
            # lowest (fn, block) first keeps iteration order deterministic
            self.work.sort(reverse=True)
            key = self.work.pop()
            self.queued.discard(key)
            visits += 1
            if visits > self.max_visits:
                raise DivergenceError(f"forward analysis exceeded {self.max_visits} block visits")
            self.visit(*key)
        return ForwardResult(self.program, self.cfgs, self.block_in, self.exits, self.receivers,
                             self.summaries, self.k_prim, visits)

    def visit(self, fn: str, bid: int) -> None:
        block = self.cfgs[fn].block(bid)
        state = self.block_in[(fn, bid)]
        ctx = Context(fn, self.program, self.summaries)
        for i, stmt in enumerate(block.stmts):
            if isinstance(stmt, ir.Call):
                state = self.call(ir.ProgramPoint(fn, bid, i), stmt, state)
            elif isinstance(stmt, ir.Return):
                vals = read_var(state, ctx, stmt.value) if stmt.value else frozenset({prim(None)})
                self.returned(fn, state.heap().set(Var(fn, RETURN), vals))
                return
            elif isinstance(stmt, ir.Branch):
                definition = block.stmts[i - 1] if i > 0 else None
                self.flow(fn, stmt.then_target, refine_branch(stmt.cond, True, state, ctx, definition))
                self.flow(fn, stmt.else_target, refine_branch(stmt.cond, False, state, ctx, definition))
                return
            else:
                state = transfer(stmt, state, ctx)
            if state is None:
                return
        for succ, _ in block.succs:
            self.flow(fn, succ, state)

    def returned(self, fn: str, exit_state: AbstractState) -> None:
        old = self.exits.get(fn)
        new = join(old, exit_state)
        if old is None or new != old:
            self.exits[fn] = new
            for key in self.callers.get(fn, ()):
                self.push(key)

    def call(self, site, stmt: ir.Call, state: AbstractState) -> Optional[AbstractState]:
        user, _, classes = _dispatch(self, site, stmt, state, site.fn)
        self.receivers.setdefault(site, set()).update(classes)
        heap = state.heap()
        for callee, args in user:
            self.callers.setdefault(callee, set()).add((site.fn, site.block))
            params = self.program.functions[callee].params
            entry = heap.update({Var(callee, p): vals for p, vals in zip(params, args)})
            self.flow(callee, 0, entry)
        return _call_post(self, site, stmt, state)


def analyze(program: ir.IRProgram, entry: Optional[str] = None, cfgs: Optional[dict] = None,
            summaries: Optional[SummaryTable] = None, k_prim: int = DEFAULT_K_PRIM,
            max_visits: int = DEFAULT_MAX_VISITS, entry_values: Optional[dict] = None) -> ForwardResult:
    """Fixed point over all functions reachable from ``entry``.

    Parameters of the entry function default to any primitive type, unless
    ``entry_values`` maps a parameter name to a set of abstract values.
    """
    cfgs = cfgs or ir.build_cfgs(program)
    return _Analyzer(program, cfgs, entry or program.entry, summaries or default_summaries(),
                     k_prim, max_visits, entry_values).run()
