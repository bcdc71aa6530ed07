"""Queries for the backward analysis and the decision procedure that refutes them.

A query is a disjunction of conjuncts. Each conjunct pairs a heap part
(program variables and object fields bound to symbolic values, all
separate) with a pure part (a conjunction of boolean facts over symbolic
expressions).

Two notions of equality appear in facts and must not be confused:

* ``Eq(a, b)`` is identity: same type and value, or the same object.
  ``Eq(x, Const(INT))`` reads "x is an int"; ``Eq(x, Const(Create))`` reads
  "x is an instance of Create".
* ``BinExpr(a, "==", b)`` is Python's ``==`` as the program evaluated it,
  so ``1 == 1.0 == True`` holds there.

The decision procedure is congruence closure over identity, a coarser
union-find for Python value equality, constant folding, and conflict
detection. Anything it cannot decide is treated as satisfiable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Optional, Union

from .concrete import FoldError, apply_binop, truthy
from .forward import NUMERIC, NONE, Prim, Type, prim
from .forward import BOOL as BOOL_TYPE


class UndefValue:
    """Marker for an attribute that does not exist yet."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undef"


UNDEF = UndefValue()


# -- symbolic expressions -----------------------------------------------------


@dataclass(frozen=True)
class Sym:
    id: int
    name: str = field(default="v", compare=False)

    def __hash__(self):
        return hash(self.id)

    def __str__(self) -> str:
        return f"{self.name}^{self.id}"


@dataclass(frozen=True)
class Const:
    value: Union[Prim, Type, UndefValue]

    def __str__(self) -> str:
        v = self.value
        if isinstance(v, Prim):
            return repr(v.value)
        return str(v)


@dataclass(frozen=True)
class BinExpr:
    left: "SymExpr"
    op: str
    right: "SymExpr"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Eq:
    left: "SymExpr"
    right: "SymExpr"

    def __str__(self) -> str:
        if self.right == FALSE and isinstance(self.left, Eq):
            return f"{self.left.left}!={self.left.right}"
        return f"{self.left}=={self.right}"


@dataclass(frozen=True)
class Truth:
    """The truthiness of a value, as an ``if`` tests it."""

    arg: "SymExpr"

    def __str__(self) -> str:
        return f"bool({self.arg})"


SymExpr = Union[Sym, Const, BinExpr, Eq, Truth]


def _cached_hash(self) -> int:
    # expressions are immutable and deeply nested: hash each one once
    h = self.__dict__.get("_h")
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_h", h)
    return h


for _cls in (Const, BinExpr, Eq, Truth):
    _cls.__hash__ = _cached_hash

TRUE = Const(prim(True))
FALSE = Const(prim(False))


def const(value) -> Const:
    """Const from a Python primitive, a forward Type, or UNDEF."""
    if isinstance(value, (Type, Prim, UndefValue)):
        return Const(value)
    return Const(prim(value))


def eq(a: SymExpr, b: SymExpr) -> Eq:
    return Eq(a, b)


def distinct(a: SymExpr, b: SymExpr) -> Eq:
    return Eq(Eq(a, b), FALSE)


def symbols_of(e: SymExpr) -> set:
    if isinstance(e, Sym):
        return {e}
    if isinstance(e, Const):
        return set()
    if isinstance(e, (BinExpr, Eq)):
        return symbols_of(e.left) | symbols_of(e.right)
    return symbols_of(e.arg)


def substitute(e: SymExpr, mapping: dict) -> SymExpr:
    if isinstance(e, Sym):
        return mapping.get(e, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, BinExpr):
        return BinExpr(substitute(e.left, mapping), e.op, substitute(e.right, mapping))
    if isinstance(e, Eq):
        return Eq(substitute(e.left, mapping), substitute(e.right, mapping))
    return Truth(substitute(e.arg, mapping))


class SymbolFactory:
    """Fresh symbolic values; ids are never reused within one factory."""

    def __init__(self):
        self._ids = itertools.count(1)

    def fresh(self, name: str = "v") -> Sym:
        return Sym(next(self._ids), name)


# -- heap and conjuncts -------------------------------------------------------


class VarKey(NamedTuple):
    """A program variable in a particular backward call frame."""

    frame: int
    fn: str
    name: str

    def __str__(self) -> str:
        return self.name if self.frame == 0 else f"{self.name}@{self.frame}"


_MASK = (1 << 64) - 1


def _fold(h: int, facts) -> int:
    for f in facts:
        h = ((h * 1000003) ^ hash(f)) & _MASK
    return h


class Facts(tuple):
    """A fact tuple whose hash is computed once, and incrementally on extension.

    Equal contents hash equally however they were built, so a ``Facts`` is a
    drop-in dict key; it must not be mixed with plain tuples as keys.
    """

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = self._h = _fold(0x345678, self)
        return h

    def extended(self, added) -> "Facts":
        out = Facts(tuple.__add__(self, tuple(added)))
        out._h = _fold(hash(self), added)
        return out


@dataclass(frozen=True)
class Conjunct:
    """``H ∧ P`` plus the program points visited so far (most recent last)."""

    vars: tuple = ()  # sorted ((VarKey, Sym), ...)
    fields: tuple = ()  # sorted (((Sym, attr), Sym), ...)
    pure: tuple = ()  # facts, in insertion order, no duplicates
    trace: tuple = ()

    def __post_init__(self):
        if type(self.pure) is not Facts:
            object.__setattr__(self, "pure", Facts(self.pure))

    # construction helpers keep every component canonical

    @staticmethod
    def make(vars=None, fields=None, pure=(), trace=()) -> "Conjunct":
        v = tuple(sorted((vars or {}).items(), key=_var_sort))
        f = tuple(sorted((fields or {}).items(), key=_field_sort))
        return Conjunct(v, f, _dedupe(pure), tuple(trace))

    @property
    def var_map(self) -> dict:
        return dict(self.vars)

    @property
    def field_map(self) -> dict:
        return dict(self.fields)

    def lookup(self, key: VarKey) -> Optional[Sym]:
        for k, s in self.vars:
            if k == key:
                return s
        return None

    def with_parts(self, vars=None, fields=None, pure=None, trace=None) -> "Conjunct":
        return Conjunct.make(
            self.var_map if vars is None else vars,
            self.field_map if fields is None else fields,
            self.pure if pure is None else pure,
            self.trace if trace is None else trace,
        )

    def add_facts(self, *facts) -> "Conjunct":
        pure, known = extend_pure(self, facts)
        return _with_known(replace(self, pure=pure), known)

    @property
    def pure_set(self) -> frozenset:
        known = self.__dict__.get("_known")
        if known is None:
            known = frozenset(self.pure)
            object.__setattr__(self, "_known", known)
        return known

    def at(self, point) -> "Conjunct":
        return replace(self, trace=self.trace + (point,))

    def symbols(self) -> set:
        out = {s for _, s in self.vars}
        for (base, _), val in self.fields:
            out |= {base, val}
        for f in self.pure:
            out |= symbols_of(f)
        return out

    def is_separated(self) -> bool:
        keys = [k for k, _ in self.vars]
        locs = [k for k, _ in self.fields]
        return len(keys) == len(set(keys)) and len(locs) == len(set(locs))

    def __str__(self) -> str:
        return pretty(self)


def _var_sort(item):
    k, _ = item
    return (k.frame, k.fn, k.name)


def _field_sort(item):
    (base, attr), _ = item
    return (base.id, attr)


def extend_pure(c: Conjunct, facts) -> tuple:
    """``c.pure`` plus the new ``facts``, deduplicated, and the set of the result.

    Only the new facts are hashed; the parent's set is reused.
    """
    known = c.pure_set
    added, seen = [], set()
    for f in facts:
        if f not in known and f not in seen:
            added.append(f)
            seen.add(f)
    if not added:
        return c.pure, known
    return c.pure.extended(added), known.union(added)


def _with_known(c: Conjunct, known: frozenset) -> Conjunct:
    object.__setattr__(c, "_known", known)
    return c


def _dedupe(facts) -> tuple:
    seen, out = set(), []
    for f in facts:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return tuple(out)


TOP = Conjunct()


@dataclass(frozen=True)
class Query:
    """Disjunction of conjuncts; the empty disjunction is False."""

    conjuncts: tuple = ()

    @property
    def is_false(self) -> bool:
        return not self.conjuncts

    def __or__(self, other: "Query") -> "Query":
        return Query(self.conjuncts + other.conjuncts)

    def __iter__(self):
        return iter(self.conjuncts)

    def __len__(self) -> int:
        return len(self.conjuncts)

    def __str__(self) -> str:
        if self.is_false:
            return "False"
        return " ∨ ".join(f"({pretty(c)})" for c in self.conjuncts)


FALSE_QUERY = Query(())


def footprint(c: Conjunct) -> set:
    """Memory locations named by heap atoms: VarKeys and (Sym, attr) pairs."""
    return {k for k, _ in c.vars} | {loc for loc, _ in c.fields}


def pretty(c: Conjunct) -> str:
    parts = [f"{k}↦{s}" for k, s in c.vars]
    parts += [f"{b}.{a}↦{v}" for (b, a), v in c.fields]
    parts += [str(f) for f in c.pure]
    return " ∧ ".join(parts) if parts else "True"


# -- decision procedure -------------------------------------------------------


class _Conflict(Exception):
    pass


def _key(e: SymExpr):
    k = e.__dict__.get("_k")
    if k is None:
        k = _make_key(e)
        object.__setattr__(e, "_k", k)
    return k


def _make_key(e: SymExpr):
    if isinstance(e, Sym):
        return ("s", e.id)
    if isinstance(e, Const):
        return ("c", e.value)
    if isinstance(e, BinExpr):
        return ("b", e.op, _key(e.left), _key(e.right))
    if isinstance(e, Eq):
        return ("e", _key(e.left), _key(e.right))
    return ("t", _key(e.arg))


def _types_compatible_eq(t1: Type, t2: Type) -> bool:
    """Can values of these two types be == to each other?"""
    if t1 in NUMERIC and t2 in NUMERIC:
        return True
    return t1 == t2


def _type_prim_compatible_eq(t: Type, p: Prim) -> bool:
    if t.is_class:
        return False
    if t in NUMERIC and p.type in NUMERIC:
        return p.value in (0, 1) if t == BOOL_TYPE else True
    return t == p.type


def _is_annotation(e: SymExpr) -> bool:
    return isinstance(e, Const) and not isinstance(e.value, Prim)


class Solver:
    """Satisfiability of a conjunction of facts.

    Congruence closure is event driven: a change to a class revisits only
    the nodes that use it or belong to it. :meth:`clone` copies the solved
    state so a conjunction that extends another can reuse its work.
    """

    def __init__(self, facts: Iterable[SymExpr] = ()):
        self.ids: dict = {}  # structural key -> node id
        self.node: list = []  # id -> (tag, op, kids, payload)
        self.parent: list = []
        self.pe_parent: list = []  # Python-equality union-find over node ids
        self.prims: dict = {}  # rep -> frozenset of Prim
        self.types: dict = {}  # rep -> frozenset of Type
        self.undef: set = set()  # reps known to be undef
        self.members: dict = {}  # rep -> node ids in the class
        self.uses: dict = {}  # rep -> compound nodes with an operand in the class
        self.sigs: dict = {}
        self.pyneq: set = set()  # pairs known Python-unequal
        self.distinct: set = set()  # pairs known not identical
        self.dirty: list = []
        self.ok = True
        self.facts = list(facts)
        try:
            self.true_k = self.add(TRUE)
            self.false_k = self.add(FALSE)
        except _Conflict:  # pragma: no cover - constants alone never conflict
            self.ok = False

    def clone(self) -> "Solver":
        s = Solver.__new__(Solver)
        s.ids = dict(self.ids)
        s.node = list(self.node)
        s.parent = list(self.parent)
        s.pe_parent = list(self.pe_parent)
        s.prims = dict(self.prims)
        s.types = dict(self.types)
        s.undef = set(self.undef)
        s.members = dict(self.members)
        s.uses = dict(self.uses)
        s.sigs = dict(self.sigs)
        s.pyneq = set(self.pyneq)
        s.distinct = set(self.distinct)
        s.dirty = []
        s.ok = self.ok
        s.facts = list(self.facts)  # not yet checked
        s.true_k, s.false_k = self.true_k, self.false_k
        return s

    # -- union-find ---------------------------------------------------------

    def find(self, k: int) -> int:
        parent = self.parent
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def pe_find(self, k: int) -> int:
        parent = self.pe_parent
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def pe_union(self, a: int, b: int) -> None:
        ra, rb = self.pe_find(a), self.pe_find(b)
        if ra != rb:
            self.pe_parent[rb] = ra

    def add(self, e: SymExpr) -> int:
        """Intern ``e`` and its operands; returns the node id."""
        key = _key(e)
        k = self.ids.get(key)
        if k is not None:
            return k
        if isinstance(e, (BinExpr, Eq)):
            kids = (self.add(e.left), self.add(e.right))
        elif isinstance(e, Truth):
            kids = (self.add(e.arg),)
        else:
            kids = ()
        k = len(self.parent)
        self.ids[key] = k
        self.parent.append(k)
        self.pe_parent.append(k)
        self.members[k] = (k,)
        if isinstance(e, Const):
            self.node.append(("c", None, kids, e.value))
            if isinstance(e.value, Prim):
                self.prims[k] = frozenset((e.value,))
            return k
        if isinstance(e, Sym):
            self.node.append(("s", None, kids, None))
            return k
        if isinstance(e, BinExpr):
            self.node.append(("b", e.op, kids, None))
        elif isinstance(e, Eq):
            ann = e.right.value if _is_annotation(e.right) else e.left.value if _is_annotation(e.left) else None
            if ann is not None:
                kids = (kids[0],) if _is_annotation(e.right) else (kids[1],)
                self.node.append(("a", None, kids, ann))
            else:
                self.node.append(("e", None, kids, None))
        else:
            self.node.append(("t", None, kids, None))
        for kid in set(kids):
            r = self.find(kid)
            self.uses[r] = self.uses.get(r, ()) + (k,)
        self.dirty.append(k)
        if isinstance(e, Eq) or isinstance(e, Truth) or e.op in ("==", "!=", "<"):
            self.annotate(k, BOOL_TYPE)
        return k

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if len(self.members[ra]) < len(self.members[rb]):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.pe_union(ra, rb)
        # nodes of the absorbed class changed rep; those of the survivor
        # only need another look if the class learned something new
        mb = self.members.pop(rb)
        ub = self.uses.pop(rb, ())
        ma, ua = self.members[ra], self.uses.get(ra, ())
        self.dirty.extend(mb)
        self.dirty.extend(ub)
        pa, pb = self.prims.get(ra, frozenset()), self.prims.pop(rb, frozenset())
        ta, tb = self.types.get(ra, frozenset()), self.types.pop(rb, frozenset())
        ud = (rb in self.undef) and ra not in self.undef
        if not pb <= pa:
            self.prims[ra] = pa | pb
            self.dirty.extend(ma)
        if not tb <= ta:
            self.types[ra] = ta | tb
        if not (pb <= pa and tb <= ta) or ud:
            self.dirty.extend(ua)
        if rb in self.undef:
            self.undef.discard(rb)
            self.undef.add(ra)
        self.members[ra] = ma + mb
        if ub:
            self.uses[ra] = ua + ub
        self._class_ok(ra)
        if NONE in self.types.get(ra, ()) and ra not in self.prims:
            self.union(ra, self.add(const(None)))
        return True

    def touch(self, rep: int) -> None:
        self.dirty.extend(self.uses.get(rep, ()))
        self.dirty.extend(self.members[rep])

    def annotate(self, k: int, t: Type) -> None:
        r = self.find(k)
        ts = self.types.get(r, frozenset())
        if t in ts:
            return
        self.types[r] = ts | {t}
        self._class_ok(r)
        self.touch(r)
        if t == NONE:
            # NONE is a singleton type: its only value is the constant None
            self.union(r, self.add(const(None)))

    def mark_undef(self, k: int) -> None:
        r = self.find(k)
        if r not in self.undef:
            self.undef.add(r)
            self._class_ok(r)
            self.touch(r)

    def _class_ok(self, rep: int) -> None:
        prims = self.prims.get(rep, ())
        types = self.types.get(rep, ())
        if len(prims) > 1 or len(types) > 1:
            raise _Conflict()
        if prims and types and next(iter(prims)).type not in types:
            raise _Conflict()
        if rep in self.undef and (prims or types):
            raise _Conflict()

    # -- class contents -----------------------------------------------------

    def prim_of(self, rep: int) -> Optional[Prim]:
        ps = self.prims.get(rep)
        return next(iter(ps)) if ps else None

    def prims_of(self, rep: int) -> list:
        return sorted(self.prims.get(self.find(rep), ()), key=repr)

    def truth_of(self, rep: int) -> Optional[bool]:
        p = self.prim_of(rep)
        if p is not None:
            return truthy(p.value)
        for t in self.types.get(rep, ()):
            if t == NONE:
                return False
            if t.is_class:
                return True
        return None

    def is_bool(self, rep: int) -> bool:
        if BOOL_TYPE in self.types.get(rep, ()):
            return True
        p = self.prim_of(rep)
        return p is not None and p.type == BOOL_TYPE

    def strictly_different(self, a: int, b: int) -> bool:
        pa, pb = self.prim_of(a), self.prim_of(b)
        if pa is not None and pb is not None and pa != pb:
            return True
        ta, tb = self.types.get(a, ()), self.types.get(b, ())
        if ta and tb and not (ta & tb):
            return True
        if (a in self.undef) != (b in self.undef) and (pa or pb or ta or tb):
            return True
        return False

    # -- facts and propagation ----------------------------------------------

    def assert_fact(self, f: SymExpr) -> None:
        if isinstance(f, Eq) and _is_annotation(f.left) and not _is_annotation(f.right):
            f = Eq(f.right, f.left)
        if isinstance(f, Eq) and _is_annotation(f.right):
            k = self.add(f.left)
            if isinstance(f.right.value, Type):
                self.annotate(k, f.right.value)
            else:
                self.mark_undef(k)
            return
        if isinstance(f, Eq):
            self.union(self.add(f.left), self.add(f.right))
        self.union(self.add(f), self.true_k)

    def extend(self, facts: Iterable[SymExpr]) -> bool:
        """Add ``facts`` and propagate; False once the conjunction is unsatisfiable."""
        if not self.ok:
            return False
        try:
            for f in facts:
                self.assert_fact(f)
            self.propagate()
            self.final_conflicts()
        except _Conflict:
            self.ok = False
        return self.ok

    def check(self) -> bool:
        facts, self.facts = self.facts, []
        return self.extend(facts)

    def propagate(self) -> None:
        dirty = self.dirty
        find = self.find
        true_k, false_k = self.true_k, self.false_k
        while dirty:
            k = dirty.pop()
            tag, op, kids, payload = self.node[k]
            if tag in ("c", "s"):
                continue
            rep = find(k)
            if tag == "a":
                if rep == find(true_k):
                    if isinstance(payload, Type):
                        self.annotate(kids[0], payload)
                    else:
                        self.mark_undef(kids[0])
                continue
            ks = tuple(find(x) for x in kids)
            sig = (tag, op) + ks
            other = self.sigs.get(sig)
            if other is None or find(other) == rep:
                self.sigs[sig] = k
            else:
                self.union(other, k)
                rep = find(k)
            if tag == "b":
                a, b = ks
                pa, pb = self.prim_of(a), self.prim_of(b)
                if pa is not None and pb is not None:
                    try:
                        res = apply_binop(op, pa.value, pb.value)
                    except FoldError:
                        res = None
                    except (TypeError, ZeroDivisionError):
                        raise _Conflict()
                    if res is not None:
                        self.union(k, self.add(const(res)))
                        rep = find(k)
                if op in ("==", "!="):
                    is_true, is_false = rep == find(true_k), rep == find(false_k)
                    if op == "!=":
                        is_true, is_false = is_false, is_true
                    if is_true:
                        self.pe_union(a, b)
                    if is_false:
                        self.pyneq.add((a, b))
                    if a == b:
                        self.union(k, true_k if op == "==" else false_k)
                elif op == "<" and a == b:
                    self.union(k, false_k)
                elif op in ("and", "or"):
                    t = self.truth_of(a)
                    if t is not None:
                        pick_left = (not t) if op == "and" else t
                        self.union(k, a if pick_left else b)
            elif tag == "e":
                a, b = ks
                if rep == find(true_k):
                    self.union(a, b)
                elif rep == find(false_k):
                    self.distinct.add((a, b))
                a, b = find(a), find(b)
                if a == b:
                    self.union(k, true_k)
                elif self.strictly_different(a, b):
                    self.union(k, false_k)
            else:
                a = ks[0]
                t = self.truth_of(a)
                if t is not None:
                    self.union(k, true_k if t else false_k)
                elif self.is_bool(a):
                    self.union(k, a)

    def final_conflicts(self) -> None:
        find = self.find
        groups: dict = {}
        for k in range(len(self.parent)):
            if find(k) == k:
                groups.setdefault(self.pe_find(k), []).append(k)
        pe_prims: dict = {}
        for root, reps in groups.items():
            if len(reps) == 1 and reps[0] not in self.types:
                pe_prims[root] = list(self.prims.get(reps[0], ()))
                continue
            prims = [p for r in reps for p in self.prims.get(r, ())]
            types = [t for r in reps for t in self.types.get(r, ())]
            for p, q in itertools.combinations(prims, 2):
                if p.value != q.value:
                    raise _Conflict()
            for t in types:
                for p in prims:
                    if not _type_prim_compatible_eq(t, p):
                        raise _Conflict()
            for t1, t2 in itertools.combinations(set(types), 2):
                if not _types_compatible_eq(t1, t2):
                    raise _Conflict()
            pe_prims[root] = prims
        for a, b in self.pyneq:
            ra, rb = self.pe_find(a), self.pe_find(b)
            if ra == rb:
                raise _Conflict()
            if any(p.value == q.value for p in pe_prims.get(ra, ()) for q in pe_prims.get(rb, ())):
                raise _Conflict()
        for a, b in self.distinct:
            if find(a) == find(b):
                raise _Conflict()


def is_satisfiable_facts(facts: Iterable[SymExpr]) -> bool:
    return Solver(facts).check()


def is_refuted(c: Conjunct) -> bool:
    """True only when the pure part is provably unsatisfiable."""
    return not Solver(c.pure).check()


# -- simplification -----------------------------------------------------------


def simplify_conjunct(c: Conjunct) -> Conjunct:
    """Substitute away symbols that are defined by an equality and bound by no heap atom.

    ``c`` must already be known satisfiable: facts unreachable from the heap
    atoms are dropped.
    """
    heap_syms = {s for _, s in c.vars}
    for (base, _), val in c.fields:
        heap_syms |= {base, val}
    facts = list(_dedupe(c.pure))
    progress = True
    while progress:
        progress = False
        for i, f in enumerate(facts):
            if not isinstance(f, Eq):
                continue
            for s, d in ((f.left, f.right), (f.right, f.left)):
                if (
                    isinstance(s, Sym) and s not in heap_syms
                    and (isinstance(d, Sym) or (isinstance(d, Const) and isinstance(d.value, Prim)))
                    and d != s
                ):
                    rest = facts[:i] + facts[i + 1:]
                    facts = [substitute(g, {s: d}) for g in rest]
                    facts = [g for g in _dedupe(facts) if not (isinstance(g, Eq) and g.left == g.right)]
                    progress = True
                    break
            if progress:
                break
    return replace(c, pure=_live_facts(_dedupe(facts), heap_syms))


def _live_facts(facts, live: set) -> tuple:
    """Facts connected, through shared symbols, to a symbol a heap atom binds.

    The rest constrain only symbols nothing can mention again. Dropping them
    is exact when ``c`` is satisfiable, since they can never take part in a
    later conflict.
    """
    syms = [symbols_of(f) for f in facts]
    live = set(live)
    grew = True
    while grew:
        grew = False
        for ss in syms:
            if ss & live and not ss <= live:
                live |= ss
                grew = True
    return tuple(f for f, ss in zip(facts, syms) if ss & live)


def simplify(q: Query) -> Query:
    """Drop refuted conjuncts and shrink the survivors; equisatisfiable with ``q``."""
    out = []
    for c in q:
        if is_refuted(c):
            continue
        out.append(simplify_conjunct(c))
    return Query(tuple(out))
