"""Concrete-execution oracles shared by the unit suites and the acceptance run."""

from __future__ import annotations

from pathlens.concrete import type_name
from pathlens.forward import Addr, Field, Ty, Type, Var, prim
from pathlens.interp import Obj, interpret

from conftest import inputs


def concretizes(value, vals) -> bool:
    """Is the concrete ``value`` inside the abstract set ``vals``?"""
    if isinstance(value, Obj):
        return Addr(value.site, value.cls) in vals
    return prim(value) in vals or Ty(Type(type_name(value))) in vals


def forward_violations(a, e, max_steps: int = 500_000) -> list:
    """Points where a recorded concrete store escapes the forward state."""
    res = a.forward
    cache: dict = {}
    bad = []
    for args in inputs(e):
        run = interpret(a.program, args, cfgs=a.cfgs, summaries=a.summaries, max_steps=max_steps, record=True)
        for pp, env, heap in run.stores:
            key = (pp.fn, pp.block)
            if key not in cache:
                cache[key] = res.block_states(*key) if key in res.block_in else None
            states = cache[key]
            state = states[pp.index] if states else None
            if state is None:
                bad.append((args, pp, "unreachable"))
                continue
            for name, v in env.items():
                if not concretizes(v, state.get(Var(pp.fn, name))):
                    bad.append((args, pp, name, v))
            for (o, attr), v in heap.items():
                if not concretizes(v, state.get(Field(Addr(o.site, o.cls), attr))):
                    bad.append((args, pp, f"{o!r}.{attr}", v))
    return bad


def attribute_faults(a, e) -> set:
    """(point, variable, type, context) of every attribute error the domain triggers."""
    out = set()
    for args in inputs(e):
        r = interpret(a.program, args, cfgs=a.cfgs, summaries=a.summaries, max_steps=500_000)
        f = r.fault
        if f is not None and f.kind == "attribute-error":
            out.add((f.point, f.var, f.type, f.context))
    return out
