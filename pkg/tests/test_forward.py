import textwrap

import pytest
from hypothesis import given, settings, strategies as st

from conftest import analysis, entries
from oracles import forward_violations
from pathlens import ir
from pathlens.forward import (
    ANY_PRIM, BOOL, FLOAT, INT, NONE, STR, AbstractState, Addr, Context, Field, Prim, Ty, Var,
    analyze, join, prim, refine_branch, transfer, widen,
)
from pathlens.frontend import SourceProgram, load_program

V = lambda name: Var("main", name)  # noqa: E731
A_CREATE = Addr("run_sql:3:0", "Create")
A_SELECT = Addr("run_sql:5:0", "Select")


def state(**vars_):
    return AbstractState({V(k): frozenset(v) for k, v in vars_.items()})


def covers(small, big) -> bool:
    """Semantic order: every value of ``small`` is described by ``big``."""
    if small is None:
        return True
    if big is None:
        return False
    for loc, vals in small.items():
        have = big.get(loc)
        for v in vals:
            if v not in have and not (isinstance(v, Prim) and Ty(v.type) in have):
                return False
    return True


# -- transfer -----------------------------------------------------------------


def test_const_assign_on_empty_state():
    assert transfer(ir.ConstAssign("x", 1), AbstractState()) == state(x={prim(1)})


def test_binop_joins_operand_types():
    s = state(y={Ty(INT)}, z={Ty(FLOAT)})
    assert transfer(ir.Binop("x", "y", "+", "z"), s).get(V("x")) == {Ty(INT), Ty(FLOAT)}


def test_binop_folds_singleton_constants():
    s = state(y={prim(2)}, z={prim(5)})
    assert transfer(ir.Binop("x", "y", "*", "z"), s).get(V("x")) == {prim(10)}
    assert transfer(ir.Binop("x", "y", "<", "z"), s).get(V("x")) == {prim(True)}


def test_comparison_is_bool():
    s = state(y={Ty(INT)}, z={Ty(FLOAT)})
    assert transfer(ir.Binop("x", "y", "==", "z"), s).get(V("x")) == {Ty(BOOL)}


def test_bool_arithmetic_includes_int():
    s = state(y={Ty(BOOL)}, z={Ty(BOOL)})
    assert Ty(INT) in transfer(ir.Binop("x", "y", "+", "z"), s).get(V("x"))


def test_attr_write_is_weak():
    a = Addr("main:1:0", "P")
    s = AbstractState({V("p"): frozenset({a}), V("v"): frozenset({prim(1)}), Field(a, "f"): frozenset({prim(None)})})
    out = transfer(ir.AttrWrite("p", "f", "v"), s)
    assert out.get(Field(a, "f")) == {prim(None), prim(1)}


def test_attr_read_unions_fields_of_all_targets():
    a, b = Addr("main:1:0", "P"), Addr("main:2:0", "P")
    s = AbstractState({V("p"): frozenset({a, b}), Field(a, "f"): frozenset({prim(1)}),
                       Field(b, "f"): frozenset({prim("s")})})
    assert transfer(ir.AttrRead("x", "p", "f"), s).get(V("x")) == {prim(1), prim("s")}


def test_new_binds_allocation_site():
    stmt = ir.New("x", "P", ir.Span("f.py", 4, 8))
    assert transfer(stmt, AbstractState()).get(V("x")) == {Addr("main:4:8", "P")}


def test_undefined_read_reported_and_treated_as_none():
    seen = []
    ctx = Context("main", on_undefined=seen.append)
    out = transfer(ir.Alias("x", "ghost"), AbstractState(), ctx)
    assert seen == ["ghost"]
    assert out.get(V("x")) == {Ty(NONE)}


def test_sql_forward_reports_create_lacks_add_where():
    a = analysis("programs", "sql", backward=False)
    (c,) = a.report.candidates
    assert (c.kind, c.variable, c.type) == ("attribute-error", "sql", "Create")
    cfg = a.cfgs["run_sql"]
    site = next(pp for pp, s in cfg.statements() if isinstance(s, ir.Call) and s.callee == "add_where")
    assert c.point == site
    call_run = next(pp for pp, s in cfg.statements() if isinstance(s, ir.Call) and s.callee == "run")
    assert {v.cls for v in a.forward.values_at(call_run, "sql")} == {"Create", "Select"}


def test_identity_function_passes_argument_type():
    src = "def ident(v):\n    return v\n\ndef main(a):\n    x = a + 1\n    y = ident(x)\n    return y\n"
    prog = load_program(SourceProgram.from_text(src, "main"))
    res = analyze(prog, "main", entry_values={"a": frozenset({Ty(INT)})})
    ret = next(pp for pp, s in ir.build_cfg(prog.functions["main"]).statements() if isinstance(s, ir.Return))
    assert res.values_at(ret, "y") == {Ty(INT)}


# -- join ---------------------------------------------------------------------

LOCS = [V("x"), V("y"), Field(Addr("main:1:0", "P"), "f")]
VALUES = [prim(0), prim(1), prim(2), prim(3), prim(4), prim(None), prim("a"), Ty(INT), Ty(STR), Ty(NONE),
          Addr("main:1:0", "P"), Addr("main:2:0", "Q")]

states = st.dictionaries(st.sampled_from(LOCS), st.frozensets(st.sampled_from(VALUES), min_size=1, max_size=6),
                         max_size=3).map(lambda m: AbstractState().update(m))


@given(states)
def test_join_idempotent(s):
    assert join(s, s) == s


@given(states, states)
def test_join_commutative(s, t):
    assert join(s, t) == join(t, s)


@given(states, states, states)
def test_join_associative(s, t, u):
    assert join(join(s, t), u) == join(s, join(t, u))


@given(states, states)
def test_join_is_upper_bound(s, t):
    j = join(s, t)
    assert covers(s, j) and covers(t, j)


def test_join_of_branches_collects_both_classes():
    j = join(state(sql={A_CREATE}), state(sql={A_SELECT}))
    assert j.get(V("sql")) == {A_CREATE, A_SELECT}


def test_join_keeps_one_sided_locations():
    j = join(state(x={prim(1)}), state(y={prim(2)}))
    assert j.get(V("x")) == {prim(1)} and j.get(V("y")) == {prim(2)}


def test_widening_cap():
    assert widen({prim(i) for i in range(4)}) == {prim(i) for i in range(4)}
    assert widen({prim(i) for i in range(5)}) == {Ty(INT)}
    assert widen({prim(0), Ty(INT), prim("s")}) == {Ty(INT), prim("s")}


STMTS = [
    ir.Alias("x", "y"),
    ir.Binop("x", "y", "+", "z"),
    ir.Binop("x", "y", "==", "z"),
    ir.Binop("x", "y", "and", "z"),
    ir.Binop("x", "y", "<", "z"),
    ir.AttrRead("x", "y", "f"),
    ir.AttrWrite("y", "f", "z"),
    ir.ConstAssign("x", 3),
]
ADDR = Addr("main:1:0", "P")
small_vals = st.frozensets(st.sampled_from([prim(0), prim(1), prim(2), prim(None), Ty(INT), Ty(BOOL), ADDR]),
                           min_size=1, max_size=4)


@st.composite
def ordered_pair(draw):
    lo = {V("y"): draw(small_vals), V("z"): draw(small_vals), Field(ADDR, "f"): draw(small_vals)}
    hi = {k: v | draw(small_vals) for k, v in lo.items()}
    return AbstractState().update(lo), AbstractState().update(hi)


@settings(max_examples=300)
@given(st.sampled_from(STMTS), ordered_pair())
def test_transfer_monotone(stmt, pair):
    lo, hi = pair
    assert covers(lo, hi)
    assert covers(transfer(stmt, lo), transfer(stmt, hi))


# -- refinement ---------------------------------------------------------------

CREATE, SELECT = 0, 1


def _mode_state():
    s = state(mode={prim(CREATE), prim(SELECT)}, k={prim(SELECT)})
    cmp = ir.Binop("c", "mode", "==", "k")
    return transfer(cmp, s), cmp


def test_refine_true_edge_keeps_matching_constant():
    s, cmp = _mode_state()
    assert refine_branch("c", True, s, definition=cmp).get(V("mode")) == {prim(SELECT)}


def test_refine_false_edge_removes_constant():
    s, cmp = _mode_state()
    assert refine_branch("c", False, s, definition=cmp).get(V("mode")) == {prim(CREATE)}


def test_refine_without_constants_is_noop():
    s = state(mode={Ty(INT)}, k={prim(SELECT)})
    cmp = ir.Binop("c", "mode", "==", "k")
    s = transfer(cmp, s)
    assert refine_branch("c", True, s, definition=cmp).get(V("mode")) == {Ty(INT)}


@given(st.frozensets(st.sampled_from([0, 1, 2, 3, None, "a"]), min_size=1), st.sampled_from([0, 1, 2, None, "a"]),
       st.booleans(), st.sampled_from(["==", "!="]))
def test_refine_matches_enumeration(values, c, polarity, op):
    """On constant sets, refinement keeps exactly the values that take the edge."""
    s = transfer(ir.Binop("t", "y", op, "k"), state(y={prim(v) for v in values}, k={prim(c)}))
    out = refine_branch("t", polarity, s, definition=ir.Binop("t", "y", op, "k"))
    expect = {v for v in values if ((v == c) if op == "==" else (v != c)) == polarity}
    if not expect:
        assert out is None
    else:
        assert out.get(V("y")) == {prim(v) for v in expect}


def test_refine_drops_infeasible_edge():
    s = state(c={prim(True)})
    assert refine_branch("c", False, s) is None


# -- whole-program fixed point -------------------------------------------------


def _loop_result(src, k_prim=4):
    prog = load_program(SourceProgram.from_text(textwrap.dedent(src), "main"))
    return prog, analyze(prog, "main", k_prim=k_prim)


COUNTER = """
    def main(n):
        i = 0
        while i < n:
            i = i + 1
        return i
"""


def test_counter_loop_widens_to_int():
    prog, res = _loop_result(COUNTER)
    cfg = res.cfgs["main"]
    (header,) = cfg.loop_headers
    assert res.block_in[("main", header)].get(V("i")) == {Ty(INT)}


def test_counter_without_refinement_still_widens():
    # `i < 2` does not refine i, so the header sees 0..4 before the cap collapses it
    _, res = _loop_result(COUNTER.replace("i < n", "i < 2"))
    (header,) = res.cfgs["main"].loop_headers
    assert res.block_in[("main", header)].get(V("i")) == {Ty(INT)}


def test_toggle_loop_stays_precise_under_cap():
    src = COUNTER.replace("i = i + 1", "i = 1 - i")
    _, res = _loop_result(src)
    (header,) = res.cfgs["main"].loop_headers
    assert res.block_in[("main", header)].get(V("i")) == {prim(0), prim(1)}
    _, res = _loop_result(src, k_prim=1)
    assert res.block_in[("main", header)].get(V("i")) == {Ty(INT)}


def _stable(res):
    """Re-apply every block's transfer; nothing may grow."""
    for (fn, bid), _ in sorted(res.block_in.items()):
        cfg = res.cfgs[fn]
        block = cfg.block(bid)
        states = res.block_states(fn, bid)
        if not block.stmts:
            out = res.block_in[(fn, bid)]
            for succ, _ in block.succs:
                assert covers(out, res.block_in.get((fn, succ)))
            continue
        last, before = block.stmts[-1], states[-1]
        if before is None:
            continue
        ctx = res.context(fn)
        if isinstance(last, ir.Branch):
            definition = block.stmts[-2] if len(block.stmts) > 1 else None
            for target, pol in ((last.then_target, True), (last.else_target, False)):
                assert covers(refine_branch(last.cond, pol, before, ctx, definition), res.block_in.get((fn, target)))
        elif isinstance(last, ir.Return):
            assert covers(before.heap(), res.exits[fn])
        else:
            full = res.block_states(fn, bid)
            out = transfer(last, full[-1], ctx) if not isinstance(last, ir.Call) else None
            for succ, _ in block.succs:
                if out is not None:
                    assert covers(out, res.block_in.get((fn, succ)))


@pytest.mark.parametrize("name", [e["name"] for e in entries("programs") if e["name"] != "richards"])
def test_fixed_point_is_stable(name):
    _stable(analysis("programs", name, backward=False).forward)


@pytest.mark.parametrize("name", [e["name"] for e in entries("programs") if e["name"] != "richards"])
def test_forward_sound_on_corpus(name):
    e = next(x for x in entries("programs") if x["name"] == name)
    assert forward_violations(analysis("programs", name, backward=False), e) == []


def test_oracle_detects_unsound_state():
    """Sanity check of the oracle itself: pinning the entry argument is caught."""
    e = {"name": "sql", "file": "programs/sql.py", "entry": "run_sql", "domain": [[0, 1]]}
    a = analysis("programs", "sql", backward=False)
    pinned = analyze(a.program, "run_sql", a.cfgs, a.summaries, entry_values={"mode": frozenset({prim(0)})})

    class Fake:
        program, cfgs, summaries, forward = a.program, a.cfgs, a.summaries, pinned

    assert forward_violations(Fake, e)


def test_entry_parameters_default_to_any_primitive():
    a = analysis("programs", "sql", backward=False)
    assert a.forward.block_in[("run_sql", 0)].get(Var("run_sql", "mode")) == ANY_PRIM


def test_state_dump_is_json_ready():
    import json
    dump = analysis("programs", "sql", backward=False).forward.to_json()
    assert json.loads(json.dumps(dump)) == dump
    first = dump["run_sql@B0.0"]
    assert first["state"] == {"mode": ["BOOL", "FLOAT", "INT", "NONE", "STR"]}
