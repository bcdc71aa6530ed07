import pytest

import wpcheck
from conftest import analysis, analyze_text, entries
from pathlens import ir
from pathlens.backward import (
    BackwardTask, BudgetExceeded, Budgets, Refuted, WitnessFound, make_initial_query, wp_step,
)
from pathlens.constraints import (
    TRUE, Conjunct, Query, SymbolFactory, Truth, VarKey, const, eq, is_refuted, pretty,
)
from pathlens.driver import refute
from pathlens.forward import INT, NONE, class_type
from symbolic import find_model

CREATE, SELECT = class_type("Create"), class_type("Select")


def query(var, typ, fn="main"):
    return make_initial_query(fn, var, typ)


def only(q: Query) -> Conjunct:
    assert len(q) == 1
    return q.conjuncts[0]


# -- make_initial_query --------------------------------------------------------


def test_initial_query_binds_receiver():
    c = query("sql", CREATE, "run_sql")
    [(k, s)] = c.vars
    assert k == VarKey(0, "run_sql", "sql")
    assert c.fields == ()
    assert c.pure == (eq(s, const(CREATE)),)
    assert pretty(c) == f"{k}↦{s} ∧ {s}==Create"


@pytest.mark.parametrize("typ", [INT, NONE])
def test_initial_query_other_types(typ):
    c = query("x", typ)
    [(_, s)] = c.vars
    assert c.pure == (eq(s, const(typ)),)
    assert not is_refuted(c)


# -- single rules --------------------------------------------------------------


def test_new_refutes_other_class():
    c = query("sql", CREATE)
    q = wp_step(ir.New("sql", "Select"), c)
    assert all(is_refuted(x) for x in q)


def test_new_same_class_survives():
    c = query("sql", SELECT)
    pre = only(wp_step(ir.New("sql", "Select"), c))
    assert pre.vars == ()
    assert not is_refuted(pre)


def test_unrelated_statement_is_skipped():
    c = query("sql", CREATE)
    assert only(wp_step(ir.ConstAssign("x", 1), c)) is c


def test_mode_select_branch():
    # $t2 = mode == $t3 ; $t3 = 1, with the branch taken on $t2
    symbols = SymbolFactory()
    t = symbols.fresh("t2")
    c = Conjunct.make({VarKey(0, "run_sql", "$t2"): t}, {}, [eq(Truth(t), TRUE)])
    c = only(wp_step(ir.Binop("$t2", "mode", "==", "$t3"), c, "run_sql", symbols=symbols))
    c = only(wp_step(ir.ConstAssign("$t3", 1), c, "run_sql", symbols=symbols))
    assert [k.name for k, _ in c.vars] == ["mode"]
    [(_, m)] = c.vars
    assert find_model(c.pure, fixed={m: 1}) is not None
    for other in (0, 2, None, "a"):
        assert find_model(c.pure, fixed={m: other}) is None


def test_alias_moves_atom():
    c = query("x", INT)
    [(_, s)] = c.vars
    pre = only(wp_step(ir.Alias("x", "y"), c))
    assert pre.vars == ((VarKey(0, "main", "y"), s),)


def test_attr_read_adds_field_atom():
    c = query("x", NONE)
    [(_, s)] = c.vars
    pre = only(wp_step(ir.AttrRead("x", "o", "f"), c))
    [(ko, b)] = pre.vars
    assert ko.name == "o"
    assert pre.fields == (((b, "f"), s),)


def test_attr_write_forks_on_alias():
    # o.f = y  before  p.f ↦ v: either o and p alias or they don't
    symbols = SymbolFactory()
    p, v = symbols.fresh("p"), symbols.fresh("v")
    c = Conjunct.make({VarKey(0, "main", "p"): p}, {(p, "f"): v}, [eq(v, const(NONE))])
    q = wp_step(ir.AttrWrite("o", "f", "y"), c, symbols=symbols)
    assert len(q) == 2


def test_new_with_aliased_field_base():
    # the field base equals the new object only through a pure fact
    symbols = SymbolFactory()
    x, b, v = symbols.fresh("x"), symbols.fresh("b"), symbols.fresh("v")
    c = Conjunct.make({VarKey(0, "main", "x"): x}, {(b, "f"): v}, [eq(x, b)])
    q = wp_step(ir.New("x", "A"), c, symbols=symbols)
    assert any(x_.fields == () for x_ in q if not is_refuted(x_))


# -- randomized Hoare soundness --------------------------------------------------


def test_wp_soundness_sample():
    t = wpcheck.check(500, seed=11)
    assert t.post_held > 50
    assert t.violations == []


def test_harness_catches_broken_rule(monkeypatch):
    """Aliases that leave the post-state atom in place must be caught."""
    real = wp_step

    def broken(stmt, c, *args, **kw):
        if isinstance(stmt, ir.Alias):
            return Query((c,))
        return real(stmt, c, *args, **kw)

    monkeypatch.setattr(wpcheck, "wp_step", broken)
    t = wpcheck.check(300, seed=5)
    assert t.violations


# -- traversal -------------------------------------------------------------------

ADD_WHERE = ir.ProgramPoint("run_sql", 4, 0)


@pytest.fixture(scope="module")
def sql_task():
    return analysis("programs", "sql").task


def test_sql_create_query_refuted(sql_task):
    r = sql_task.traverse(query("sql", CREATE, "run_sql"), ADD_WHERE)
    assert isinstance(r, Refuted)


def test_sql_select_query_witness(sql_task):
    r = sql_task.traverse(query("sql", SELECT, "run_sql"), ADD_WHERE)
    assert isinstance(r, WitnessFound)
    assert r.note == "entry"
    assert not is_refuted(r.conjunct)


def test_trivial_query_at_entry():
    a = analyze_text("def main():\n    return 0\n")
    r = a.task.traverse(Conjunct(), ir.ProgramPoint("main", 0, 0))
    assert isinstance(r, WitnessFound)


def test_log_sees_every_step(sql_task):
    seen = []
    sql_task.traverse(query("sql", CREATE, "run_sql"), ADD_WHERE, log=lambda p, frame, c: seen.append(p))
    assert seen and all(p.fn == "run_sql" for p in seen)


def _with_budgets(task, **kw):
    return BackwardTask(task.program, task.cfgs, task.callgraph, task.summaries, Budgets(**kw))


def test_step_budget(sql_task):
    t = _with_budgets(sql_task, max_steps=1)
    r = t.traverse(query("sql", CREATE, "run_sql"), ADD_WHERE)
    assert isinstance(r, BudgetExceeded) and r.reason == "max_steps"


def test_stack_budget():
    [c] = [c for c in analysis("bugs", "deep_chain").report.candidates if c.kind == "attribute-error"]
    assert isinstance(c.result, BudgetExceeded) and c.result.reason == "max_stack"


def test_conjunct_budget():
    a = analysis("programs", "chaos")
    c = a.report.candidates[0]
    r = refute(_with_budgets(a.task, max_conjuncts=1), c)
    assert isinstance(r, BudgetExceeded) and r.reason == "max_conjuncts"


# -- skipping never changes a verdict -------------------------------------------------


def _verdicts(a):
    return [(c.id, c.status, type(c.result).__name__) for c in a.report.candidates]


@pytest.mark.parametrize("section,name", [
    (s, e["name"]) for s in ("programs", "bugs") for e in entries(s) if e["name"] != "richards"
])
def test_skip_equivalence(section, name):
    assert _verdicts(analysis(section, name)) == _verdicts(analysis(section, name, skip=False))


@pytest.mark.slow
def test_skip_equivalence_richards():
    # without skipping, some scheduler queries run out of budget first;
    # every query both modes finish must agree
    on, off = analysis("programs", "richards"), analysis("programs", "richards", skip=False)
    pairs = list(zip(_verdicts(on), _verdicts(off)))
    decided = [(a, b) for a, b in pairs if "budget" not in (a[1], b[1])]
    assert len(decided) >= 11
    assert all(a == b for a, b in decided)
