import json
import re

import jsonschema
import pytest

from conftest import ROOT, analysis, analyze_text, entries
from pathlens import ir
from pathlens.driver import (
    ATTRIBUTE_ERROR, BUDGET, CONFIRMED, REFUTED, AnalyzerConfig, extract_candidates, run_paths, run_text,
)
from pathlens.forward import analyze
from pathlens.frontend import SourceProgram, load_program
from pathlens.interp import OracleTimeout, interpret
from pathlens.summaries import SummaryFormatError, default_summaries, load_summaries, parse_summaries

ALL = [(s, e["name"]) for s in ("programs", "bugs") for e in entries(s)]
FAST = [x for x in ALL if x[1] != "richards"]


def report_schema() -> dict:
    text = (ROOT / "docs" / "report-schema.md").read_text()
    block = re.search(r"```json schema\n(.*?)```", text, re.S).group(1)
    return json.loads(block)


def strip_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timing"}


# -- run ---------------------------------------------------------------------------


def test_sql_both_modes():
    path = ROOT / "corpus" / "programs" / "sql.py"
    full = run_paths([path], "run_sql")
    assert (full.confirmed, full.refuted) == (0, 1)
    fwd = run_paths([path], "run_sql", backward=False)
    assert (fwd.confirmed, fwd.refuted) == (1, 0)
    [c] = fwd.candidates
    assert (c.variable, c.type, c.line) == ("sql", "Create", 24)


def test_empty_program():
    r = run_text("def main():\n    pass\n", "main")
    assert r.candidates == [] and r.refuted == 0


@pytest.mark.parametrize("section,name", ALL)
def test_report_invariants(section, name):
    r = analysis(section, name).report
    attrs = [c for c in r.candidates if c.kind == ATTRIBUTE_ERROR]
    assert r.confirmed + r.refuted + r.budget == len(r.candidates)
    assert all(c.status in (CONFIRMED, REFUTED, BUDGET) for c in r.candidates)
    assert all(c.status == CONFIRMED for c in r.candidates if c.kind != ATTRIBUTE_ERROR)
    assert min(r.forward_ms, r.backward_ms, r.total_ms) >= 0
    assert len({c.key for c in r.candidates}) == len(r.candidates)
    # backward never adds reports
    fwd = analysis(section, name, backward=False).report
    assert [c.key for c in fwd.candidates] == [c.key for c in r.candidates]
    assert r.confirmed <= fwd.confirmed
    assert fwd.confirmed == len(fwd.candidates) >= len(attrs)


@pytest.mark.parametrize("section,name", ALL)
def test_json_report_matches_schema(section, name):
    schema = report_schema()
    jsonschema.validate(analysis(section, name).report.to_json(show_excluded=True), schema)
    jsonschema.validate(analysis(section, name, backward=False).report.to_json(), schema)


def test_schema_example_is_valid():
    text = (ROOT / "docs" / "report-schema.md").read_text()
    example = re.search(r"```json\n(.*?)```", text, re.S).group(1)
    jsonschema.validate(json.loads(example), report_schema())


@pytest.mark.parametrize("section,name", FAST)
def test_deterministic_json(section, name):
    from conftest import entry, path_of
    e = entry(section, name)
    a = run_paths([path_of(e)], e["entry"]).dumps()
    b = run_paths([path_of(e)], e["entry"]).dumps()
    assert strip_timing(json.loads(a)) == strip_timing(json.loads(b))
    assert strip_timing(json.loads(a)) == strip_timing(analysis(section, name).report.to_json())


def test_text_report():
    out = analysis("programs", "sql").report.to_text().splitlines()
    assert out[0].startswith("C1 ")
    assert out[0].endswith("sql.py:24: attribute-error: sql may be Create -> refuted")
    assert out[-1] == "confirmed:0 refuted:1 budget:0"


def test_config_validation():
    with pytest.raises(ValueError):
        AnalyzerConfig(max_stack=0)
    with pytest.raises(ValueError):
        AnalyzerConfig(format="xml")


# -- candidate extraction ----------------------------------------------------------


def _candidates(text, entry="main"):
    prog = load_program(SourceProgram.from_text(text, entry))
    cfgs = ir.build_cfgs(prog)
    res = analyze(prog, entry, cfgs)
    return extract_candidates(res, ir.build_callgraph(prog, cfgs, default_summaries(), res.receivers))


def test_candidate_for_none_receiver():
    src = (
        "class P:\n"
        "    def normalize(self):\n"
        "        return 0\n"
        "def main(k):\n"
        "    p = None\n"
        "    if k:\n"
        "        p = P()\n"
        "    p.normalize()\n"
    )
    cs = [c for c in _candidates(src) if c.kind == ATTRIBUTE_ERROR]
    assert [(c.variable, c.type, c.line) for c in cs] == [("p", "NONE", 8)]


def test_attribute_everywhere_no_candidate():
    src = (
        "class A:\n"
        "    def f(self):\n"
        "        return 1\n"
        "class B:\n"
        "    def f(self):\n"
        "        return 2\n"
        "def main(k):\n"
        "    o = A()\n"
        "    if k:\n"
        "        o = B()\n"
        "    return o.f()\n"
    )
    assert [c for c in _candidates(src) if c.kind == ATTRIBUTE_ERROR] == []


def test_summary_class_attributes_consulted():
    ok = "def main(k):\n    s = str(k)\n    return s.upper()\n"
    bad = "def main(k):\n    s = str(k)\n    return s.no_such()\n"
    assert [c for c in _candidates(ok) if c.kind == ATTRIBUTE_ERROR] == []
    [c] = [c for c in _candidates(bad) if c.kind == ATTRIBUTE_ERROR]
    assert c.type == "STR"


def test_zero_division_is_excluded():
    a = analyze_text("def main(k):\n    d = k - k\n    return 1 // d\n")
    assert a.report.candidates == []
    [x] = a.report.excluded
    assert x.kind == "zero-division" and x.status == "excluded"
    assert "excluded" in a.report.to_json(show_excluded=True)


# -- summaries ---------------------------------------------------------------------


def test_summary_function_line():
    t = parse_summaries("fn len/1 -> INT\n")
    assert t.functions["len"].arity == 1 and t.functions["len"].returns == "INT"


def test_summary_class_round_trip(tmp_path):
    p = tmp_path / "extra.sum"
    p.write_text("# a library class\nclass Conn { close, send -> INT }\nfn connect/1 -> Conn\n")
    table = load_summaries(p)
    assert table.class_attrs("Conn") == {"close": None, "send": "INT"}
    assert table.has_function("len")  # defaults survive
    src = "def main(k):\n    c = connect(k)\n    c.send()\n    return c.recv()\n"
    prog = load_program(SourceProgram.from_text(src, "main"), table)
    cfgs = ir.build_cfgs(prog)
    res = analyze(prog, "main", cfgs, table)
    cs = [c for c in extract_candidates(res) if c.kind == ATTRIBUTE_ERROR]
    assert [(c.variable, c.type) for c in cs] == [("c", "Conn")]


def test_later_summaries_override(tmp_path):
    a, b = tmp_path / "a.sum", tmp_path / "b.sum"
    a.write_text("fn f/1 -> INT\n")
    b.write_text("fn f/1 -> STR\n")
    assert load_summaries(a, b).functions["f"].returns == "STR"


@pytest.mark.parametrize("text,line", [
    ("fn len/1 -> INT\nfn broken\n", 2),
    ("class C { ok, 1bad }\n", 1),
    ("\n\nwhatever\n", 3),
])
def test_malformed_summary(text, line):
    with pytest.raises(SummaryFormatError) as e:
        parse_summaries(text)
    assert e.value.line == line


# -- the concrete interpreter ------------------------------------------------------


@pytest.fixture(scope="module")
def sql_program():
    a = analysis("programs", "sql")
    return a.program, a.cfgs


def test_interpret_select_reaches_add_where(sql_program):
    prog, cfgs = sql_program
    r = interpret(prog, (1,), cfgs=cfgs, record=True)
    assert r.fault is None
    [(_, env, _)] = [s for s in r.stores if s[0] == ir.ProgramPoint("run_sql", 4, 0)]
    assert env["sql"].cls == "Select"


def test_interpret_create_skips_add_where(sql_program):
    prog, cfgs = sql_program
    r = interpret(prog, (0,), cfgs=cfgs)
    assert r.fault is None and r.value == "create"
    assert ir.ProgramPoint("run_sql", 4, 0) not in r.visited


def test_interpret_alias():
    prog = load_program(SourceProgram.from_text("def main():\n    x = 1\n    y = x\n    return y\n", "main"))
    assert interpret(prog).value == 1


def test_interpret_step_budget():
    prog = load_program(SourceProgram.from_text("def main():\n    while True:\n        pass\n", "main"))
    with pytest.raises(OracleTimeout):
        interpret(prog, max_steps=1000)
