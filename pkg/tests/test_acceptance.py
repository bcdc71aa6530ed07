"""Acceptance criteria, one PASS/FAIL line each.

Run through pytest (the lines appear in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import time

import pytest

import diamonds
import wpcheck
from conftest import analysis, entries, entry, path_of
from oracles import attribute_faults, forward_violations
from pathlens.driver import ATTRIBUTE_ERROR, BUDGET, CONFIRMED, run_paths

# pinned tolerances
SQL_SECONDS = 5.0
BRANCH_MAX_LINES = 12  # non-blank lines
WP_PROGRAMS = 10_000
WP_SECONDS = 300.0
WP_SEED = 2026
MIN_BUG_PROGRAMS = 20
TIMING_SECONDS = 60.0
TIMING_LINES = (400, 500)
TIMING_MIN_QUERIES = 20
SLOPE_FACTOR = 2.0

RESULTS: list = []


def record(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def attr_candidates(report):
    return [c for c in report.candidates if c.kind == ATTRIBUTE_ERROR]


def fresh(section, name, **options):
    e = entry(section, name)
    return run_paths([path_of(e)], e["entry"], **options)


def test_sql_ablation():
    t = time.perf_counter()
    fwd = fresh("programs", "sql", backward=False)
    full = fresh("programs", "sql")
    elapsed = time.perf_counter() - t
    cands = attr_candidates(fwd)
    at_add_where = [(c.variable, c.line) for c in cands] == [("sql", 24)]
    ok = at_add_where and (full.confirmed, full.refuted) == (0, 1) and elapsed < SQL_SECONDS
    record("sql ablation", ok,
           f"forward-only {len(cands)} candidate(s) {[(c.variable, c.type, c.line) for c in cands]}; "
           f"full confirmed {full.confirmed} refuted {full.refuted}; {elapsed:.2f}s (< {SQL_SECONDS:g}s)")


def test_branch_refutation():
    lines = sum(1 for line in path_of(entry("programs", "branch")).read_text().splitlines() if line.strip())
    fwd = fresh("programs", "branch", backward=False)
    full = fresh("programs", "branch")
    n = len(attr_candidates(fwd))
    ok = n == 1 and (full.confirmed, full.refuted) == (0, 1) and lines <= BRANCH_MAX_LINES
    record("branch refutation", ok,
           f"{lines} non-blank lines; forward-only {n}; full confirmed {full.confirmed} refuted {full.refuted}")


def test_normalize_not_refuted():
    def normalize_status(report):
        return [c.status for c in attr_candidates(report) if c.variable == "p" and c.type == "NONE"]

    fwd = normalize_status(fresh("programs", "float_points", backward=False))
    full = normalize_status(fresh("programs", "float_points"))
    ok = fwd == [CONFIRMED] and full == [CONFIRMED]
    record("loop-guarded p.normalize() with NONE", ok, f"forward-only {fwd}; full {full}")


def test_loop_false_positive():
    full = fresh("programs", "for_loop")
    ok = full.confirmed == 1 and full.refuted == 0
    record("loop-body false positive", ok, f"full confirmed {full.confirmed} refuted {full.refuted}")


def test_wp_soundness():
    t = time.perf_counter()
    tally = wpcheck.check(WP_PROGRAMS, seed=WP_SEED)
    elapsed = time.perf_counter() - t
    ok = tally.programs >= WP_PROGRAMS and not tally.violations and elapsed < WP_SECONDS
    record("backward Hoare soundness", ok,
           f"{tally.programs} programs, {tally.runs} runs, {tally.post_held} with post holding, "
           f"{len(tally.violations)} violations; {elapsed:.1f}s (< {WP_SECONDS:g}s)")


CORPUS = [("programs", e["name"]) for e in entries("programs")] + [("bugs", e["name"]) for e in entries("bugs")]


def test_forward_soundness():
    bad = {}
    for section, name in CORPUS:
        v = forward_violations(analysis(section, name, backward=False), entry(section, name))
        if v:
            bad[name] = v[:3]
    n_programs = len(entries("programs"))
    record("forward soundness", not bad,
           f"{len(CORPUS)} programs ({n_programs} benchmark ports, {len(CORPUS) - n_programs} bug programs); "
           f"violations in {sorted(bad) or 'none'}")


def test_no_lost_bugs():
    bugs = entries("bugs")
    lost, found = [], 0
    for e in bugs:
        faults = attribute_faults(analysis("bugs", e["name"]), e)
        if not faults:
            lost.append((e["name"], "oracle never faults"))
        by_key = {c.key: c for c in analysis("bugs", e["name"]).report.candidates}
        for f in faults:
            c = by_key.get(f)
            if c is None or c.status not in (CONFIRMED, BUDGET):
                lost.append((e["name"], c.status if c else "absent"))
            else:
                found += 1
    ok = len(bugs) >= MIN_BUG_PROGRAMS and not lost
    record("no lost bugs", ok, f"{len(bugs)} bug programs, {found} reachable errors reported, lost {lost or 'none'}")


@pytest.mark.slow
def test_timing():
    e = entry("programs", "richards")
    lines = len(path_of(e).read_text().splitlines())
    t = time.perf_counter()
    r = run_paths([path_of(e)], e["entry"])
    elapsed = time.perf_counter() - t
    queries = len(attr_candidates(r))
    s = diamonds.scaling()
    ok = (TIMING_LINES[0] <= lines <= TIMING_LINES[1] and queries >= TIMING_MIN_QUERIES
          and elapsed < TIMING_SECONDS and s["worst"] <= SLOPE_FACTOR * s["fit"])
    ms = ", ".join(f"{q}q {t:.1f}ms" for q, t in zip(s["queries"], s["ms"]))
    record("timing", ok,
           f"richards {lines} lines, {queries} queries, {elapsed:.1f}s (< {TIMING_SECONDS:g}s), "
           f"{r.confirmed}/{r.refuted}/{r.budget} confirmed/refuted/budget; diamonds {ms}, "
           f"worst slope {s['worst']:.2f} vs fit {s['fit']:.2f} ms/query (<= {SLOPE_FACTOR:g}x)")


@pytest.mark.slow
def test_determinism():
    def snapshot():
        out = {}
        for section, name in CORPUS:
            doc = json.loads(fresh(section, name).dumps(show_excluded=True))
            doc.pop("timing")
            out[name] = json.dumps(doc, sort_keys=True)
        return out

    first, second = snapshot(), snapshot()
    differ = sorted(k for k in first if first[k] != second[k])
    record("determinism", not differ, f"{len(first)} reports compared, differing: {differ or 'none'}")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
