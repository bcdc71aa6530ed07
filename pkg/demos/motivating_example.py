"""
Refuting a false positive with a backward query
===============================================

``run_sql`` builds either a ``Create`` or a ``Select`` and calls
``add_where`` only when ``mode == SELECT``. A flow-sensitive forward pass
merges both branches, so it sees ``sql`` as possibly a ``Create`` at the
call and reports a candidate. The backward pass asks whether that can
actually happen and finds no path.
"""

from pathlib import Path

from pathlens.constraints import pretty
from pathlens.driver import AnalyzerConfig, analyze_program, refute
from pathlens.forward import Var
from pathlens.frontend import SourceProgram

SQL = Path(__file__).resolve().parents[1] / "corpus" / "programs" / "sql.py"
source = SourceProgram.from_paths([SQL], "run_sql")

# forward only: one candidate at the add_where call
forward = analyze_program(source, AnalyzerConfig(entry="run_sql", backward=False))
print(forward.report.to_text())

# the abstract value of sql just before the call
state = forward.forward.block_states("run_sql", 4)[0]
print("sql before add_where:", sorted(map(str, state.get(Var("run_sql", "sql")))))

# full mode refutes it
full = analyze_program(source, AnalyzerConfig(entry="run_sql"))
print(full.report.to_text())

# %%
# The search, step by step. Each line is a program point and the conjunct
# that must hold there. The ``Select`` branch adds ``sql == Select``, which
# contradicts the query; the ``Create`` branch needs ``mode == 0`` and
# ``mode == 1`` at once.

c = full.report.candidate("C1")
result = refute(full.task, c, log=lambda pp, frame, conj: print(f"  {pp}  {pretty(conj)}"))
print(type(result).__name__, "after", result.steps, "steps")
