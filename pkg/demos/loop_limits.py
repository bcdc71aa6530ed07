"""
Where refutation stops: loops
=============================

Backward queries unroll a loop twice, then forget everything the body may
write and continue before the loop. That keeps refutation sound for any
iteration count, but it cannot prove that a body runs at least once.
"""

from pathlib import Path

from pathlens.driver import run_paths

CORPUS = Path(__file__).resolve().parents[1] / "corpus"

# ``item`` starts as None and becomes an Item inside a loop that always runs
# (n is 3). The candidate stays: no finite unrolling rules out zero passes.
print((CORPUS / "programs" / "for_loop.py").read_text())
print(run_paths([CORPUS / "programs" / "for_loop.py"], "main").to_text())

# %%
# The same shape with a heap field. ``points.item`` is only None when the
# filling loop never ran, and then the normalizing loop never runs either.
# Relating the two loop counts needs an induction fact, so the candidate is
# reported in both modes.

fp = CORPUS / "programs" / "float_points.py"
for backward in (False, True):
    r = run_paths([fp], "benchmark", backward=backward)
    mode = "full" if backward else "forward only"
    print(f"{mode:12s}", [(c.variable, c.type, c.status) for c in r.candidates])

# %%
# An explicit guard after the loop is enough. In ``last_value`` the access
# sits behind ``if i == 0: return -1``; zero passes leave ``i == 0``, and any
# pass overwrites ``cur`` with a Node, so the query is refuted.
print(run_paths([CORPUS / "programs" / "loop.py"], "main").to_text())
