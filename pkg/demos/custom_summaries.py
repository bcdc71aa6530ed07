"""
Library calls and the command line
==================================

Code outside the program is described by summaries. Without one, a call to
``connect`` is an error; with one, the returned object's attributes are
checked like any class.
"""

import os
import subprocess
import sys
import tempfile
from pathlib import Path

PROGRAM = """\
def main(k):
    c = connect(k)
    c.send()
    if k > 2:
        return c.recv()
    return 0
"""

SUMMARY = """\
# a socket-like handle
fn connect/1 -> Conn
class Conn { send -> INT, close }
"""


def analyze(*args, env=None):
    cmd = [sys.executable, "-m", "pathlens", "analyze", *args]
    r = subprocess.run(cmd, capture_output=True, text=True, env=env)
    print("$ pathlens analyze", " ".join(Path(a).name if a.endswith((".py", ".summary")) else a for a in args))
    print((r.stdout + r.stderr).rstrip())
    print("exit", r.returncode, "\n")


with tempfile.TemporaryDirectory() as tmp:
    prog = Path(tmp) / "client.py"
    prog.write_text(PROGRAM)
    summary = Path(tmp) / "net.summary"
    summary.write_text(SUMMARY)

    analyze(str(prog))  # exit 2: connect is unknown
    analyze(str(prog), "--summaries", str(summary))  # exit 1: Conn has no recv

    # the same summaries, found through the environment
    env = dict(os.environ, PATHLENS_SUMMARY_PATH=tmp)
    analyze(str(prog), "--format", "json", env=env)
