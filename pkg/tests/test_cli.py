import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import CORPUS
from pathlens.cli import EXIT_CLEAN, EXIT_CONFIRMED, EXIT_FAILURE, infer_entry, main
from test_driver import report_schema

SQL = str(CORPUS / "programs" / "sql.py")
FLOAT = str(CORPUS / "programs" / "float_points.py")


def run(capsys, *argv):
    code = main(["analyze", *argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_sql_clean(capsys):
    code, out, _ = run(capsys, SQL, "--entry", "run_sql")
    assert code == EXIT_CLEAN
    assert out.splitlines()[-1] == "confirmed:0 refuted:1 budget:0"


def test_sql_forward_only(capsys):
    code, out, _ = run(capsys, SQL, "--no-backward")
    assert code == EXIT_CONFIRMED
    assert "confirmed:1 " in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "missing.py")
    assert code == EXIT_FAILURE
    assert "missing.py" in err


def test_bad_flag_value(capsys):
    assert run(capsys, SQL, "--max-stack", "0")[0] == EXIT_FAILURE
    assert run(capsys, SQL, "--format", "xml")[0] == EXIT_FAILURE


def test_no_command(capsys):
    assert main([]) == EXIT_FAILURE


def test_subset_error(tmp_path, capsys):
    p = tmp_path / "bad.py"
    p.write_text("def main():\n    return [1, 2]\n")
    code, _, err = run(capsys, str(p))
    assert code == EXIT_FAILURE and "bad.py" in err


def test_json_output(capsys):
    code, out, _ = run(capsys, SQL, "--entry", "run_sql", "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, report_schema())
    assert doc["totals"] == {"confirmed": 0, "refuted": 1, "budget": 0}
    assert code == EXIT_CLEAN


def test_exit_code_follows_confirmed(capsys):
    code, out, _ = run(capsys, FLOAT, "--format", "json")
    assert json.loads(out)["totals"]["confirmed"] == 1
    assert code == EXIT_CONFIRMED


def test_explain_refuted(capsys):
    code, out, _ = run(capsys, SQL, "--entry", "run_sql", "--explain", "C1")
    lines = out.splitlines()
    assert lines[0].startswith("C1: sql may be Create")
    assert lines[-1].startswith("refuted after")
    assert any("sql↦" in line for line in lines)


def test_explain_witness(capsys):
    _, out, _ = run(capsys, FLOAT, "--explain", "C1")
    assert "witness (entry)" in out and "path: " in out


def test_explain_unknown(capsys):
    assert run(capsys, SQL, "--explain", "C9")[0] == EXIT_FAILURE


def test_dumps_go_to_stderr(capsys):
    _, out, err = run(capsys, SQL, "--dump-cfg", "--format", "json")
    json.loads(out)
    assert err.startswith("digraph")
    _, out, err = run(capsys, SQL, "--dump-states")
    assert "run_sql" in json.dumps(json.loads(err))


def test_summary_env_path(tmp_path, monkeypatch, capsys):
    prog = tmp_path / "p.py"
    prog.write_text("def main(k):\n    c = connect(k)\n    return c.send()\n")
    assert run(capsys, str(prog))[0] == EXIT_FAILURE  # connect is unknown
    lib = tmp_path / "lib"
    lib.mkdir()
    (lib / "net.summary").write_text("class Conn { send -> INT }\nfn connect/1 -> Conn\n")
    monkeypatch.setenv("PATHLENS_SUMMARY_PATH", str(lib))
    assert run(capsys, str(prog))[0] == EXIT_CLEAN


def test_show_excluded(tmp_path, capsys):
    p = tmp_path / "z.py"
    p.write_text("def main(k):\n    d = k - k\n    return 1 // d\n")
    code, out, _ = run(capsys, str(p))
    assert code == EXIT_CLEAN and "zero" not in out
    code, out, _ = run(capsys, str(p), "--show-excluded")
    assert code == EXIT_CLEAN and "X1" in out and "may be zero" in out


def test_infer_entry(tmp_path):
    p = tmp_path / "a.py"
    p.write_text("def helper():\n    return 1\ndef go():\n    return helper()\n")
    assert infer_entry([p]) == "go"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pathlens", "analyze", SQL, "--entry", "run_sql"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "refuted:1" in r.stdout


@pytest.mark.parametrize("flag", ["--unroll", "--max-steps", "--k-prim"])
def test_numeric_flags(capsys, flag):
    assert run(capsys, SQL, "--entry", "run_sql", flag, "500")[0] == EXIT_CLEAN


def test_budget_counts_as_reported(capsys):
    code, out, _ = run(capsys, SQL, "--entry", "run_sql", "--max-steps", "5")
    assert code == EXIT_CONFIRMED
    assert "-> budget (max_steps)" in out
