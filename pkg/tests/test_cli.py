import json
import subprocess
import sys

import pytest

from msr.cli import main
from msr.dsl import builtin_source

GOOD = "chart M (x, y)\nomega = d(x)^d(y)\nobservable a = ham(x)\nobservable b = ham(x*y)\ncheck nondegenerate expect true\n"


def write(tmp_path, text, name="s.msr"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_run_pass(tmp_path, capsys):
    assert main(["run", write(tmp_path, GOOD)]) == 0
    out = capsys.readouterr().out
    assert "[PASS] check nondegenerate expect true -> true" in out


def test_run_fail_exit_one(tmp_path, capsys):
    assert main(["run", write(tmp_path, GOOD.replace("expect true", "expect false"))]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_parse_error_exit_two(tmp_path, capsys):
    path = write(tmp_path, "chart M (x, y)\nomega n=2 = d(x)^d(y)\n")
    assert main(["run", path]) == 2
    err = capsys.readouterr().err
    assert f"{path}:2:1: degree mismatch" in err


def test_engine_error_exit_two(tmp_path, capsys):
    assert main(["run", write(tmp_path, GOOD + "jacobi arity=9\n")]) == 2
    assert "[ERROR]" in capsys.readouterr().out


def test_missing_file(capsys):
    assert main(["run", "/nonexistent/x.msr"]) == 2


def test_json_schema(tmp_path, capsys):
    assert main(["run", write(tmp_path, GOOD), "--json", "--order", "lex"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1
    assert doc["summary"] == {"queries": 1, "passed": 1, "failed": 0, "errors": 0}
    rec = doc["results"][0]
    assert {"index", "line", "query", "value", "expect", "pass", "details", "time_ms"} <= set(rec)


def test_builtin_list_source_and_run(capsys):
    assert main(["builtin", "--list"]) == 0
    assert "cross2d" in capsys.readouterr().out.split()
    assert main(["builtin", "cross2d", "--source"]) == 0
    assert capsys.readouterr().out == builtin_source("cross2d")
    assert main(["builtin", "cross2d"]) == 0
    assert "{1, x*y}" in capsys.readouterr().out
    assert main(["builtin", "unknown"]) == 2
    assert "available:" in capsys.readouterr().err


def test_check_jacobi(tmp_path, capsys):
    path = write(tmp_path, GOOD)
    assert main(["check-jacobi", path, "--arity", "3"]) == 0
    assert "holds" in capsys.readouterr().out
    assert main(["check-jacobi", path, "--arity", "3", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["jacobi"]["holds"] is True
    assert main(["check-jacobi", path, "--arity", "4"]) == 2
    assert main(["check-jacobi", write(tmp_path, "chart M (x)\n", "e.msr"), "--arity", "1"]) == 2


def test_argparse_usage_errors():
    with pytest.raises(SystemExit):
        main(["run"])
    with pytest.raises(SystemExit):
        main(["run", "x.msr", "--order", "lexdeg"])


def test_console_script_deterministic():
    cmd = [sys.executable, "-m", "msr.cli", "builtin", "cross2d", "--json"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    strip = lambda s: [{k: v for k, v in r.items() if k != "time_ms"} for r in json.loads(s)["results"]]
    assert strip(a) == strip(b)
