import json
import subprocess
import sys

import pytest

from jrorbit.cli import main, run

FL_SPEC = {"command": "fl-check", "params": {"p": 3, "d": -1, "m": 1, "charpoly": ["-1", "1"], "moments": ["9"]}}


def _run_main(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    return code, capsys.readouterr().out


def test_fl_check_example(capsys, monkeypatch):
    code, out = _run_main(["run", "--spec", "-"], capsys, json.dumps(FL_SPEC), monkeypatch)
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "PASS" and rep["value0"] == "1" and rep["orbU"] == 1


def test_arch_example(capsys):
    code, out = _run_main(["arch", "--params", '{"xi": -1, "s": 0, "deriv": true}'], capsys)
    rep = json.loads(out)
    assert code == 0
    assert abs(float(rep["value"]) + 0.0030131563725204981) < 1e-15
    assert float(rep["err"]) < 1e-10 and "Ei" in rep["formula"]


def test_flags_feed_parameters(capsys):
    code, out = _run_main(["arch", "--xi", "2", "--s", "0"], capsys)
    assert code == 0 and abs(float(json.loads(out)["value"]) - 0.0018674427317079893) < 1e-15


def test_malformed_json_exit_two(capsys, monkeypatch):
    code, out = _run_main(["run", "--spec", "-"], capsys, "{not json", monkeypatch)
    assert code == 2 and json.loads(out)["error"] == "schema"


@pytest.mark.parametrize(
    "spec",
    [
        {"command": "nope", "params": {}},
        {"command": "fl-check", "params": {"p": 3, "d": -1, "charpoly": ["-1", "1"]}},
        {"command": "fl-check", "params": {"p": 3, "d": -1, "charpoly": ["-1", "1"], "moments": [0.5]}},
        {"command": "fl-check", "params": []},
        {"command": "arch", "params": {"xi": 0}},
    ],
)
def test_schema_errors(spec):
    code, rep = run(spec)
    assert code == 2 and rep["error"] == "schema"


def test_precondition_exit_three():
    spec = {"command": "fl-check", "params": {"p": 5, "d": -1, "charpoly": ["-1", "1"], "moments": ["1"]}}
    code, rep = run(spec)
    assert code == 3 and rep["error"] == "invalid_context"
    spec = {"command": "fl-check", "params": {"p": 3, "d": -1, "charpoly": ["1/3", "1"], "moments": ["1"]}}
    code, rep = run(spec)
    assert code == 3


def test_fail_verdict_exit_one(monkeypatch):
    import jrorbit.cli as cli

    def fake(params, opts):
        return {"verdict": "FAIL"}

    monkeypatch.setitem(cli.HANDLERS, "tate-fe", fake)
    assert run({"command": "tate-fe", "params": {}})[0] == 1


def test_reruns_are_byte_identical(capsys):
    argv = ["fl-sweep", "--params", '{"p": [3], "m": [1, 2], "count": 3, "seed": 4, "max_valuation": 1}']
    code1, out1 = _run_main(argv, capsys)
    code2, out2 = _run_main(argv, capsys)
    assert code1 == code2 == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["seed"] == 4 and rep["failures"] == 0


def test_csv_output(capsys):
    code, out = _run_main(["fl-sweep", "--m", "1", "--p", "3", "--max-valuation", "1", "--format", "csv"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].split(",")[-1] == "verdict"
    assert all(line.endswith("PASS") for line in lines[1:])


def test_jobs_env_override(capsys, monkeypatch):
    monkeypatch.setenv("JR_JOBS", "2")
    argv = ["fl-sweep", "--params", '{"p": [3], "m": [2], "count": 2, "seed": 1}']
    code, out = _run_main(argv, capsys)
    monkeypatch.delenv("JR_JOBS")
    code1, out1 = _run_main(argv, capsys)
    assert code == code1 == 0 and out == out1


def test_weil_and_reduce_commands():
    code, rep = run({"command": "weil-check", "params": {"p": 3, "d": 2, "gram": [["1"]], "samples": 2}})
    assert code == 0 and rep["verdict"] == "PASS"
    g = [[{"a": "-313/569", "b": "-175/569"}, {"a": "343/569", "b": "1617/569"}],
         [{"a": "49/1138", "b": "231/1138"}, {"a": "-215/569", "b": "287/569"}]]
    code, rep = run({"command": "reduce", "params": {"p": 3, "d": -1, "gprime": g, "orbital": True}})
    assert code == 0 and rep["orbital"]["equal"] and all(rep["identities"].values())


def test_orb_commands():
    code, rep = run({"command": "orb-u", "params": {"p": 3, "d": -1, "gram": [["9"]], "g": [["-1"]], "u": ["1"]}})
    assert code == 0 and rep["orbU"] == 1
    code, rep = run({"command": "orb-gl", "params": {"p": 3, "d": -1, "gamma": [["1"]], "u1": ["1"], "u2": ["9"]}})
    assert code == 0 and rep["value0"] == "1"


def test_tate_fe_command():
    code, rep = run({"command": "tate-fe", "params": {"field": "Q(sqrt-3)", "s": 0.3}})
    assert code == 0 and rep["verdict"] == "PASS"


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "jrorbit", "run", "--spec", "-"], input=json.dumps(FL_SPEC),
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and json.loads(out.stdout)["verdict"] == "PASS"
