import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from cfract.cli import run

SCHEMA = json.loads(resources.files("cfract").joinpath("schema/record.schema.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def record(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    rec = json.loads(out)
    jsonschema.validate(rec, SCHEMA)
    return rec


def _no_json_numbers(value):
    if isinstance(value, dict):
        return all(_no_json_numbers(v) for v in value.values())
    if isinstance(value, list):
        return all(_no_json_numbers(v) for v in value)
    return not isinstance(value, (int, float)) or isinstance(value, bool)


def test_expand_golden():
    rec = record("expand", "21945")
    assert rec["result"]["period"] == "10"
    last = rec["result"]["convergents"][-1]
    assert (last["A"], last["B"]) == ("3004586089", "20282284")


def test_expand_7_partials():
    assert record("expand", "7", "--format", "json")["result"]["partials"] == ["1", "1", "1", "4"]


def test_square_is_invalid_input():
    code, out, err = call("expand", "25")
    assert code == 2 and out == "" and "square" in err


@pytest.mark.parametrize("argv", [["bogus", "3"], ["expand", "abc"], ["expand"], ["verify"],
                                  ["hr", "10", "--precision", "32"], ["hr", "10", "--method", "nope"],
                                  ["hr", "10", "--series-terms", "0"]])
def test_usage_errors(argv):
    assert call(*argv)[0] == 64


def test_small_n_is_invalid():
    assert call("expand", "1")[0] == 2


def test_factor_golden():
    rec = record("factor", "21945")
    assert [p for p, _ in rec["result"]["factors"]] == ["3", "5", "7", "11", "19"]
    assert "midpoint" in [tag for _, tag in rec["result"]["method_trace"]]


def test_factor_methods():
    for m in ("walk", "infra", "auto"):
        rec = record("factor", "21945", "--method", m)
        assert [p for p, _ in rec["result"]["factors"]] == ["3", "5", "7", "11", "19"]


def test_two_squares():
    res = record("two-squares", "13")["result"]
    assert (res["x"], res["y"]) == ("3", "2")
    assert call("two-squares", "21945")[0] == 1


def test_hr_methods():
    sine = record("hr", "10")["result"]
    fast = record("hr", "10", "--method", "fast", "--series-terms", "200")["result"]
    assert abs(float(sine["value"]) - float(fast["value"])) < 1e-12
    assert call("hr", "12")[0] == 2


def test_forms_and_bench():
    res = record("forms", "7")["result"]
    assert res["delta"] == ["-3", "2", "-3", "1", "-3"]
    assert res["unit"] == {"A": "8", "B": "3", "norm": "1", "is_cube": False}
    rec = record("bench", "21945")
    assert {"expand", "factor", "total"} <= set(rec["timings"])


def test_verify_small():
    rec = record("verify", "--upto", "60")
    assert rec["result"]["passed"] is True
    assert rec["n"] is None


@pytest.mark.parametrize("argv", [["expand", "94"], ["forms", "21945"], ["factor", "1001"], ["hr", "21945"],
                                  ["two-squares", "29"], ["verify", "--upto", "10"]])
def test_integers_are_strings(argv):
    rec = record(*argv)
    assert _no_json_numbers(rec["result"])


def test_csv_and_text_formats():
    code, out, _ = call("expand", "7", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "schema_version,n,command,field,value"
    assert "1,7,expand,period,4" in lines
    code, out, _ = call("two-squares", "13", "--format", "text")
    assert code == 0 and "x: 3" in out


def test_warm_cache_is_byte_identical(tmp_path):
    path = tmp_path / "cache.jsonl"
    cold = record("hr", "21945", "--cache", str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == 1
    entry = json.loads(lines[0])
    assert entry["n"] == "21945" and entry["tau"] == 10 and entry["unit_A_digits"] == "3004586089"
    warm = record("hr", "21945", "--cache", str(path))
    assert json.dumps(cold["result"], sort_keys=True) == json.dumps(warm["result"], sort_keys=True)
    assert len(path.read_text().splitlines()) == 1  # hit: nothing appended


def test_cache_env_and_flag_precedence(tmp_path, monkeypatch):
    env_path, flag_path = tmp_path / "env.jsonl", tmp_path / "flag.jsonl"
    monkeypatch.setenv("CFRACT_CACHE", str(env_path))
    record("hr", "10")
    assert env_path.exists()
    record("hr", "11", "--cache", str(flag_path))
    assert flag_path.exists() and "\"11\"" not in env_path.read_text()


def test_corrupt_cache_lines_skipped(tmp_path, caplog):
    path = tmp_path / "cache.jsonl"
    record("hr", "10", "--cache", str(path))
    with open(path, "a") as fh:
        fh.write("{not json\n[1, 2]\n")
    before = record("hr", "10", "--cache", str(path))
    assert "corrupt" in caplog.text
    assert before["result"]["value"].startswith("3.63689291846413")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cfract", "expand", "13"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["period"] == "5"
    proc = subprocess.run([sys.executable, "-m", "cfract", "expand", "16"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr
