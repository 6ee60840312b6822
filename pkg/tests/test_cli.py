import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from skewcapelli.cli import main


def schema(name):
    return json.loads(resources.files("skewcapelli").joinpath(f"schemas/{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, command, *argv):
    code, out, _ = run(capsys, command, *argv, "--format", "json")
    payload = json.loads(out)
    jsonschema.validate(payload, schema(command))
    return code, payload


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2")
    assert code == 0
    assert "PASS" in out
    assert "Pf(Phi(u)) = x[1,2] d[1,2] + u^2 + 1/2" in out


def test_verify_json(capsys):
    code, payload = run_json(capsys, "verify", "--n", "3", "--backend", "forms")
    assert code == 0
    assert payload["n"] == 3 and payload["pass"] is True and payload["delta_term_count"] == 0


@pytest.mark.parametrize("argv", [
    ["verify", "--n", "0"],
    ["verify", "--n", "7"],
    ["verify", "--n", "2", "--backend", "commutative"],
    ["gamma", "--n", "3", "--k", "2"],
    ["hermite", "--m", "-1"],
    ["symbol", "--n", "0"],
    ["suite", "--only", "no.such.property"],
    ["bench", "--n-min", "3", "--n-max", "2"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error:" in err


def test_max_dim_overrides_guard(capsys):
    code, _, _ = run(capsys, "verify", "--n", "5", "--backend", "full", "--max-dim", "10")
    assert code == 0


def test_gamma(capsys):
    code, out, _ = run(capsys, "gamma", "--n", "4", "--k", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "Gamma_1 for n = 4: 6 term(s)"
    assert lines[1:] == [f"  x[{i},{j}] d[{i},{j}]" for i in range(1, 5) for j in range(i + 1, 5)]
    code, payload = run_json(capsys, "gamma", "--n", "4", "--k", "2")
    assert payload["term_count"] == 9


def test_hermite(capsys):
    code, out, _ = run(capsys, "hermite", "--m", "3")
    assert code == 0 and out.strip() == "H_3 = 8x^3 - 12x; a_3 = u^3 + 3/2 u"
    code, payload = run_json(capsys, "hermite", "--m", "6")
    assert payload["relation"] is True


def test_symbol(capsys):
    code, payload = run_json(capsys, "symbol", "--n", "2")
    assert code == 0 and payload["symbol"] == "x[1,2] xi[1,2] + u^2"


def write(tmp_path, text):
    p = tmp_path / "m.txt"
    p.write_text(text)
    return str(p)


PHI2 = "dim 4\nkind anti\n1 1 u\n1 3 x[1,2]\n2 2 u\n3 1 d[1,2]\n"


@pytest.mark.parametrize("backend", ["full", "restricted", "forms"])
def test_pfaffian_file(capsys, tmp_path, backend):
    path = write(tmp_path, PHI2)
    code, payload = run_json(capsys, "pfaffian", path, "--backend", backend,
                             "--expect", "x[1,2] d[1,2] + u^2 + 1/2")
    assert code == 0 and payload["match"] is True
    assert payload["pfaffian"] == "x[1,2] d[1,2] + u^2 + 1/2"


def test_pfaffian_commutative_backend(capsys, tmp_path):
    path = write(tmp_path, "dim 4\nn 4\n1 2 x[1,2]\n3 4 x[3,4]\n1 3 x[1,3]\n2 4 x[2,4]\n")
    code, out, _ = run(capsys, "pfaffian", path, "--backend", "commutative")
    assert code == 0 and out.strip() == "Pf = x[1,2] x[3,4] - x[1,3] x[2,4]"


def test_crafted_failing_fixture_exits_1(capsys, tmp_path):
    path = write(tmp_path, PHI2)
    code, out, _ = run(capsys, "pfaffian", path, "--expect", "x[1,2] d[1,2] + u^2")
    assert code == 1 and "MISMATCH" in out


def test_failing_suite_exits_1(capsys, monkeypatch):
    import skewcapelli.suite as suite

    monkeypatch.setitem(suite.PROPERTIES, "broken.always", lambda rng: (0, 1))
    code, out, _ = run(capsys, "suite", "--only", "broken.always", "capelli.hermite_bridge")
    assert code == 1
    assert out.splitlines()[-1] == "failing: broken.always"


@pytest.mark.parametrize("text,where", [
    ("dim 4\n1 2 x[1,2] +\n", "line 2, column 13"),
    ("dim 4\n1 9 u\n", "line 2, column 3"),
    ("1 2 u\n", "line 1, column 1"),
])
def test_malformed_file_exits_2(capsys, tmp_path, text, where):
    code, out, err = run(capsys, "pfaffian", write(tmp_path, text))
    assert code == 2 and where in err


def test_missing_file_and_bad_shape(capsys, tmp_path):
    assert run(capsys, "pfaffian", str(tmp_path / "absent.txt"))[0] == 2
    path = write(tmp_path, "dim 3\n1 2 u\n")
    assert run(capsys, "pfaffian", path)[0] == 2


def test_suite_determinism(capsys):
    code1, out1, _ = run(capsys, "suite", "--seed", "42")
    code2, out2, _ = run(capsys, "suite", "--seed", "42")
    assert code1 == code2 == 0 and out1 == out2
    assert out1.splitlines()[-1] == "suite (seed 42): 19/19 properties pass"
    code, payload = run_json(capsys, "suite", "--seed", "42")
    assert payload["pass"] is True and payload["failing"] == []


def test_bench(capsys):
    code, payload = run_json(capsys, "bench", "--n-min", "1", "--n-max", "5")
    assert code == 0
    statuses = {(r["n"], r["backend"]): r["status"] for r in payload["rows"]}
    assert statuses[(5, "full")] == "skipped"
    assert all(s == "ok" for k, s in statuses.items() if k != (5, "full"))


def test_timeout_exits_2(capsys):
    code, _, err = run(capsys, "verify", "--n", "6", "--backend", "forms", "--timeout-secs", "0.01")
    assert code == 2 and "time limit" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "skewcapelli", "hermite", "--m", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "H_2 = 4x^2 - 2; a_2 = u^2 + 1/2"
