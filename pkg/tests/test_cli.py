import json
import math
import subprocess
import sys

import pytest

from triqubit.cli import dumps, main

s2 = 1 / math.sqrt(2)
GHZ_JSON = {"n": 3, "amplitudes": [[s2, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0],
                                   [s2, 0]]}
W_JSON = {"n": 3, "amplitudes": [0, 1, 1, 0, 1, 0, 0, 0]}
GHZ4_JSON = {"n": 4, "amplitudes": [1] + [0] * 14 + [1]}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in (("ghz", GHZ_JSON), ("w", W_JSON), ("ghz4", GHZ4_JSON),
                      ("both", [GHZ_JSON, W_JSON])):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3,\n "amplitudes": [1, 2,\n')
    paths["bad"] = str(bad)
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"n": 3, "amplitudes": [1, 0, 0]}))
    paths["short"] = str(short)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines() if line], err


def test_classify_ghz(files, capsys):
    code, out, _ = run(capsys, "classify", files["ghz"])
    assert code == 0
    assert out[0]["type"] == "2b" and out[0]["nu"] == 2
    assert len(out[0]["decomposition"]) == 2
    assert out[0]["real"]["isReal"]


def test_invariants_w(files, capsys):
    code, out, _ = run(capsys, "invariants", files["w"])
    assert code == 0
    for got, want in zip(out[0]["J"], (1 / 9, 1 / 9, 1 / 9, 0, 2 / 27)):
        assert got == pytest.approx(want, abs=1e-9)


def test_list_input_gives_one_report_each(files, capsys):
    code, out, _ = run(capsys, "canon", files["both"])
    assert code == 0 and len(out) == 2


@pytest.mark.parametrize("command", ["minimal", "symmetric", "real", "ghz"])
def test_commands_run(files, capsys, command):
    code, out, _ = run(capsys, command, files["ghz"], "--all-parties")
    assert code == 0 and len(out) == 1


def test_ghz_on_w_is_an_error(files, capsys):
    code, out, err = run(capsys, "ghz", files["w"])
    assert code == 1 and not out
    assert "NotGhzClass" in err


def test_reduce4(files, capsys):
    code, out, _ = run(capsys, "reduce4", files["ghz4"], "--all-roots")
    assert code == 0
    assert len(out[0]["allRoots"]) == 4
    code, _, _ = run(capsys, "reduce4", files["ghz"])
    assert code == 1


def test_malformed_json(files, capsys):
    code, out, err = run(capsys, "classify", files["bad"])
    assert code == 1
    assert ":3:" in json.loads(err)["error"]


def test_wrong_amplitude_count(files, capsys):
    code, _, err = run(capsys, "classify", files["short"])
    assert code == 1
    assert "amplitudes" in err


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--samples", "2000", "--seed", "7")
    assert code == 0
    assert out[0]["violations"] == 0


def test_epsilon_validation(files, capsys, monkeypatch):
    code, _, _ = run(capsys, "classify", files["ghz"], "--epsilon", "0.5")
    assert code == 1
    monkeypatch.setenv("TRIQUBIT_EPSILON", "1e-6")
    code, out, _ = run(capsys, "classify", files["ghz"])
    assert code == 0


def test_output_is_deterministic(files, capsys):
    run(capsys, "classify", files["w"])
    first = main(["classify", files["w"]]), capsys.readouterr().out
    second = main(["classify", files["w"]]), capsys.readouterr().out
    assert first == second


def test_table_format(files, capsys):
    assert main(["canon", files["ghz"], "--format", "table"]) == 0
    assert "canonical.lambda" in capsys.readouterr().out


def test_dumps_precision():
    assert dumps({"b": 0.1, "a": -0.0}) == '{"b": 0.10000000000000001, "a": 0}'


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "triqubit", "classify", files["ghz"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["type"] == "2b"
