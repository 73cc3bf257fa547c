"""Tests for the sepcert command line: outputs and exit codes."""

import json

import numpy as np
import pytest

from sepcert.bipartite import flip, unit
from sepcert.choi import identity_map, trace_map, transpose_map
from sepcert.cli import EXIT_CHAIN_BROKEN, EXIT_OK, EXIT_USAGE, main
from sepcert.hakye import counterexample
from sepcert.presets import get_max_entangled, get_pure_product
from sepcert.schema import ChainEntry, ChainVerdict
from sepcert.util_json import bipartite_to_json, dump_json, map_to_json, matrix_from_json


def write_state(tmp_path, name, op):
    path = tmp_path / f"{name}.json"
    dump_json(bipartite_to_json(op), path)
    return str(path)


def write_map(tmp_path, name, phi):
    path = tmp_path / f"{name}.json"
    dump_json(map_to_json(phi), path)
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_check_max_entangled(tmp_path, capsys):
    """Test ê is reported Entangled with S = 3."""
    path = write_state(tmp_path, "e", get_max_entangled(3))
    code, doc = run_json(capsys, ["check", path])
    assert code == EXIT_OK
    assert doc["command"] == "check"
    assert doc["schema_version"] == "v1"
    assert doc["report"]["verdict"] == "Entangled"
    assert doc["report"]["S"] == pytest.approx(3.0)
    assert doc["report"]["ppt"] is False


def test_check_maximally_mixed(tmp_path, capsys):
    path = write_state(tmp_path, "mixed", unit(3) * (1.0 / 9.0))
    code, doc = run_json(capsys, ["check", path])
    assert code == EXIT_OK
    assert doc["report"]["verdict"] == "Inconclusive"


def test_check_malformed_json(tmp_path, capsys):
    """Test broken input exits 2 with a message on stderr."""
    path = tmp_path / "bad.json"
    path.write_text("{\"rows\": 2,")
    assert main(["check", str(path)]) == EXIT_USAGE
    assert "Error" in capsys.readouterr().err


def test_check_missing_file(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.json")]) == EXIT_USAGE


def test_check_not_a_state(tmp_path, capsys):
    """Test a non-density exits 2."""
    path = write_state(tmp_path, "flip", flip(2))
    assert main(["check", path]) == EXIT_USAGE
    assert "trace" in capsys.readouterr().err.lower()


def test_twirl_pure_product(tmp_path, capsys):
    """Test e⊗e gives alpha = beta = 1/(n(n+1))."""
    path = write_state(tmp_path, "ee", get_pure_product(3))
    code, doc = run_json(capsys, ["twirl", path])
    assert code == EXIT_OK
    report = doc["report"]
    assert report["alpha"][0] == pytest.approx(1.0 / 12.0)
    assert report["beta"][0] == pytest.approx(1.0 / 12.0)
    assert report["verdict"] == "Separable"
    assert report["mc_samples"] is None


def test_twirl_monte_carlo(tmp_path, capsys):
    """Test ê with 10⁵ samples deviates less than 5e-3 from the closed form."""
    path = write_state(tmp_path, "e", get_max_entangled(3))
    code, doc = run_json(capsys, ["twirl", path, "--mc-samples", "100000", "--seed", "7"])
    assert code == EXIT_OK
    assert doc["report"]["mc_samples"] == 100000
    assert doc["report"]["mc_deviation"] < 5e-3


def test_twirl_n1(tmp_path, capsys):
    """Test local dimension 1 exits 2."""
    path = write_state(tmp_path, "one", get_pure_product(1))
    assert main(["twirl", path]) == EXIT_USAGE


def test_spa_transpose(tmp_path, capsys):
    """Test the transpose map gives t* = 1/4 and Inconclusive."""
    path = write_map(tmp_path, "t", transpose_map(3))
    code, doc = run_json(capsys, ["spa", path])
    assert code == EXIT_OK
    assert doc["report"]["spa"]["t_star"] == pytest.approx(0.25, abs=1e-12)
    assert doc["report"]["spa"]["spa_trace"] == pytest.approx(1.0, abs=1e-10)
    assert doc["report"]["certificate"]["verdict"] == "Inconclusive"


def test_spa_identity(tmp_path, capsys):
    """Test the identity map is certified Entangled (S = 9 > 3)."""
    path = write_map(tmp_path, "id", identity_map(3))
    code, doc = run_json(capsys, ["spa", path])
    assert code == EXIT_OK
    cert = doc["report"]["certificate"]
    assert cert["verdict"] == "Entangled"
    assert cert["S"] == pytest.approx(9.0)
    assert cert["bound"] == pytest.approx(3.0)


def test_spa_non_unital(tmp_path, capsys):
    """Test a scalar-unital map needs --allow-normalize."""
    path = write_map(tmp_path, "tr", trace_map(3))
    assert main(["spa", path]) == EXIT_USAGE
    assert "allow_normalize" in capsys.readouterr().err
    code, doc = run_json(capsys, ["spa", path, "--allow-normalize"])
    assert code == EXIT_OK
    assert doc["report"]["spa"]["normalized_by"] == pytest.approx(3.0)


def test_hakye_default(capsys):
    """Test epsilon = 0.1 reproduces the library report."""
    code, doc = run_json(capsys, ["hakye", "--epsilon", "0.1"])
    expected = counterexample(0.1)
    assert code == EXIT_OK
    report = doc["report"]
    assert report["verdict"] == "Entangled"
    assert report["S_psi"] == pytest.approx(expected.S_psi, rel=1e-11)
    assert report["bound"] == pytest.approx(expected.bound, rel=1e-11)
    assert report["S_psi"] == pytest.approx(8.23, abs=1e-2)
    assert len(report["chain"]) == len(expected.chain)
    assert all(entry["holds"] for entry in report["chain"])


def test_hakye_quarter(capsys):
    code, doc = run_json(capsys, ["hakye", "--epsilon", "0.25"])
    assert code == EXIT_OK
    assert doc["report"]["verdict"] == "Entangled"


def test_hakye_out_of_range(capsys):
    """Test epsilon = 0.3 exits 2."""
    assert main(["hakye", "--epsilon", "0.3"]) == EXIT_USAGE
    assert "epsilon" in capsys.readouterr().err


def test_hakye_epsilon_from_environment(monkeypatch, capsys):
    """Test SEPCERT_EPSILON applies unless a flag overrides it."""
    monkeypatch.setenv("SEPCERT_EPSILON", "0.2")
    code, doc = run_json(capsys, ["hakye"])
    assert code == EXIT_OK
    assert doc["report"]["epsilon"] == 0.2
    code, doc = run_json(capsys, ["hakye", "--epsilon", "0.05"])
    assert doc["report"]["epsilon"] == 0.05


def test_hakye_broken_chain(monkeypatch, capsys):
    """Test a failing chain inequality exits 3."""
    report = counterexample(0.1)
    broken = report.model_copy(update={
        "chain": report.chain + [ChainEntry(name="forced", lhs=0.0, rhs=1.0, holds=False)],
        "verdict": ChainVerdict.FAILED,
    })
    monkeypatch.setattr("sepcert.cli.counterexample", lambda epsilon: broken)
    assert main(["hakye"]) == EXIT_CHAIN_BROKEN
    captured = capsys.readouterr()
    assert "BROKEN forced" in captured.out
    assert "forced" in captured.err


def test_human_and_json_agree(capsys):
    """Test both output modes print the same 12 significant digits."""
    assert main(["hakye", "--epsilon", "0.1"]) == EXIT_OK
    human = capsys.readouterr().out
    code, doc = run_json(capsys, ["hakye", "--epsilon", "0.1"])
    values = {}
    for line in human.splitlines():
        key, _, value = line.partition(": ")
        if key in ("S_psi", "bound", "k", "t_star", "margin"):
            values[key] = float(value)
    assert set(values) == {"S_psi", "bound", "k", "t_star", "margin"}
    for key, value in values.items():
        assert value == doc["report"][key]
    assert human.rstrip().endswith("schema_version: v1")


def test_choi_transpose(tmp_path, capsys):
    """Test the choi subcommand prints V for the transpose map."""
    path = write_map(tmp_path, "t", transpose_map(2))
    code, doc = run_json(capsys, ["choi", path])
    assert code == EXIT_OK
    report = dict(doc["report"])
    assert report.pop("local_dims") == [2, 2]
    np.testing.assert_array_equal(matrix_from_json(report), flip(2).mat)


def test_choi_human(tmp_path, capsys):
    path = write_map(tmp_path, "t", transpose_map(2))
    assert main(["choi", path]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("[choi]")
    assert len(lines) == 5


def test_export_round_trip(tmp_path, capsys):
    """Test exported presets load back through check and spa."""
    state = tmp_path / "w.json"
    assert main(["export", "werner_symmetric", "--n", "3", "-o", str(state)]) == EXIT_OK
    code, doc = run_json(capsys, ["check", str(state)])
    assert code == EXIT_OK
    assert doc["report"]["verdict"] == "Inconclusive"

    hakye_map = tmp_path / "hk.json"
    assert main(["export", "hakye", "-o", str(hakye_map)]) == EXIT_OK
    code, doc = run_json(capsys, ["spa", str(hakye_map), "--allow-normalize"])
    assert code == EXIT_OK
    assert doc["report"]["certificate"]["verdict"] == "Entangled"


def test_export_unknown(capsys):
    assert main(["export", "nonsense"]) == EXIT_USAGE


def test_schema(capsys):
    assert main(["schema"]) == EXIT_OK
    schemas = json.loads(capsys.readouterr().out)
    assert "counterexample_report" in schemas


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "sepcert" in capsys.readouterr().out


def test_invalid_tolerance(tmp_path, capsys):
    """Test a non-positive tolerance is rejected before dispatch."""
    path = write_state(tmp_path, "e", get_max_entangled(3))
    assert main(["check", path, "--tol", "-1"]) == EXIT_USAGE


def test_check_non_utf8_file(tmp_path, capsys):
    """Test a binary file exits 2 instead of raising."""
    path = tmp_path / "binary.json"
    path.write_bytes(b"\xff\xfe\x00garbage")
    assert main(["check", str(path)]) == EXIT_USAGE
    assert "UTF-8" in capsys.readouterr().err


def test_check_ignores_epsilon_setting(tmp_path, monkeypatch, capsys):
    """Test an out-of-range SEPCERT_EPSILON only affects commands that read it."""
    monkeypatch.setenv("SEPCERT_EPSILON", "0.3")
    path = write_state(tmp_path, "e", get_max_entangled(3))
    code, doc = run_json(capsys, ["check", path])
    assert code == EXIT_OK
    assert doc["report"]["verdict"] == "Entangled"
    assert main(["hakye"]) == EXIT_USAGE
