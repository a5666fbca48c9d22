from __future__ import annotations

import json

import pytest

from nilcomm.catalog import shipped_path
from nilcomm.cli import main

DIM3 = str(shipped_path("dim3"))
DIM4 = str(shipped_path("dim4"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", DIM4)
    assert code == 0 and "30 entries OK" in out


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", DIM3)
    assert code == 0
    assert "4 entries: 4 passed, 0 failed" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", DIM3, "--json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["name"] for r in rows] == ["N3s_01", "N3s_02", "N3s_03", "N3s_04"]
    for r in rows:
        assert set(r) == {"name", "checks", "fingerprint"}
        assert all({"kind", "pass", "detail"} <= set(c) for c in r["checks"])
    assert rows[1]["fingerprint"]["h2d"] == 2


def test_verify_failure_exit_code(capsys, data_dir):
    code, out, _ = run(capsys, "verify", str(data_dir / "corrupted.nil"))
    assert code == 1 and "FAIL N4_01_zeroed" in out


def test_cohomology(capsys):
    code, out, _ = run(capsys, "cohomology", DIM3, "N3s_02")
    assert code == 0
    assert "dim H2_C = 4, dim H2_D = 2" in out
    assert "B2   = <D11, D12>" in out


def test_extend(capsys):
    code, out, _ = run(capsys, "extend", DIM3, "N3s_02", "--cocycle", "D22")
    assert code == 0
    assert out.splitlines()[1:] == ["e1*e1 = e2", "e1*e2 = e3", "e2*e2 = e4"]
    code, out2, _ = run(capsys, "extend", DIM3, "N3s_02", "--cocycle", "0,0,0,1,0,0")
    assert out2 == out


def test_extend_bad_coordinates(capsys):
    code, _, err = run(capsys, "extend", DIM3, "N3s_02", "--cocycle", "1,2")
    assert code == 2 and "expected 6 coordinates" in err


def test_fingerprint_params(capsys):
    code, out, _ = run(capsys, "fingerprint", DIM4, "N4s_13", "--param", "lambda=2")
    assert code == 0 and json.loads(out)["h2d"] == 3
    code, out, err = run(capsys, "fingerprint", DIM4, "N4s_13")
    assert json.loads(out)["h2d"] == 3 and "lambda=2" in err


def test_witness(capsys):
    code, out, _ = run(capsys, "witness", DIM3, "N3s_02")
    assert code == 0 and "witness 1: verified" in out


def test_unknown_entry(capsys):
    code, _, err = run(capsys, "cohomology", DIM3, "N3s_99")
    assert code == 2 and "N3s_99" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.nil"))
    assert code == 2 and err.startswith("error:")


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as ei:
        main([])
    assert ei.value.code == 2
