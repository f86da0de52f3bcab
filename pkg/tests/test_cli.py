import csv
import io
import json

from topomem.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "--code", "toric", "--size", "3")
    assert code == 0 and out.strip().splitlines()[-1] == "0 failures"


def test_export_to_file(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TOPOMEM_OUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "export", "--code", "subsystem", "--size", "3", "--out", "sub3.txt")
    assert code == 0
    assert (tmp_path / "sub3.txt").read_text().startswith("family=subsystem")


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--p-min", "0", "--p-max", "0.0039", "--points", "40")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 40 and rows[-1]["valid"] == "true"
    for col in ("alpha", "phase_asymptotic", "bit_asymptotic"):
        vals = [float(r[col]) for r in rows]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_bounds_with_finite(capsys):
    code, out, _ = run(capsys, "bounds", "--p-min", "1e-4", "--p-max", "3e-4", "--points", "3", "--finite", "5,5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["finite_bound"]) > 0.27


def test_memory_zero_noise(capsys):
    code, out, _ = run(capsys, "memory", "--size", "3", "--steps", "2", "--p", "0", "--trials", "200", "--seed", "1")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["phase_fail"]) == 0 and float(row["bit_fail"]) == 0 and row["trials"] == "200"


def test_roundtrip_json(capsys):
    code, out, _ = run(capsys, "roundtrip", "--code", "toric", "--size", "3", "--basis", "x",
                       "--eigen", "-1", "--trials", "5", "--seed", "2")
    rec = json.loads(out)
    assert code == 0 and rec["failures"] == 0 and rec["eigenvalue"] == -1


def test_roundtrip_logical_injection_reports_failures(capsys):
    code, out, _ = run(capsys, "roundtrip", "--code", "toric", "--size", "3", "--basis", "z",
                       "--eigen", "+1", "--trials", "4", "--seed", "2", "--inject", "logical")
    assert code == 0 and json.loads(out)["failures"] == 4


def test_usage_errors(capsys):
    code, _, err = run(capsys, "validate", "--code", "nonsense", "--size", "3")
    assert code == 2 and "unknown code" in err
    code, _, err = run(capsys, "memory", "--size", "3", "--steps", "2", "--p", "0.7", "--trials", "5", "--seed", "1")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "bounds", "--p-min", "0")
    assert code == 2
    code, _, err = run(capsys, "validate", "--code", "toric", "--size", "4")
    assert code == 2 and err.startswith("topomem validate: error:")
