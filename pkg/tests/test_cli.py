import csv
import io
import json
import subprocess
import sys

import pytest

from etale.catalogue import RING_NAMES, get_ring
from etale.cli import main
from etale.fusion_ring import FusionRing


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rings_list(capsys):
    code, out, _ = run(capsys, "rings", "list")
    assert code == 0
    for name in RING_NAMES:
        assert name in out


def test_unknown_ring_is_usage_error(capsys):
    code, _, err = run(capsys, "classify", "nosuchring")
    assert code == 2
    assert "unknown ring" in err


def test_bad_flag_is_usage_error(capsys):
    assert run(capsys, "classify", "so(5)_2", "--md", "99")[0] == 2
    assert run(capsys, "condense", "so(5)_2", "--algebra", "1+Q")[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_non_etale_condense_is_usage_error(capsys):
    code, _, err = run(capsys, "condense", "so(5)_2", "--algebra", "1+V")
    assert code == 2 and "not etale" in err


def test_classify_check(capsys):
    code, out, _ = run(capsys, "classify", "so(5)_2", "--all", "--check")
    assert code == 0
    assert "TY(Z/5Z)" in out
    assert "completely anisotropic: No" in out


def test_global_flags_before_or_after_command(capsys):
    a = run(capsys, "--format", "json", "candidates", "Vec_Z6")[1]
    b = run(capsys, "candidates", "Vec_Z6", "--format", "json")[1]
    assert a == b
    data = json.loads(a)
    assert len(data["tables"][0]["rows"]) == 6


def test_csv_has_exact_scalars(capsys):
    code, out, _ = run(capsys, "--format", "csv", "characters", "so(5)_2")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    text = "\n".join(",".join(r) for r in rows)
    assert "~" not in text
    assert "E(5)" in text


def test_output_is_deterministic(capsys):
    first = run(capsys, "classify", "so(5)_2", "--all")[1]
    second = run(capsys, "classify", "so(5)_2", "--all")[1]
    assert first == second


def test_export_round_trip(capsys, tmp_path):
    path = tmp_path / "ring.json"
    code, _, _ = run(capsys, "rings", "export", "psu(2)_11", "-o", str(path))
    assert code == 0
    assert FusionRing.load(path) == get_ring("psu(2)_11")
    by_name = run(capsys, "--format", "csv", "candidates", "psu(2)_11")[1]
    by_file = run(capsys, "--format", "csv", "candidates", str(path))[1]
    rows = lambda text: [line for line in text.splitlines() if not line.lstrip('"').startswith("#")]
    assert rows(by_name) == rows(by_file)


def test_modular_file_round_trip(capsys, tmp_path):
    path = tmp_path / "md.json"
    code, out, _ = run(capsys, "modular", "so(5)_2", "--md", "4", "-o", str(path), "--check")
    assert code == 0 and "verification: pass" in out
    data = json.loads(path.read_text())
    assert data["ring"] == "so(5)_2" and data["dSign"] == -1
    code, out, _ = run(capsys, "classify", "so(5)_2", "--md", str(path))
    assert code == 0 and "EtaleCertified" in out


def test_broken_modular_file_fails_check(capsys, tmp_path):
    path = tmp_path / "md.json"
    run(capsys, "modular", "so(5)_2", "--md", "1", "-o", str(path))
    data = json.loads(path.read_text())
    data["h"][2] = "2/5"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "modular", "so(5)_2", "--md", str(path), "--check")
    assert code == 1 and "verification: fail" in out


def test_condense_output(capsys):
    code, out, _ = run(capsys, "condense", "so(5)_2", "--algebra", "1+X")
    assert code == 0
    assert "TY(Z/5Z)" in out and "Vec^1_{Z/5Z}" in out
    assert out.count("unconfined") >= 5


def test_gsd_and_nimrep(capsys):
    code, out, _ = run(capsys, "gsd", "so(5)_2", "--algebra", "1+X")
    assert code == 0 and "GSD = 6" in out
    code, out, _ = run(capsys, "nimrep", "so(5)_2", "--algebra", "1+X", "--rank", "4")
    assert code == 0


def test_budget_exhaustion_exit_code(capsys):
    code, _, err = run(capsys, "--budget", "3", "nimrep", "so(5)_2", "--algebra", "1+X", "--rank", "6")
    assert code == 3 and "budget" in err


def test_match_bundled(capsys):
    code, out, _ = run(capsys, "match", "--bundled")
    assert code == 0
    assert "su(2)_5, character 5, conformal vector 2" in out
    assert "psu(2)_11, character 1, conformal vector 1" in out


def test_match_files(capsys, tmp_path):
    dims = tmp_path / "d.txt"
    hs = tmp_path / "h.txt"
    dims.write_text("1\n1\n1\n1\n1\n1\n")
    hs.write_text("0\n1/9\n0\n0\n0\n0\n")
    code, out, _ = run(capsys, "match", "--dims", str(dims), "--h", str(hs))
    assert code == 1


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"format": "json"}))
    code, out, _ = run(capsys, "--config", str(cfg), "rings", "list")
    assert code == 0
    json.loads(out)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "etale", "rings", "show", "so(5)_2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "so(5)_2" in proc.stdout
