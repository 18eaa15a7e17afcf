import csv
import io
import json
import subprocess
import sys

import pytest

from qpam_pnc.cli import EXIT_CONFIG, EXIT_UNREACHABLE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_turning_points_csv(capsys):
    code, out, _ = run(capsys, "turning-points", "--q", "7")
    assert code == 0
    odd = [r for r in rows(out) if r["parity"] == "odd"]
    assert (odd[0]["m"], odd[0]["n"], odd[0]["dmin_num"], odd[0]["dmin_den"]) == ("7", "6", "1", "6")


def test_curve_json_mirrors_csv(capsys):
    _, as_csv, _ = run(capsys, "curve", "--q", "5")
    _, as_json, _ = run(capsys, "curve", "--q", "5", "--json")
    parsed = json.loads(as_json)
    assert [{k: str(v) for k, v in r.items()} for r in parsed] == rows(as_csv)


def test_optimal_ab(capsys):
    code, out, _ = run(capsys, "optimal-ab", "--q", "7", "--eta", "7/6", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["d_min"] == "1/6"
    assert [1, 1] in rec["classes"] and [4, 1] in rec["classes"]


def test_optimal_ab_text(capsys):
    code, out, _ = run(capsys, "optimal-ab", "--q", "5", "--eta", "1")
    assert code == 0 and "d_min: 1" in out


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--q", "7", "--eta", "7/6", "--pair", "4,1", "--snr", "20,30")
    r = rows(out)
    assert code == 0 and len(r) == 2
    assert r[0]["a_min"] == "36" and float(r[1]["bound"]) < float(r[0]["bound"])


def test_dump_constellation(capsys):
    code, out, _ = run(capsys, "dump-constellation", "--q", "3", "--eta", "3/2", "--pair", "1,1")
    r = rows(out)
    assert code == 0 and len(r) == 9
    assert {x["nc_symbol"] for x in r} == {"0", "1", "2"}


def test_ser_to_file_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["ser", "--q", "5", "--eta", "5/4", "--snr", "10:14:2",
                     "--trials", "20000", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert len(rows(paths[0].read_text())) == 3


def test_ser_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q = 5\neta = 1\nsnr_db = 10\ntrials = 1000\nseed = 4\n")
    code, out, _ = run(capsys, "ser", "--config", str(cfg), "--trials", "3000")
    assert code == 0 and rows(out)[0]["symbols"] == "3000"


def test_required_snr(capsys):
    code, out, _ = run(capsys, "required-snr", "--q", "3", "--eta", "1", "--trials", "20000",
                       "--target", "1e-2", "--lo", "0", "--hi", "30")
    r = rows(out)[0]
    assert code == 0 and float(r["bracket_lo"]) <= float(r["required_snr_db"]) <= float(r["bracket_hi"])


@pytest.mark.parametrize("argv", [
    ["ser", "--q", "4", "--trials", "10"],
    ["ser", "--mode", "sync", "--rule", "bp", "--trials", "10"],
    ["optimal-ab", "--q", "9", "--eta", "1"],
    ["bound", "--q", "7", "--eta", "1", "--pair", "0,1"],
    ["curve", "--q", "6"],
    ["reproduce", "ser-5pam", "--trials", "0"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG and "error" in err


def test_unreachable_exit_3(capsys):
    code, _, err = run(capsys, "required-snr", "--q", "7", "--eta", "1", "--trials", "5000",
                       "--target", "1e-3", "--lo", "0", "--hi", "3")
    assert code == EXIT_UNREACHABLE and "exceeds target" in err


def test_reproduce_curve_preset(tmp_path, capsys):
    code, out, _ = run(capsys, "reproduce", "dmin-curve-7pam", "--outdir", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["dmin-curve-7pam-turning-points.csv", "dmin-curve-7pam.csv", "dmin-curve-7pam.dat"]
    knots = {(r["eta_num"], r["eta_den"]): (r["dmin_num"], r["dmin_den"])
             for r in rows((tmp_path / "dmin-curve-7pam.csv").read_text())}
    assert knots[("7", "6")] == ("1", "6") and knots[("6", "5")] == ("1", "5")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qpam_pnc.cli", "turning-points", "--q", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("index,parity")
