import json
import subprocess
import sys
from pathlib import Path

import pytest

from qiter.cli import main
from qiter.exactfield import cyclotomic_tower
from qiter.qarith import make_context
from qiter.ratfunc import parse

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_delta_command(capsys):
    rc, out, _ = run(capsys, "delta", "--field", str(DATA / "fields" / "qzeta3.json"), "--n", "3", "--k", "3", "--expr", "t^6")
    assert rc == 0 and out.strip() == "2*t^3"
    rc, out, _ = run(capsys, "delta", "--field", "Q", "--n", "2", "--k", "2", "--expr", "1/t", "--json")
    assert json.loads(out)["delta"] == "-1/t^3"


def test_printed_output_reparses(capsys):
    ctx = make_context(cyclotomic_tower(3), 3)
    rc, out, _ = run(capsys, "taylor", "--n", "3", "--expr", "(t + g)/(t^2 - 2)", "--N", "4", "--json")
    coeffs = json.loads(out)["coeffs"]
    from qiter.ratfunc import delta

    f = parse(ctx, "(t + g)/(t^2 - 2)")
    assert [parse(ctx, c) for c in coeffs] == [delta(ctx, k, f) for k in range(5)]


def test_equations_command(capsys):
    rc, out, _ = run(capsys, "equations", "--system", str(DATA / "systems" / "rank1_p5.json"))
    doc = json.loads(out)
    assert rc == 0
    assert doc["Atilde"] == [[["1/t^2"]], [["3/t^10"]], [["2/t^50"]], [["4/t^250"]]]
    assert doc["consistency"]["ok"]


def test_check_command(capsys):
    sysf = str(DATA / "systems" / "rank1_char0_n3.json")
    rc, out, _ = run(capsys, "check", "--system", sysf, "--solution", '[["t^-9"]]')
    assert rc == 0 and out.strip() == "OK"
    rc, out, _ = run(capsys, "check", "--system", sysf, "--solution", '[["t^-8"]]')
    assert rc == 1 and "FAIL" in out


def test_wronskian_command(capsys):
    rc, out, _ = run(capsys, "wronskian", "--n", "3", "--exprs", "1,t,t^2", "--bound", "12", "--json")
    assert json.loads(out) == {"orders": [0, 1, 2], "det": "1"}
    rc, out, _ = run(capsys, "wronskian", "--n", "3", "--exprs", "1,2")
    assert out.strip() == "NotFoundUpTo(18)"


def test_classify_command(capsys):
    rc, out, _ = run(capsys, "classify", "--kind", "rank1-charp", "--p", "5", "--n", "2", "--alpha", "1/3", "--digits-count", "24", "--json")
    doc = json.loads(out)
    assert doc["verdict"]["kind"] == "cyclic" and doc["verdict"]["order"] == 3
    assert doc["period"] == [1, 2]
    rc, out, _ = run(capsys, "classify", "--kind", "rank1-char0", "--field", str(DATA / "fields" / "qsqrt2.json"), "--a", "g", "--n", "2")
    assert out.strip() == "Gm"
    rc, out, _ = run(capsys, "classify", "--kind", "ga", "--p", "2", "--digits", "0,1,1,0,1,0,0,1", "--json")
    assert json.loads(out)["verdict"]["kind"] == "undecided"


def test_curvature_command(capsys, tmp_path):
    out_path = tmp_path / "out.json"
    rc, out, _ = run(capsys, "curvature", "--input", str(DATA / "modules" / "sqrt2.json"), "--primes", "3..30", "--report", str(out_path))
    assert rc == 0 and out.startswith("not isotrivial")
    rep = json.loads(out_path.read_text())
    assert rep["places"][0] == {"p": 3, "factor": [1, 0, 1], "status": "nonzero", "witness": "(0,0): g/t^6"}
    assert {"p": 7, "factor": [-3, 1], "status": "vanishes"} in rep["places"]


def test_selftest_command(capsys):
    rc, out, _ = run(capsys, "selftest", "--suite", "identities", "--n", "3", "--trials", "100")
    assert rc == 0 and out.strip() == "OK 100/100"


def test_error_codes(capsys):
    rc, _, err = run(capsys, "delta", "--n", "3", "--k", "1", "--expr", "t^^2")
    assert rc == 2 and err.startswith("error[syntax]")
    rc, _, err = run(capsys, "delta", "--n", "3", "--k", "1", "--expr", "1/(t - t)")
    assert rc == 1 and err.startswith("error[domain]")
    rc, _, err = run(capsys, "delta", "--field", "Q", "--n", "3", "--k", "1", "--expr", "t")
    assert rc == 1 and "error[domain]" in err
    with pytest.raises(SystemExit) as ei:
        main(["delta", "--n", "3"])
    assert ei.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qiter", "delta", "--n", "2", "--k", "2", "--expr", "t^4"],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0 and proc.stdout.strip() == "2*t^2"
    proc = subprocess.run([sys.executable, "-m", "qiter", "frobnicate"], capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 2
