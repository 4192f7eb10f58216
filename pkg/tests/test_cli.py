import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from wavebasis.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_spectrum_singular(capsys):
    code, out, _ = run(capsys, "spectrum", "--potential", "singular", "--U", "1", "--beta", "0.5", "--n-max", "1")
    assert code == 0
    assert out.startswith("# wavebasis 0.1.0")
    rows = parse_csv(out)
    assert len(rows) == 2
    e_closed = [k for k in rows[0] if k.startswith("E_closed_form")][0]
    e_oracle = [k for k in rows[0] if k.startswith("E_oracle")][0]
    assert float(rows[0][e_closed]) == pytest.approx(-1.17474, abs=1e-5)
    assert float(rows[0][e_oracle]) == pytest.approx(-1.6534, abs=1e-4)


def test_spectrum_hard_wall_starts_at_one(capsys):
    code, out, _ = run(capsys, "spectrum", "--potential", "hard_wall", "--n-max", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [r[0] for r in doc["rows"]] == [1, 2]
    assert doc["version"] == "0.1.0"


def test_wavefunction_sentinel(capsys):
    code, out, _ = run(
        capsys, "wavefunction", "--potential", "harmonic", "--samples", "11", "--basis", "wkb", "--basis", "new"
    )
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 11
    wkb = [k for k in rows[0] if k.startswith("u_improved_wkb")][0]
    new = [k for k in rows[0] if k.startswith("u_new_bases")][0]
    assert math.isinf(float(rows[0][wkb])) and math.isinf(float(rows[-1][wkb]))
    assert all(math.isfinite(float(r[new])) for r in rows)


def test_dispersion(capsys):
    code, out, _ = run(capsys, "dispersion", "--drive-min", "1", "--drive-max", "1", "--drive-points", "1")
    assert code == 0
    rows = {r["method [-]"]: float(r["kappa_re [1/length]"]) for r in parse_csv(out)}
    assert rows["new"] == pytest.approx(math.sqrt(5), rel=1e-12)
    assert rows["wkb"] == pytest.approx(2.0, rel=1e-12)
    assert rows["exact"] == pytest.approx(1.19662, abs=1e-5)


def test_dtmm_propagate(capsys):
    code, out, _ = run(capsys, "dtmm-propagate", "--f-re", "-1", "--samples", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    last = dict(zip([c["name"] for c in doc["columns"]], doc["rows"][-1]))
    assert last["u"] == pytest.approx(math.cosh(1.0), rel=1e-12)
    assert last["du"] == pytest.approx(math.sinh(1.0), rel=1e-12)


def test_config_errors_exit_2(capsys):
    code, _, err = run(capsys, "spectrum", "--potential", "singular", "--beta", "1.5")
    assert code == 2
    assert json.loads(err)["exit_code"] == 2
    code, _, _ = run(capsys, "spectrum")
    assert code == 2
    code, _, _ = run(capsys, "spectrum", "--spec", "/nonexistent/p.json")
    assert code == 2


def test_bad_argument_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--potential", "bogus"])
    assert exc.value.code == 2


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["spectrum", "--potential", "harmonic", "--n-max", "2", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_spec_file(tmp_path, capsys):
    path = tmp_path / "pot.json"
    path.write_text(json.dumps({"type": "power_law", "U": 1.0, "alpha": 2.0}))
    code, out, _ = run(capsys, "spectrum", "--spec", str(path), "--n-max", "0", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    row = dict(zip([c["name"] for c in doc["columns"]], doc["rows"][0]))
    assert row["E_oracle"] == pytest.approx(1.0, rel=1e-8)


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "wavebasis", "--version"], capture_output=True, text=True, env=dict(os.environ)
    )
    assert out.returncode == 0
    assert "0.1.0" in out.stdout
