import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from bosonladder.cli import main
from bosonladder.model import from_spec, make_k_photon

KP12 = '{"family":"k_photon","params":{"k":1,"N":2}}'
KP2_100 = '{"family":"k_photon","params":{"k":2,"N":100}}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    comments = [l for l in text.splitlines() if l.startswith("#")]
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#"))
    rows = list(csv.reader(io.StringIO(body)))
    return comments, rows[0], rows[1:]


def test_model_show_round_trip(capsys):
    code, out, _ = run(capsys, "model", "show", "--model", KP12)
    assert code == 0
    doc = json.loads(out)
    assert doc["N"] == 2 and doc["betas"] == ["2", "2", "0"]
    assert from_spec(doc) == make_k_photon(1, 2)


def test_model_from_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"family":"custom","betas":["1/2","3","0"]}')
    for ref in (str(path), "@" + str(path)):
        code, out, _ = run(capsys, "model", "show", "--model", ref)
        assert code == 0 and json.loads(out)["betas"] == ["1/2", "3", "0"]


def test_csv_provenance_and_header(capsys):
    code, out, _ = run(capsys, "spectrum", "--model", KP12)
    comments, header, rows = parse_csv(out)
    assert code == 0
    assert comments[0].startswith("# bosonladder 0.1.0 model_sha256=") and "tol=1e-12" in comments[0]
    assert header == ["j", "eigenvalue"]
    assert np.allclose([float(r[1]) for r in rows], [-2, 0, 2], atol=1e-14)


def test_output_is_deterministic(capsys):
    argv = ("evolve", "--model", KP12, "--tau", "0.1,0.7", "--initial", "0")
    outs = [run(capsys, *argv)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_evolve_identity_at_zero(capsys):
    code, out, _ = run(capsys, "evolve", "--model", KP12, "--tau", "0", "--initial", "1")
    _, header, rows = parse_csv(out)
    assert header == ["tau", "n", "re", "im", "prob", "err_bound"]
    assert [float(r[2]) for r in rows] == [0.0, 1.0, 0.0]
    assert all(float(r[3]) == 0 for r in rows)


def test_evolve_matches_closed_form(capsys):
    code, out, _ = run(capsys, "evolve", "--model", KP12, "--tau", "0.5", "--initial", "0")
    _, _, rows = parse_csv(out)
    assert abs(float(rows[0][2]) - np.cos(0.5) ** 2) < 1e-12
    assert abs(float(rows[2][2]) + np.sin(0.5) ** 2) < 1e-12
    assert float(rows[0][5]) <= 1e-12


def test_evolve_superposition_json(capsys):
    code, out, _ = run(capsys, "evolve", "--model", KP12, "--tau", "0.2", "--initial",
                       "0.6,0.8j,0", "--out", "json")
    doc = json.loads(out)
    assert code == 0 and doc["columns"][0] == "tau" and len(doc["rows"]) == 3
    assert abs(sum(r[4] if isinstance(r[4], float) else float(r[4]) for r in doc["rows"]) - 1) < 1e-12


def test_out_path(capsys, tmp_path):
    dest = tmp_path / "g.csv"
    code, out, _ = run(capsys, "gfactors", "--model", KP12, "--k", "0", "--max-l", "2",
                       "--out", str(dest))
    assert code == 0 and out == ""
    _, header, rows = parse_csv(dest.read_text())
    assert header == ["n", "l", "g"]
    assert ["2", "1", "4"] in rows and ["0", "2", "8"] in rows


def test_stationary_k_photon_2_100(capsys):
    code, out, _ = run(capsys, "stationary", "--model", KP2_100)
    comments, header, rows = parse_csv(out)
    assert code == 0 and header == ["p", "n", "psi", "psi_squared"]
    assert len(rows) == 51
    sq = [float(r[3]) for r in rows]
    assert sq[0] == 1 and all(s > 0 for s in sq)
    assert float(comments[-1].split("=")[1]) <= 1e-10


def test_spectrum_eigenvectors(capsys):
    code, out, _ = run(capsys, "spectrum", "--model", KP12, "--eigenvectors", "--normalize", "psi0")
    comments, header, rows = parse_csv(out)
    assert header == ["j", "eigenvalue", "n", "psi"]
    assert len(rows) == 9
    assert np.allclose([float(r[3]) for r in rows[3:6]], [1, 0, -1], atol=1e-14)
    assert any(c.startswith("# max_residual=") for c in comments)


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--model", '{"family":"three_mode","params":{"N":8}}',
                       "--tau", "0.4", "--scaled-tau")
    assert code == 0
    assert out.rstrip().endswith("ALL PASS") and "FAIL" not in out


@pytest.mark.parametrize("argv,code", [
    (["spectrum", "--model", '{"family":"nope","params":{}}'], 1),
    (["spectrum"], 1),
    (["evolve", "--model", KP12, "--tau", "0.1", "--initial", "7"], 1),
    (["evolve", "--model", KP12, "--tau", "0.1", "--tol", "-1"], 1),
    (["spectrum", "--model", '{"family":"custom","betas":[1,0,1,0]}'], 2),
    (["stationary", "--model", '{"family":"k_photon","params":{"k":1,"N":3}}'], 2),
    (["model", "show", "--model", "/nonexistent/spec.json"], 1),
])
def test_exit_codes(capsys, argv, code):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code
    assert capsys.readouterr().err


def test_entry_point_module():
    r = subprocess.run([sys.executable, "-m", "bosonladder", "spectrum", "--model", KP12],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "j,eigenvalue" in r.stdout
