import json

import numpy as np
import pytest

from ccrweyl import gaussian as ga
from ccrweyl import serialize as se
from ccrweyl.cli import main
from ccrweyl.grid import PhaseGrid


@pytest.fixture
def element_file(tmp_path):
    path = tmp_path / "el.json"
    path.write_text(json.dumps({"gamma": 0.5}))
    return path


def run(args):
    return main([str(a) for a in args])


def test_usage_errors(capsys):
    assert run(["verify", "--suite", "bogus"]) == 2
    assert run(["spectrum"]) == 2
    assert run(["no-such-command"]) == 2


def test_spectrum_csv(tmp_path, capsys):
    code = run(
        ["spectrum", "--gamma", "3", "--cutoff", "4", "--emit", "csv", "--out-dir", tmp_path]
    )
    assert code == 0
    rows = (tmp_path / "spectrum.csv").read_text().strip().splitlines()
    assert rows[0] == "index,re,im"
    got = np.array([float(r.split(",")[1]) for r in rows[1:]])
    want = 2 * np.pi * 1.5 * (-0.5) ** np.arange(5)
    assert np.abs(got - want).max() < 1e-12


def test_spectrum_json_from_element(tmp_path, element_file):
    code = run(["spectrum", "--element", element_file, "--cutoff", "3", "--out-dir", tmp_path])
    assert code == 0
    payload = json.loads((tmp_path / "spectrum.json").read_text())
    assert payload["schema"] == 1
    lead = payload["eigenvalues"][0]
    assert lead["re"] == pytest.approx(2 * np.pi * 2 * 0.5 / 1.5)


def test_positivity_output(element_file, capsys):
    assert run(["positivity", "--element", element_file]) == 0
    out = capsys.readouterr().out
    assert "positive" in out and "not positive" not in out


def test_integral_rep_command(capsys):
    assert run(["check-integral-rep", "--gamma", "3"]) == 0
    assert run(["check-integral-rep", "--gamma", "0.5"]) == 2


def test_matrix_unit_emit_roundtrip(tmp_path):
    grid_file = tmp_path / "g23.json"
    code = run(
        ["matrix-unit", "--k", "2", "--l", "3", "--emit-grid", grid_file, "--grid-N", "48"]
    )
    assert code == 0
    back = se.grid_from_json(json.loads(grid_file.read_text()))
    assert back.grid == PhaseGrid(n=1, L=10.0, N=48)
    # byte-identical re-emission (determinism)
    again = tmp_path / "again.json"
    run(["matrix-unit", "--k", "2", "--l", "3", "--emit-grid", again, "--grid-N", "48"])
    assert grid_file.read_bytes() == again.read_bytes()


def test_fock_command(tmp_path, element_file, capsys):
    out = tmp_path / "m.json"
    code = run(
        [
            "fock", "--element", element_file, "--dim", "12",
            "--grid-N", "64", "--grid-L", "8", "--emit", out,
        ]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["dim"] == 12
    top = complex(*payload["matrix"][0])
    assert top == pytest.approx(2 * np.pi * 2 * 0.5 / 1.5, rel=1e-4)


def test_mehler_command(capsys):
    assert run(["mehler", "--gamma", "3"]) == 0


def test_emit_round_trip(tmp_path):
    out = tmp_path / "emitted"
    code = run(["emit", "--gamma", "1", "--out-dir", out, "--format", "csv", "--grid-N", "32"])
    assert code == 0
    element = se.gaussian_from_json(json.loads((out / "element.json").read_text()))
    assert ga.isclose(element, ga.standard_gaussian(1.0), rtol=1e-12)
    assert (out / "grid.csv").read_text().startswith("x,y,re,im")
    assert run(["emit", "--gamma", "1", "--element", "x.json"]) == 2


def test_williamson_command(tmp_path, capsys):
    gammas = np.array([2.0, 0.7])
    K = np.diag(np.r_[1.0 / (4 * gammas), 1.0 / (4 * gammas)])
    path = tmp_path / "K.json"
    path.write_text(json.dumps({"schema": 1, "n": 2, "matrix": K.ravel().tolist()}))
    assert run(["williamson", "--matrix", path, "--out-dir", tmp_path]) == 0
    payload = json.loads((tmp_path / "williamson.json").read_text())
    assert payload["gammas"] == pytest.approx([2.0, 0.7])


def test_verify_single_suite(capsys):
    code = run(["verify", "--suite", "gaussian", "--grid-N", "64"])
    assert code == 0
    out = capsys.readouterr().out
    assert "[pass]" in out and "FAIL" not in out
