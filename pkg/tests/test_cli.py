import json
from pathlib import Path

import pytest

from magnon_qrm.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

SMALL_MODEL = """
[model]
omega_q = 1 wq
g_r = 0.1 wq
g_cr = 0.1 wq
n_qubits = 3
n_max = 6
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(tmp_path, command, text, out="out"):
    cfg = write(tmp_path, text)
    code = main([command, "--config", cfg, "--out", str(tmp_path / out)])
    return code, tmp_path / out


def test_spectrum_command(tmp_path):
    text = SMALL_MODEL + """
[run]
omega0_min = 2.9 wq
omega0_max = 3.1 wq
n_points = 11
n_levels = 8
check = false

[gap:three]
window = 2.95 wq, 3.02 wq
states = 1,ggg; 0,eee
"""
    code, out = run(tmp_path, "spectrum", text)
    assert code == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0].startswith("omega0,E_0") and len(lines) == 12
    gaps = json.loads((out / "gaps.json").read_text())
    assert gaps[0]["name"] == "three" and gaps[0]["kind"] == "anticrossing"


def test_spectrum_output_is_deterministic(tmp_path):
    text = SMALL_MODEL + "[run]\nomega0_min = 0.5 wq\nomega0_max = 3.5 wq\nn_points = 31\nn_levels = 6\n" \
        "check = false\nthreads = 3\n"
    run(tmp_path, "spectrum", text, out="a")
    run(tmp_path, "spectrum", text.replace("threads = 3", "threads = 1"), out="b")
    assert (tmp_path / "a" / "spectrum.csv").read_bytes() == (tmp_path / "b" / "spectrum.csv").read_bytes()


def test_energy_units_agree(tmp_path):
    base = SMALL_MODEL.replace("omega_q = 1 wq", "omega_q = 5 GHz").replace("0.1 wq", "0.5 GHz")
    text = base + "[run]\nomega0_min = 10 GHz\nomega0_max = 15 GHz\nn_points = 5\nn_levels = 4\ncheck = false\n"
    run(tmp_path, "spectrum", text, out="ghz")
    text = SMALL_MODEL + "[run]\nomega0_min = 2 wq\nomega0_max = 3 wq\nn_points = 5\nn_levels = 4\ncheck = false\n"
    run(tmp_path, "spectrum", text, out="wq")
    a = (tmp_path / "ghz" / "spectrum.csv").read_text().splitlines()[1:]
    b = (tmp_path / "wq" / "spectrum.csv").read_text().splitlines()[1:]
    for la, lb in zip(a, b):
        assert [float(x) for x in la.split(",")] == pytest.approx([float(x) for x in lb.split(",")], rel=1e-12)


def test_dynamics_command(tmp_path):
    text = SMALL_MODEL.replace("n_max = 6", "n_max = 8") + "[run]\nomega0 = auto\nn_points = 1024\ncheck = false\n"
    code, out = run(tmp_path, "dynamics", text)
    assert code == 0
    summary = json.loads((out / "dynamics_summary.json").read_text())
    assert summary["fidelity"] > 0.99
    assert summary["period"] == pytest.approx(3.1416 / summary["geff"], rel=0.01)
    header = (out / "dynamics.csv").read_text().splitlines()[0]
    assert header == "t,n_magnon,p_q1,p_q2,p_q3,p_eee,fidelity"


def test_pert_command(tmp_path):
    code, out = run(tmp_path, "pert", (CONFIGS / "pert.ini").read_text())
    assert code == 0
    rec = json.loads((out / "pert.json").read_text())
    assert rec["total"] == pytest.approx(0.84375e-5)
    assert rec["g5"] == pytest.approx(1.40625e-5)
    assert rec["g3"] == 0.0
    assert set(rec["g5_families"]) == {"5a_5c", "5b_5d", "5e", "5f", "5g"}


def test_pert_singular_denominator(tmp_path):
    text = (CONFIGS / "pert.ini").read_text().replace("omega0 = 3 wq", "omega0 = 1 wq")
    code, _ = run(tmp_path, "pert", text)
    assert code == 4


def test_fit_command(tmp_path):
    text = SMALL_MODEL.replace("n_max = 6", "n_max = 8") + \
        "[run]\ngr_grid = 0.08 wq, 0.1 wq, 0.12 wq\ngcr_grid = 0.08 wq, 0.1 wq, 0.12 wq\n"
    code, out = run(tmp_path, "fit", text)
    assert code == 0
    rec = json.loads((out / "fit.json").read_text())
    assert 1.0 < rec["c1"] < 1.3 and -0.4 < rec["c2"] < -0.2
    assert len(rec["points"]) == 9


def test_estimate_command(tmp_path):
    code, out = run(tmp_path, "estimate", (CONFIGS / "estimate_interface.ini").read_text())
    assert code == 0
    rec = json.loads((out / "estimate.json").read_text())
    assert rec["g_over_j_int"] == pytest.approx(0.00447, rel=0.01)
    assert rec["omega0"] > 0 and rec["single_mode_ok"] in (True, False)


def test_unstable_material_exits_3(tmp_path):
    text = (CONFIGS / "estimate_interface.ini").read_text().replace("k_x = 0.02 meV", "k_x = -5 meV")
    code, _ = run(tmp_path, "estimate", text)
    assert code == 3


def test_malformed_value_names_the_key(tmp_path, capsys):
    code, _ = run(tmp_path, "pert", (CONFIGS / "pert.ini").read_text().replace("g_r = 0.1 wq", "g_r = fast"))
    assert code == 2
    assert "g_r" in capsys.readouterr().err


def test_unknown_key_rejected(tmp_path, capsys):
    code, _ = run(tmp_path, "pert", (CONFIGS / "pert.ini").read_text() + "colour = blue\n")
    assert code == 2
    assert "colour" in capsys.readouterr().err


def test_missing_unit_rejected(tmp_path):
    code, _ = run(tmp_path, "pert", (CONFIGS / "pert.ini").read_text().replace("g_cr = 0.1 wq", "g_cr = 0.1"))
    assert code == 2


def test_window_without_crossing_exits_4(tmp_path):
    text = SMALL_MODEL + """
[run]
omega0_min = 2.5 wq
omega0_max = 2.7 wq
n_points = 3
n_levels = 4
check = false

[gap:none]
window = 2.5 wq, 2.7 wq
"""
    code, _ = run(tmp_path, "spectrum", text)
    assert code == 4


def test_stdout_when_no_out_dir(tmp_path, capsys):
    cfg = write(tmp_path, (CONFIGS / "pert.ini").read_text())
    assert main(["pert", "--config", cfg]) == 0
    assert json.loads(capsys.readouterr().out)["omega0"] == 3.0


def test_pert_zero_tuning(tmp_path):
    text = (CONFIGS / "pert.ini").read_text().replace("g_cr = 0.1 wq", "g_cr = 0.2 wq")
    code, out = run(tmp_path, "pert", text)
    assert code == 0
    assert abs(json.loads((out / "pert.json").read_text())["total"]) < 1e-18


def test_dynamics_without_coupling_is_constant(tmp_path):
    text = SMALL_MODEL.replace("0.1 wq", "0 wq") + "[run]\nomega0 = 3 wq\nn_points = 64\n"
    code, out = run(tmp_path, "dynamics", text)
    assert code == 0
    rows = [line.split(",") for line in (out / "dynamics.csv").read_text().splitlines()[1:]]
    for col in range(1, 7):
        values = [float(r[col]) for r in rows]
        assert max(values) - min(values) < 1e-12
    assert json.loads((out / "dynamics_summary.json").read_text())["period"] is None


def test_estimate_without_in_plane_anisotropy_has_no_squeezing(tmp_path):
    text = (CONFIGS / "estimate_interface.ini").read_text().replace("k_y = 0 meV", "k_y = 0.02 meV")
    code, out = run(tmp_path, "estimate", text)
    assert code == 0
    rec = json.loads((out / "estimate.json").read_text())
    assert rec["b"] == 0.0 and rec["r"] == 0.0 and rec["g_cr"] == 0.0
