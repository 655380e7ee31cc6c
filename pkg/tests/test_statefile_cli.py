import json

import numpy as np
import pytest

from qsteer.cli import main
from qsteer.errors import NotPSD, ValidationError, WrongDimension
from qsteer.qcore import validate_density
from qsteer.rand import random_density_matrix, random_product, random_two_qubit
from qsteer.statefile import load_state, save_state, state_from_dict, state_to_dict
from qsteer.states import damped_classical_msc, rho_p


def test_round_trip_exact(rng, tmp_path):
    for dims in ((2, 2), (2, 3), (4,)):
        st = random_density_matrix(rng, dims)
        path = tmp_path / "state.json"
        save_state(st, path)
        back = load_state(path)
        assert back.dims == st.dims
        assert np.abs(back.matrix - st.matrix).max() == 0.0


def test_dict_round_trip(rng):
    st = random_two_qubit(rng)
    back = state_from_dict(state_to_dict(st))
    assert np.abs(back.matrix - st.matrix).max() <= 1e-12


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        load_state(path)
    path.write_text(json.dumps({"dims": [2], "matrix": [[1, 2], [3, 4]]}))
    with pytest.raises(WrongDimension):
        load_state(path)


def test_load_rejects_unphysical(tmp_path):
    doc = {"dims": [2], "matrix": [[[1.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(NotPSD):
        load_state(path)


def test_cli_msc_werner(capsys):
    assert main(["msc", "--family", "werner", "--p", "0.7"]) == 0
    out = capsys.readouterr().out
    assert "msc value:          0.700000" in out
    assert "degenerate branch:  yes" in out


def test_cli_msc_classical(capsys):
    assert main(["msc", "--family", "classical-c", "--t", "0.75"]) == 0
    out = capsys.readouterr().out
    assert "msc value:          0.000000000" in out


def test_cli_msc_from_file(tmp_path, capsys):
    path = tmp_path / "state.json"
    save_state(rho_p(0.5, np.pi / 2).state, path)
    assert main(["msc", str(path)]) == 0
    assert "msc value:          0.500000" in capsys.readouterr().out


def test_cli_gen_then_msc_round_trip(tmp_path, capsys):
    path = tmp_path / "gen.json"
    assert main(["gen", "--family", "rho-p", "--p", "0.5", "--theta", "0.5pi", "--out", str(path)]) == 0
    capsys.readouterr()
    assert main(["msc", str(path)]) == 0
    assert "0.500000" in capsys.readouterr().out


def test_cli_qse_obese(capsys):
    assert main(["qse", "--family", "obese", "--b", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "center:    (0.000000000, 0.000000000, 0.500000000)" in out
    assert f"semiaxes:  ({np.sqrt(0.5):.9f}, {np.sqrt(0.5):.9f}, 0.500000000)" in out


def test_cli_qse_werner(capsys):
    assert main(["qse", "--family", "werner", "--p", "0.3"]) == 0
    out = capsys.readouterr().out
    assert "semiaxes:  (0.300000000, 0.300000000, 0.300000000)" in out
    assert "center:    (0.000000000, 0.000000000, 0.000000000)" in out


def test_cli_qse_product_state(tmp_path, capsys, rng):
    path = tmp_path / "product.json"
    save_state(random_product(rng), path)
    assert main(["qse", str(path)]) == 0
    out = capsys.readouterr().out
    assert "semiaxes:  (0.000000000, 0.000000000, 0.000000000)" in out


def test_cli_sweep_matches_closed_form(capsys):
    assert main(["sweep", "--family", "classical-c", "--t", "0.75", "--grid", "21"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0] == "gamma,msc"
    gammas, vals = [], []
    for row in lines[1:]:
        g, v = row.split(",")
        gammas.append(float(g))
        vals.append(float(v))
    assert gammas == sorted(gammas)
    assert len(gammas) == 21
    for g, v in zip(gammas, vals):
        assert v == pytest.approx(damped_classical_msc(0.75, g), abs=1e-6)
    assert vals[0] == pytest.approx(0.0, abs=1e-9)
    assert vals[-1] == pytest.approx(0.0, abs=1e-9)


def test_cli_sweep_deterministic_to_file(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (p1, p2):
        assert main(["sweep", "--family", "rho-p", "--p", "0.5", "--theta", "0.1pi",
                     "--grid", "11", "--out", str(p)]) == 0
    b1, b2 = p1.read_bytes(), p2.read_bytes()
    assert b1 == b2
    assert b"\r" not in b1
    assert b1.startswith(b"gamma,msc\n")


def test_cli_sweep_gain_exists(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["sweep", "--family", "rho-p", "--p", "0.5", "--theta", "0.1pi",
                 "--grid", "41", "--out", str(out)]) == 0
    rows = out.read_text().strip().split("\n")[1:]
    vals = [float(r.split(",")[1]) for r in rows]
    assert max(vals) > vals[0] + 1e-4


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["msc", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dims": [2], "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}))
    assert main(["msc", str(bad)]) == 2
    assert main(["msc", "--family", "werner"]) == 2  # missing --p
    assert main(["msc"]) == 2  # no input at all
    assert main(["qse", "--family", "werner", "--p", "2.0"]) == 2
    capsys.readouterr()


def test_cli_nonconvergence_exit_code(monkeypatch, capsys):
    import dataclasses

    import qsteer.cli as cli

    real = cli.msc_two_qubit

    def fake(state, opts):
        return dataclasses.replace(real(state, opts), converged=False)

    monkeypatch.setattr(cli, "msc_two_qubit", fake)
    assert main(["msc", "--family", "werner", "--p", "0.5"]) == 3
    capsys.readouterr()


def test_cli_verify_single_check(capsys):
    assert main(["verify", "--only", "fig2-ratios"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS fig2-ratios")
    assert "0.98" in out


def test_cli_verify_failure_exit_code(monkeypatch, capsys):
    import qsteer.verify as verify

    def failing(seed=0):
        return verify.CheckResult("fig2-ratios", False, 1.0, ["forced failure"])

    monkeypatch.setitem(verify.CHECKS, "fig2-ratios", failing)
    assert main(["verify", "--only", "fig2-ratios"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_gen_stdout(capsys):
    assert main(["gen", "--family", "werner", "--p", "0.4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    st = validate_density(
        np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]]), doc["dims"]
    )
    assert st.dims == (2, 2)
