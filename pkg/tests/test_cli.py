import json
import subprocess
import sys

import numpy as np
import pytest

from mwhomodyne.cli import main
from mwhomodyne.config import ConfigError, parse_config, validate_config_dict
from mwhomodyne.runner import run_scenario
from mwhomodyne.units import InternalUnits, SODIUM_MASS
from mwhomodyne.validate import validate

FIG2_TRAP = {
    "omega_x_hz": 325.0, "omega_y_hz": 325.0, "omega_z_hz": 325.0,
    "mass_kg": 3.8175410074896821e-26, "n_atoms": 1e6,
    "a_s_m": 2.9104746579926205e-09,
}


def two_bec_doc(**overrides):
    doc = {
        "kind": "two_bec",
        "params": {
            "trap": dict(FIG2_TRAP),
            "d_over_rx": 5.0,
            "v_q_m_per_s": 0.06,
            "delta_mu_rad_per_s": 2 * np.pi * 1e3,
            "times": {"n_periods": 1.5, "n_points": 30},
        },
    }
    doc["params"].update(overrides)
    return doc


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_parse_minimal_fig2_config(tmp_path):
    cfg = parse_config(write_config(tmp_path, two_bec_doc()))
    assert cfg.kind == "two_bec"
    assert cfg.params["d_over_rx"] == 5.0


def test_config_rejects_bad_separation(tmp_path):
    doc = two_bec_doc(d_over_rx=-1.0)
    with pytest.raises(ConfigError) as err:
        parse_config(write_config(tmp_path, doc))
    assert any("d_over_rx" in v for v in err.value.violations)


def test_config_unknown_kind():
    with pytest.raises(ConfigError) as err:
        validate_config_dict({"kind": "bogus"})
    msg = err.value.violations[0]
    for kind in ("two_bec", "thermometry", "lattice", "correlation"):
        assert kind in msg


def test_config_collects_all_violations():
    doc = {"kind": "two_bec", "params": {"trap": {}, "d_over_rx": -2.0}}
    with pytest.raises(ConfigError) as err:
        validate_config_dict(doc)
    assert len(err.value.violations) >= 4


def test_config_rejects_hz_and_rad_together():
    doc = two_bec_doc()
    doc["params"]["trap"]["omega_x_rad_per_s"] = 2042.0
    with pytest.raises(ConfigError) as err:
        validate_config_dict(doc)
    assert any("omega_x" in v for v in err.value.violations)


def test_unit_round_trip():
    u = InternalUnits(length=9.56e-6, mass=SODIUM_MASS)
    for value, into, outof in [
            (0.06, u.velocity_in, u.velocity_out),
            (1.7e-3, u.time_in, u.time_out),
            (6283.0, u.frequency_in, u.frequency_out),
            (2.2e6, u.wavevector_in, u.wavevector_out),
            (4.8e-5, u.length_in, u.length_out)]:
        assert outof(into(value)) == pytest.approx(value, rel=1e-12)


def test_two_bec_run_schema_and_determinism(tmp_path):
    cfg = validate_config_dict(two_bec_doc())
    out1 = run_scenario(cfg, threads=1)
    out2 = run_scenario(cfg, threads=1)
    assert out1.header == ["t_s", "F_B", "F_I", "F", "F_over_FB"]
    assert out1.to_csv() == out2.to_csv()
    rows = out1.rows
    assert np.all(np.isfinite(rows))
    assert np.allclose(rows[:, 3], rows[:, 1] + rows[:, 2], rtol=1e-12)


def test_cli_end_to_end_and_thread_independence(tmp_path):
    path = write_config(tmp_path, two_bec_doc())
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(["two-bec", "--config", str(path), "--out", str(out_a),
                 "--threads", "1"]) == 0
    assert main(["two-bec", "--config", str(path), "--out", str(out_b),
                 "--threads", "8"]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    header = [line for line in out_a.read_text().splitlines()
              if not line.startswith("#")][0]
    assert header == "t_s,F_B,F_I,F,F_over_FB"


def test_cli_method_closed_form(tmp_path):
    path = write_config(tmp_path, two_bec_doc())
    out = tmp_path / "cf.csv"
    assert main(["two-bec", "--config", str(path), "--out", str(out),
                 "--method", "closed-form"]) == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(lines) == 31


def test_cli_kind_mismatch(tmp_path):
    path = write_config(tmp_path, two_bec_doc())
    assert main(["lattice", "--config", str(path), "--out", "x.csv"]) == 2


def test_cli_bad_config_exit_code(tmp_path):
    path = write_config(tmp_path, two_bec_doc(d_over_rx=-1.0))
    assert main(["two-bec", "--config", str(path), "--out", "x.csv"]) == 2


def test_correlation_run(tmp_path):
    doc = {
        "kind": "correlation",
        "params": {
            "d_m": 2e-6, "mass_kg": 1.44316060484e-25,
            "model": "thermal_gaussian", "coherence_length_m": 2.4e-6,
            "k_tilde_d": 0.1, "q_dot_d": 2 * np.pi,
            "sweep": {"parameter": "delta_r_over_d",
                      "values": [0.125, 0.0625]},
        },
    }
    cfg = validate_config_dict(doc)
    out = run_scenario(cfg, threads=2)
    assert out.header == ["param", "visibility"]
    assert out.rows.shape == (2, 2)
    assert np.all(np.abs(out.rows[:, 1]) <= 1.0)


def test_correlation_closed_form_route(tmp_path):
    doc = {
        "kind": "correlation",
        "params": {
            "d_m": 2e-6, "mass_kg": 1.44316060484e-25,
            "model": "uniform", "k_tilde_d": 0.1,
            "method": "closed-form",
            "sweep": {"parameter": "q_dot_d",
                      "values": [np.pi, 2 * np.pi]},
        },
    }
    out = run_scenario(validate_config_dict(doc))
    assert out.rows[0, 1] == pytest.approx(-1.0, abs=1e-12)
    assert out.rows[1, 1] == pytest.approx(1.0, abs=1e-12)


def test_validate_fresh_build_passes():
    results = validate()
    assert all(r.passed for r in results), \
        "\n".join(r.line() for r in results if not r.passed)


def test_validate_detects_perturbed_bessel():
    results = validate(j2_offset=1e-3)
    failed = {r.name for r in results if not r.passed}
    assert any(name.startswith("parseval") for name in failed)


def test_validate_detects_perturbed_lobe():
    results = validate(lobe_offset=5e-3)
    failed = {r.name for r in results if not r.passed}
    assert "bose_hubbard_lobe" in failed


def test_cli_validate_subcommand():
    proc = subprocess.run([sys.executable, "-m", "mwhomodyne.cli", "validate"],
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0
    assert "checks passed" in proc.stdout
