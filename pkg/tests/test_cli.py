"""Command-line interface: tables, verification suites, runs, reproducibility."""
import json

import pytest

from shearwaves.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_coeffs_table(capsys):
    assert run_cli("coeffs", "--A", "1.5") == 0
    out = capsys.readouterr().out
    assert "model coefficients" in out
    assert "identities" in out
    assert "FAIL" not in out
    # spot values surface in the table
    assert "1.3999999999999999" in out or "1.4 " in out


def test_coeffs_json(capsys):
    assert run_cli("coeffs", "--A", "0", "--json") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["model"]["c"] == 1.0
    assert payload["model"]["omega1"] == 0.0
    assert payload["general"]["beta2"] == -1.0
    assert all(chk["passed"] for chk in payload["identities"])


def test_coeffs_sweep_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run_cli("coeffs", "--sweep", "1e-3:10:100", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 101
    assert lines[0].startswith("A,c,alpha,beta,beta0")
    assert all(row.split(",")[-2] == "1" for row in lines[1:])


def test_coeffs_sweep_rejects_bad_range(capsys):
    assert run_cli("coeffs", "--sweep", "10:1:5") == 2


def test_verify_default_passes(capsys):
    assert run_cli("verify") == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "helmholtz_kernel_quadrature" in out
    assert "rescale_single_factor" in out
    assert "besov_reconstruction" in out


def test_verify_only_filter(capsys):
    assert run_cli("verify", "--only", "besov") == 0
    out = capsys.readouterr().out
    assert "besov_exact_inequalities" in out
    assert "helmholtz_kernel_quadrature" not in out
    assert run_cli("verify", "--only", "nonsense") == 2


def test_verify_fault_injection_names_failing_check(tmp_path, capsys):
    report = tmp_path / "report.json"
    code = run_cli("verify", "--only", "form_equivalence",
                   "--inject-fault", "beta3", "--json", str(report))
    assert code == 1
    err = capsys.readouterr().err
    assert "form_equivalence" in err
    entries = json.loads(report.read_text())
    assert any(not e["pass"] for e in entries)
    assert {"check", "n", "L", "residual", "tolerance", "pass"} <= set(entries[0])


def test_verify_fault_unknown_field(capsys):
    assert run_cli("verify", "--inject-fault", "nope") == 2


def _write_config(path, **overrides):
    cfg = {
        "schema_version": 1,
        "n": 128,
        "length": 40.0,
        "t_end": 0.2,
        "dt": 0.002,
        "dealias": "two_thirds",
        "snapshot_stride": 20,
        "vorticity": 1.5,
        "initial": "sech2",
        "amplitude": 0.25,
        "width": 1.0,
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return cfg


def test_simulate_run_directory(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    _write_config(cfg_path)
    outdir = tmp_path / "out"
    assert run_cli("simulate", str(cfg_path), "--out", str(outdir)) == 0
    assert (outdir / "diagnostics.csv").exists()
    assert (outdir / "manifest.json").exists()
    assert (outdir / "plot.gnuplot").exists()
    assert (outdir / "snapshots" / "final.csv").exists()
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["termination"] == "completed"
    assert manifest["provenance"] == {"vorticity": 1.5}
    assert "dispersion_note" in manifest
    header = (outdir / "diagnostics.csv").read_text().splitlines()[0]
    assert header == "t,sup_u,min_ux,max_ux,h1,hs,breaking_integral,ch_energy"


def test_simulate_zero_initial_data(tmp_path):
    cfg_path = tmp_path / "zero.json"
    _write_config(cfg_path, initial="zero")
    outdir = tmp_path / "out"
    assert run_cli("simulate", str(cfg_path), "--out", str(outdir)) == 0
    rows = (outdir / "diagnostics.csv").read_text().splitlines()[1:]
    for row in rows:
        assert all(float(v) == 0.0 for v in row.split(",")[1:])


def test_simulate_deterministic_bytes(tmp_path):
    cfg_path = tmp_path / "run.json"
    _write_config(cfg_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli("simulate", str(cfg_path), "--out", str(out1)) == 0
    assert run_cli("simulate", str(cfg_path), "--out", str(out2)) == 0
    assert (out1 / "diagnostics.csv").read_bytes() == (out2 / "diagnostics.csv").read_bytes()
    assert ((out1 / "snapshots" / "final.csv").read_bytes()
            == (out2 / "snapshots" / "final.csv").read_bytes())


def test_simulate_explicit_coefficients(tmp_path):
    cfg_path = tmp_path / "explicit.json"
    coeffs = {"alpha1": 0.0, "alpha2": 1.0, "alpha3": 0.0, "beta1": 0.0,
              "beta2": -1.0, "beta3": 0.0, "beta4": 0.0, "beta5": 0.0,
              "beta6": 0.0, "beta7": -0.5, "beta8": 0.0, "gamma": 0.0}
    _write_config(cfg_path, coefficients=coeffs)
    cfg = json.loads(cfg_path.read_text())
    del cfg["vorticity"]
    cfg_path.write_text(json.dumps(cfg))
    outdir = tmp_path / "out"
    assert run_cli("simulate", str(cfg_path), "--out", str(outdir)) == 0
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["provenance"] == {"explicit_coefficients": True}


def test_simulate_breaking_flag_in_manifest(tmp_path):
    cfg_path = tmp_path / "steep.json"
    _write_config(cfg_path, n=1024, t_end=14.0, initial="sine", amplitude=-1.5,
                  mode=1, snapshot_stride=10, breaking_stop=-2.827433388230814,
                  cfl=0.3, dt=None)
    cfg = json.loads(cfg_path.read_text())
    del cfg["dt"]
    cfg_path.write_text(json.dumps(cfg))
    outdir = tmp_path / "out"
    assert run_cli("simulate", str(cfg_path), "--out", str(outdir)) == 0
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["termination"] == "breaking_detected"
    assert manifest["breaking_verdict"] == "breaking_signature"


@pytest.mark.parametrize("mutate, message_part", [
    (lambda c: c.pop("length"), "length"),
    (lambda c: c.update(n=15), "grid size"),
    (lambda c: c.update(initial="vortex"), "initial condition"),
    (lambda c: c.update(dealias="hard"), "'dealias'"),
    (lambda c: c.update(schema_version=99), "schema_version"),
    (lambda c: c.pop("vorticity"), "vorticity"),
])
def test_simulate_config_errors(tmp_path, capsys, mutate, message_part):
    cfg_path = tmp_path / "bad.json"
    cfg = _write_config(cfg_path)
    mutate(cfg)
    cfg_path.write_text(json.dumps(cfg))
    assert run_cli("simulate", str(cfg_path)) == 2
    assert message_part in capsys.readouterr().err


def test_simulate_malformed_json(tmp_path, capsys):
    cfg_path = tmp_path / "broken.json"
    cfg_path.write_text("{ not json")
    assert run_cli("simulate", str(cfg_path)) == 2
    assert "line" in capsys.readouterr().err


def test_output_root_env(tmp_path, monkeypatch):
    cfg_path = tmp_path / "run.json"
    _write_config(cfg_path, n=64, t_end=0.05, snapshot_stride=5)
    monkeypatch.setenv("SHEARWAVES_OUTPUT_ROOT", str(tmp_path / "root"))
    assert run_cli("simulate", str(cfg_path)) == 0
    assert (tmp_path / "root" / "run" / "diagnostics.csv").exists()


def test_convergence_command(tmp_path, capsys):
    report = tmp_path / "conv.json"
    assert run_cli("convergence", "--json", str(report)) == 0
    payload = json.loads(report.read_text())
    assert payload["temporal_order"] >= 3.8
    assert payload["spatial_ratio"] > 1e3
    out = capsys.readouterr().out
    assert "temporal Richardson order" in out
    assert "spatial error ratio" in out
