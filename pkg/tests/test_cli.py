"""Command-line interface: config handling, exports, manifests, validate."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os

import numpy as np
import pytest

import foldoptics.cli as cli
from foldoptics.cli import ConfigError, CriterionResult, RunConfig, main, merge_config


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


def sha256(path):
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


# -- configuration ----------------------------------------------------------


def test_config_file_overrides_defaults_and_flags_win(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        "# airy run\nepsilon = 0.07\nnx = 12   # inline comment\n\nformat=json\n"
    )
    rc = main(
        ["field", "--config", str(cfg_file), "--nx", "16", "--out", str(tmp_path / "o")]
    )
    assert rc == 0
    manifest = json.loads((tmp_path / "o" / "field_manifest.json").read_text())
    assert manifest["config"]["epsilon"] == 0.07
    assert manifest["config"]["nx"] == 16
    assert manifest["config"]["formats"] == ["json"]
    assert not (tmp_path / "o" / "field.csv").exists()
    assert (tmp_path / "o" / "field.json").exists()


@pytest.mark.parametrize(
    "line, field",
    [
        ("epsilon 0.1", "config"),
        ("epsilon=abc", "epsilon"),
        ("nx=2.5", "nx"),
        ("wavelength=3", "wavelength"),
    ],
)
def test_config_file_diagnostics_name_the_field(tmp_path, capsys, line, field):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text(line + "\n")
    rc = main(["field", "--config", str(cfg_file), "--out", str(tmp_path)])
    assert rc == 2
    assert f"usage error: {field}:" in capsys.readouterr().err


def test_missing_config_file_is_a_usage_error(tmp_path, capsys):
    rc = main(["field", "--config", str(tmp_path / "absent.cfg")])
    assert rc == 2
    assert "usage error: config:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv, field",
    [
        (["wigner", "--epsilon", "-0.1"], "epsilon"),
        (["wigner", "--nx", "4"], "nx"),
        (["wigner", "--xmin", "2.0", "--xmax", "1.0"], "xmin"),
        (["rays", "--scenario", "bogus"], "scenario"),
        (["wigner", "--taper-fraction", "0.7"], "taper_fraction"),
        (["wigner", "--format", "csv,yaml"], "format"),
        (["wigner", "--scenario", "linear_layer"], "scenario"),
        (["wigner", "--xmin", "-0.5", "--xmax", "1.0"], "xmin"),
    ],
)
def test_invariant_violations_exit_2_with_field_name(capsys, argv, field):
    rc = main(argv + ["--out", "/tmp/never-written"])
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith(f"usage error: {field}:")
    assert not os.path.exists("/tmp/never-written")


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["rays", "--no-such-flag"])
    assert exc.value.code == 2


def test_run_config_validate_direct():
    cfg = RunConfig(sigma_samples=6)
    with pytest.raises(ConfigError) as exc:
        cfg.validate()
    assert exc.value.field == "sigma_samples"


# -- rays -------------------------------------------------------------------


def test_rays_airy_outputs_and_caustic(tmp_path):
    out = tmp_path / "rays"
    assert main(["rays", "--out", str(out), "--nt", "64", "--x0", "2.0"]) == 0
    header, rows = read_csv(out / "rays.csv")
    assert header == ["ray_id", "t", "x", "k", "jacobian"]
    assert len(rows) == 2 * 64
    # the down ray's Jacobian vanishes at the fold time t = 2 sqrt(x0)
    _, c_rows = read_csv(out / "caustics.csv")
    t_c, x_c = float(c_rows[0][1]), float(c_rows[0][2])
    assert abs(t_c - 2.0 * math.sqrt(2.0)) < 1e-6
    assert abs(x_c) < 1e-6


def test_rays_layer_caustic_depth(tmp_path):
    out = tmp_path / "layer"
    rc = main(
        ["rays", "--scenario", "linear_layer", "--out", str(out),
         "--mu0", "1.0", "--mu1", "2.0", "--h", "1.0", "--psi", "0.35"]
    )
    assert rc == 0
    _, c_rows = read_csv(out / "caustics.csv")
    eta0 = math.sqrt(1.0 + 2.0 * 1.0)
    depth = 1.0 - (eta0 * math.cos(0.35)) ** 2 / 2.0
    assert float(c_rows[0][4]) == depth
    assert abs(float(c_rows[0][3]) - depth) < 1e-12


# -- field ------------------------------------------------------------------


def test_field_airy_columns(tmp_path):
    out = tmp_path / "field"
    rc = main(
        ["field", "--out", str(out), "--nx", "16", "--xmin", "0.2", "--xmax", "2.5"]
    )
    assert rc == 0
    header, rows = read_csv(out / "field.csv")
    assert header[:3] == ["x", "wkb_re", "wkb_im"]
    assert len(rows) == 16
    # beyond the source the two-branch field is not defined, the rest are
    last = rows[-1]
    assert last[1] == "nan"
    assert all(math.isfinite(float(v)) for v in last[5:])


def test_field_layer_masks_shadow(tmp_path):
    out = tmp_path / "field"
    rc = main(
        ["field", "--scenario", "linear_layer", "--out", str(out),
         "--xmin", "-0.5", "--xmax", "1.0", "--nx", "31"]
    )
    assert rc == 0
    header, rows = read_csv(out / "field.csv")
    assert header == ["z", "s_plus", "s_minus", "phi", "rho"]
    depth = 1.0 - (math.sqrt(3.0) * math.cos(0.35)) ** 2 / 2.0
    for row in rows:
        z = float(row[0])
        finite = math.isfinite(float(row[1]))
        assert finite == (depth <= z <= 1.0)


# -- wigner -----------------------------------------------------------------


def test_wigner_row_count_and_identity_columns(tmp_path):
    out = tmp_path / "wig"
    rc = main(["wigner", "--out", str(out), "--nx", "12", "--nk", "9",
               "--sigma-samples", "512"])
    assert rc == 0
    header, rows = read_csv(out / "wigner.csv")
    assert len(rows) == 12 * 9
    cols = {name: i for i, name in enumerate(header)}
    for row in rows:
        assert row[cols["region"]] in (
            "Exterior", "OnManifold", "Between", "OnConjugate", "Interior"
        )
        assert int(row[cols["n_stationary"]]) in (0, 1, 2)
        diff = abs(float(row[cols["w_exact"]]) - float(row[cols["w_combined"]]))
        assert diff <= 1e-12


def test_wigner_undersampling_is_usage_error(tmp_path, capsys):
    rc = main(["wigner", "--out", str(tmp_path), "--sigma-samples", "16"])
    assert rc == 2
    assert "usage error: sigma_samples:" in capsys.readouterr().err


def test_wigner_numeric_column_tracks_exact(tmp_path):
    out = tmp_path / "wig"
    rc = main(["wigner", "--out", str(out), "--nx", "10", "--nk", "17",
               "--xmin", "0.4", "--xmax", "1.6", "--kmin", "-1.4",
               "--kmax", "1.4", "--sigma-samples", "1024"])
    assert rc == 0
    header, rows = read_csv(out / "wigner.csv")
    cols = {name: i for i, name in enumerate(header)}
    w = np.array([float(r[cols["w_exact"]]) for r in rows])
    d = np.array([float(r[cols["diff_numeric"]]) for r in rows])
    assert np.max(np.abs(d)) <= 5e-3 * np.max(np.abs(w))


# -- manifests and determinism ----------------------------------------------


def test_manifest_checksums_match_files(tmp_path):
    out = tmp_path / "m"
    assert main(["wigner", "--out", str(out), "--nx", "8", "--nk", "8",
                 "--sigma-samples", "256", "--format", "csv,json"]) == 0
    manifest = json.loads((out / "wigner_manifest.json").read_text())
    assert manifest["version"]
    assert manifest["duration_seconds"] >= 0.0
    names = {o["path"] for o in manifest["outputs"]}
    assert names == {"wigner.csv", "wigner.json"}
    for entry in manifest["outputs"]:
        assert sha256(out / entry["path"]) == entry["sha256"]
        assert entry["rows"] == 64
    assert not list(out.glob("*.tmp"))


def test_identical_configs_are_byte_identical(tmp_path):
    argv = ["wigner", "--nx", "9", "--nk", "11", "--sigma-samples", "512",
            "--format", "csv,json"]
    digests = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(argv + ["--out", str(out)]) == 0
        digests.append((sha256(out / "wigner.csv"), sha256(out / "wigner.json")))
    assert digests[0] == digests[1]


def test_csv_cells_carry_full_precision(tmp_path):
    out = tmp_path / "prec"
    assert main(["field", "--out", str(out), "--nx", "8",
                 "--xmin", "0.1", "--xmax", "0.9"]) == 0
    with open(out / "field.csv", "rb") as f:
        data = f.read()
    assert b"\r" not in data
    _, rows = read_csv(out / "field.csv")
    assert rows[0][0] == "0.10000000000000001"


# -- validate ---------------------------------------------------------------


def test_validate_reports_and_exits_zero(tmp_path, capsys):
    rc = main(["validate", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("pass") == 11
    report = json.loads((tmp_path / "validate_report.json").read_text())
    assert report["all_passed"] is True
    assert [c["id"] for c in report["criteria"]] == list(range(1, 12))
    assert all(c["passed"] for c in report["criteria"])


def test_validate_failure_exits_one(tmp_path, monkeypatch, capsys):
    forced = lambda: CriterionResult(1, "forced failure", False, 1.0, 0.5)
    monkeypatch.setattr(cli, "_CHECKS", (forced,))
    rc = main(["validate", "--out", str(tmp_path)])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out
    report = json.loads((tmp_path / "validate_report.json").read_text())
    assert report["all_passed"] is False


def test_validate_survives_a_crashing_check(monkeypatch):
    def boom():
        raise RuntimeError("probe")

    monkeypatch.setattr(cli, "_CHECKS", (boom,))
    results = cli.run_validation()
    assert len(results) == 1
    assert not results[0].passed
    assert "probe" in results[0].detail
