"""Command-line front end: outputs, determinism, exit codes."""

import hashlib

import numpy as np
import pytest

from qduality import load_map, synth_letter_object, save_map
from qduality.cli import main

# golden checksum for the frozen scan command below, generated once by this
# implementation (balanced fully coherent state, N = 1e5, 24 points); pinned
# to numpy's Philox/Poisson streams, regenerate alongside a numpy major bump
SCAN_GOLDEN_SHA256 = "401eae828b438601e5c5c52b519026232935fa8f53ea031b7cc6acdafc9d7faf"


def test_demo_ellipse_loci(tmp_path):
    out = tmp_path / "loci.csv"
    assert main(["demo-ellipse", "--out", str(out), "--no-fig"]) == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    assert rows.shape == (3 * 201, 4)
    for eta in (0.0, 0.2, 0.5):
        locus = rows[np.isclose(rows[:, 0], eta)]
        d, v = locus[:, 2], locus[:, 3]
        # semi-minor axis (max V) equals 1 - eta; points satisfy the ellipse
        assert abs(v.max() - (1.0 - eta)) < 1e-9
        np.testing.assert_allclose((v / (1.0 - eta)) ** 2 + d ** 2, 1.0, atol=1e-12)
    # eta = 0 locus is the unit circle
    circle = rows[np.isclose(rows[:, 0], 0.0)]
    np.testing.assert_allclose(circle[:, 3] ** 2 + circle[:, 2] ** 2, 1.0, atol=1e-12)


def test_demo_ellipse_renders_figure(tmp_path):
    out = tmp_path / "loci.csv"
    assert main(["demo-ellipse", "--out", str(out)]) == 0
    assert (tmp_path / "loci.png").exists()


def test_demo_ellipse_rejects_bad_eta(tmp_path, capsys):
    rc = main(["demo-ellipse", "--etas", "1.0", "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "usage error" in capsys.readouterr().err


def test_scan_golden_checksum(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["scan", "--p1", "0.5", "--gamma", "1.0", "--photons", "100000",
               "--grid-size", "24", "--seed", "20260810", "--out", str(out)])
    assert rc == 0
    assert hashlib.sha256(out.read_bytes()).hexdigest() == SCAN_GOLDEN_SHA256


def test_scan_reruns_byte_identical(tmp_path):
    args = ["scan", "--p1", "0.7", "--gamma", "0.8", "--photons", "5000",
            "--seed", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_calibrate_noiseless_prints_product(capsys):
    rc = main(["calibrate", "--gamma", "0.95", "--alpha", "0.9", "--noiseless",
               "--seed", "1"])
    assert rc == 0
    printed = float(capsys.readouterr().out.strip())
    assert printed == pytest.approx(0.855, abs=1e-12)


def test_calibrate_writes_key_value_file(tmp_path):
    out = tmp_path / "cal.txt"
    rc = main(["calibrate", "--gamma", "0.9", "--photons", "50000", "--seed", "2",
               "--out", str(out)])
    assert rc == 0
    entries = dict(line.split("=") for line in out.read_text().strip().splitlines())
    assert 0.0 < float(entries["alpha_gamma_hat"]) <= 1.0
    assert int(entries["photons_used"]) > 0


def test_synth_then_reconstruct_noiseless_round_trip(tmp_path):
    obj = tmp_path / "s.pgm"
    assert main(["synth", "--glyph", "S", "--width", "24", "--height", "24",
                 "--out", str(obj)]) == 0
    run_dir = tmp_path / "run"
    rc = main(["reconstruct", "--object", str(obj), "--gamma", "0.95",
               "--alpha", "0.9", "--noiseless", "--budget", "100", "--seed", "0",
               "--out-dir", str(run_dir), "--no-fig"])
    assert rc == 0
    truth = load_map(obj)
    recon = load_map(run_dir / "reconstruction.pgm")
    # noiseless inversion is exact up to the PGM quantization on both ends
    assert np.max(np.abs(recon.values - truth.values)) <= 1.0 / 255 + 1e-6


def test_reconstruct_outputs_and_determinism(tmp_path):
    obj = tmp_path / "o.csv"
    save_map(synth_letter_object(16, 16, "O", 2.0), obj, fmt="csv")
    dirs = [tmp_path / "r1", tmp_path / "r2"]
    for d, workers in zip(dirs, ("0", "3")):
        rc = main(["reconstruct", "--object", str(obj), "--budget", "500",
                   "--seed", "77", "--out-dir", str(d), "--workers", workers])
        assert rc == 0
    names = sorted(p.name for p in dirs[0].iterdir())
    assert names == ["ellipticity.csv", "overview.png", "predictability.csv",
                     "reconstruction.csv", "reconstruction.pgm", "report.txt",
                     "truth.csv", "visibility.csv"]
    for name in names:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes(), name


def test_report_command_summarizes_run(tmp_path, capsys):
    obj = tmp_path / "o.csv"
    save_map(synth_letter_object(16, 16, "I", 2.0), obj, fmt="csv")
    run_dir = tmp_path / "run"
    assert main(["reconstruct", "--object", str(obj), "--budget", "200",
                 "--seed", "5", "--out-dir", str(run_dir), "--no-fig"]) == 0
    capsys.readouterr()
    assert main(["report", "--run-dir", str(run_dir)]) == 0
    out = capsys.readouterr().out
    assert "rmse=" in out and "master_seed=5" in out
    assert (run_dir / "overview.png").exists()  # re-rendered by report


def test_config_file_supplies_defaults_flags_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("gamma=0.95\nalpha=0.9\nnoiseless=true\nseed=1\n")
    rc = main(["calibrate", "--config", str(cfg)])
    assert rc == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(0.855, abs=1e-12)
    # explicit flag wins over the file value
    rc = main(["calibrate", "--config", str(cfg), "--alpha", "1.0"])
    assert rc == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(0.95, abs=1e-12)


@pytest.mark.parametrize("command,flag", [
    ("demo-ellipse", "--etas"),
    ("scan", "--photons"),
    ("calibrate", "--alpha"),
    ("synth", "--edge-softness"),
    ("reconstruct", "--budget"),
    ("report", "--run-dir"),
])
def test_help_documents_flags(command, flag, capsys):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    assert flag in capsys.readouterr().out


# -----------------------------
# Exit codes
# -----------------------------

def test_unknown_flag_exits_1(tmp_path, capsys):
    rc = main(["scan", "--bogus", "1", "--seed", "1", "--out", str(tmp_path / "x.csv")])
    assert rc == 1


def test_unknown_command_exits_1(capsys):
    assert main(["frobnicate"]) == 1


def test_missing_seed_exits_1(tmp_path, capsys):
    rc = main(["scan", "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "seed" in capsys.readouterr().err


def test_out_of_range_parameter_exits_1(tmp_path, capsys):
    rc = main(["scan", "--p1", "1.5", "--seed", "1", "--out", str(tmp_path / "x.csv")])
    assert rc == 1


def test_malformed_map_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n4 4\n255\n\x00")
    rc = main(["reconstruct", "--object", str(bad), "--budget", "10", "--seed", "1",
               "--out-dir", str(tmp_path / "r")])
    assert rc == 2
    assert "data error" in capsys.readouterr().err


def test_singular_predictability_exits_3(tmp_path, capsys):
    rc = main(["calibrate", "--p1", "1.0", "--noiseless", "--seed", "1"])
    assert rc == 3
    assert "physics error" in capsys.readouterr().err
