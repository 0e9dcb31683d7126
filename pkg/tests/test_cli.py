import json
import subprocess
import sys
from pathlib import Path

import pytest

from mocshock.cli import main


def _run(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "mocshock", *args], capture_output=True, text=True, cwd=cwd
    )


def _read(path):
    return path.read_bytes()


def test_simulate_writes_artifacts(tmp_path):
    assert main(["simulate", "--preset", "uniform-electric-sphere", "--out", str(tmp_path)]) == 0
    head = (tmp_path / "characteristics.csv").read_text().splitlines()[0]
    assert head == "r0,t,R,V"
    snap = (tmp_path / "snapshots" / "snapshot_000.csv").read_text().splitlines()
    assert snap[0] == "# t=0.0" and snap[1] == "r,f,F,v"
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["command"] == "simulate" and man["shock"] is None
    assert len(man["snapshots"]) == 8


def test_characteristic_radii_increase_in_the_label(tmp_path):
    main(["simulate", "--preset", "uniform-electric-sphere", "--out", str(tmp_path)])
    rows = [list(map(float, line.split(","))) for line in (tmp_path / "characteristics.csv").read_text().splitlines()[1:]]
    by_time = {}
    for r0, t, R, _ in rows:
        by_time.setdefault(t, []).append((r0, R))
    for pairs in by_time.values():
        R = [b for _, b in sorted(pairs)]
        assert all(x < y for x, y in zip(R, R[1:]))


def test_simulate_is_byte_identical_on_rerun(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["simulate", "--preset", "lognormal-electric-sphere", "--out", str(out)]) == 0
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    assert files
    for rel in files:
        assert _read(a / rel) == _read(b / rel)


def test_lognormal_manifest_reports_the_shock(tmp_path):
    main(["simulate", "--preset", "lognormal-electric-sphere", "--out", str(tmp_path)])
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["shock"]["t_star"] == pytest.approx(3.46946797, rel=1e-4)
    assert man["shock"]["focal"] is False
    assert any("truncated" in w for w in man["warnings"])


def test_gravity_manifest_stops_before_collapse(tmp_path):
    main(["simulate", "--preset", "uniform-gravity-sphere", "--override", "grids.t_max=3", "--out", str(tmp_path)])
    man = json.loads((tmp_path / "manifest.json").read_text())
    T0 = man["collapse_time"]
    assert T0 == pytest.approx(1.5707963267948966)
    assert man["snapshots"][-1]["t"] < T0
    assert man["warnings"]


def test_shock_scan(tmp_path):
    assert main(["shock-scan", "--preset", "uniform-gravity-sphere", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "shock_scan.csv").read_text().splitlines()
    assert lines[0] == "r0,t_onset,focal" and len(lines) == 65


def test_reconstruct_files_and_truncation(tmp_path):
    code = main(["reconstruct", "--preset", "lognormal-electric-sphere", "--override", "grids.t_max=5",
                 "--out", str(tmp_path)])
    assert code == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert "phi(0, t) = 0" in man["gauge"]
    assert any("dropped" in w for w in man["warnings"])
    assert all(s["t"] < man["shock"]["t_star"] for s in man["snapshots"])
    rows = (tmp_path / man["files"][-1]).read_text().splitlines()
    assert rows[1] == "r,f,v,phi,psi_re,psi_im,U"
    for line in rows[2:]:
        r, f, v, phi, re, im, U = map(float, line.split(","))
        assert re * re + im * im == pytest.approx(f, rel=1e-12, abs=1e-300)


def test_reconstruct_rejects_unnormalised_total(tmp_path):
    code = main(["reconstruct", "--preset", "lognormal-electric-sphere", "--override", "profile.total=2",
                 "--out", str(tmp_path)])
    assert code == 1


def test_validate_passes_and_reports(tmp_path):
    proc = _run("validate", "--preset", "uniform-electric-sphere", "--out", str(tmp_path))
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip().splitlines()[-1] == "overall: PASS"
    report = json.loads((tmp_path / "validation.json").read_text())
    assert report["passed"] is True


def test_designed_failure_exits_three(tmp_path):
    proc = _run("validate", "--preset", "uniform-electric-sphere", "--override", "tolerances.pde=1e-15",
                "--out", str(tmp_path))
    assert proc.returncode == 3
    assert "FAIL pde-velocity:" in proc.stdout


def test_frozen_combined_scenario(tmp_path):
    code = main(["validate", "--override", "scenario.interaction=combined", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "validation.json").read_text())
    assert [c["name"] for c in report["checks"]] == ["pde-frozen-state"]


def test_config_error_exit_code(tmp_path):
    proc = _run("simulate", "--override", "grids.n_labels=2", "--out", str(tmp_path))
    assert proc.returncode == 1
    assert "grids.n_labels" in proc.stderr


def test_unsupported_scenario_and_io_error_exit_codes(tmp_path):
    # combined interaction has no closed-form trajectories to simulate
    code = main(["simulate", "--override", "scenario.interaction=combined", "--out", str(tmp_path)])
    assert code == 1
    blocked = tmp_path / "file"
    blocked.write_text("")
    # an output path below a regular file is a runtime error
    assert main(["simulate", "--out", str(blocked / "sub")]) == 2


def test_out_defaults_to_config_directory(tmp_path):
    proc = _run("shock-scan", cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "shock_scan.csv").exists()


GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize(
    "args,produced,golden",
    [
        (["simulate", "--preset", "uniform-electric-sphere", "--override", "grids.n_labels=8",
          "--override", "grids.n_times=8", "--override", "grids.n_snapshots=8"],
         "characteristics.csv", "uniform_characteristics.csv"),
        (["simulate", "--preset", "uniform-electric-sphere", "--override", "grids.n_labels=8",
          "--override", "grids.n_times=8", "--override", "grids.n_snapshots=8"],
         "snapshots/snapshot_004.csv", "uniform_snapshot_004.csv"),
        (["reconstruct", "--preset", "lognormal-electric-sphere", "--override", "grids.n_labels=12",
          "--override", "grids.n_snapshots=8", "--override", "grids.t_max=3"],
         "quantum/quantum_003.csv", "lognormal_quantum_003.csv"),
    ],
)
def test_golden_files_match_byte_for_byte(tmp_path, args, produced, golden):
    assert main([*args, "--out", str(tmp_path)]) == 0
    assert _read(tmp_path / produced) == _read(GOLDEN / golden)
