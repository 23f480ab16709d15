import shutil
import subprocess
import sys

import numpy as np
import pytest

from einsel_plot import FigureSpec, SchemaMismatch, read_table, render
from einsel_plot.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _write_csv(path, columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(str(r[c]) for c in columns) for r in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def sweep_csv(tmp_path):
    columns = [
        "scale", "trial", "seed", "pair_k", "pair_l", "gap", "mean_offdiag",
        "offdiag_std_error", "omega_offdiag", "mean_speed", "speed_std_error",
        "coupling_norm", "ceiling", "satisfied",
    ]
    rng = np.random.default_rng(5)
    rows = []
    for scale in (1.0, 0.1, 0.01):
        for trial in range(3):
            gap = 1.0 + 0.1 * trial
            speed = float(rng.uniform(0.02, 0.08))
            off = min((scale + speed) / gap, 0.5) * float(rng.uniform(0.3, 0.9))
            rows.append({
                "scale": scale, "trial": trial, "seed": trial, "pair_k": 0,
                "pair_l": 1, "gap": gap, "mean_offdiag": off,
                "offdiag_std_error": 0.001,
                "omega_offdiag": off * scale / 2,
                "mean_speed": speed, "speed_std_error": 0.001,
                "coupling_norm": scale,
                "ceiling": (scale + speed + 0.003) / gap,
                "satisfied": "true",
            })
    return _write_csv(tmp_path / "results.csv", columns, rows)


@pytest.fixture
def thm4_csv(tmp_path):
    columns = ["scale", "trial", "seed", "time", "lhs", "rhs", "slack", "satisfied"]
    rng = np.random.default_rng(6)
    rows = []
    for i in range(40):
        rhs = float(rng.uniform(0, 0.4))
        lhs = rhs + float(rng.uniform(0, 0.2))
        rows.append({
            "scale": 0.1, "trial": 0, "seed": 1, "time": float(i),
            "lhs": lhs, "rhs": rhs, "slack": lhs - rhs, "satisfied": "true",
        })
    return _write_csv(tmp_path / "thm4.csv", columns, rows)


@pytest.fixture
def trajectory_csv(tmp_path):
    columns = ["time", "speed", "distance", "offdiag_0_1", "offdiag_0_2", "offdiag_1_2"]
    rows = []
    for i in range(60):
        t = i * 0.5
        decay = np.exp(-t / 5)
        rows.append({
            "time": t, "speed": 0.05, "distance": 0.1,
            "offdiag_0_1": 0.33 * decay, "offdiag_0_2": 0.33 * decay**2,
            "offdiag_1_2": 0.33 * decay**0.5,
        })
    return _write_csv(tmp_path / "trajectory_0.csv", columns, rows)


@pytest.fixture
def thm2_csv(tmp_path):
    columns = ["trial", "seed", "d_R", "d_eff", "below_quarter"]
    rng = np.random.default_rng(7)
    rows = [
        {"trial": i, "seed": i, "d_R": 32,
         "d_eff": float(rng.normal(17, 2.2)), "below_quarter": "false"}
        for i in range(300)
    ]
    return _write_csv(tmp_path / "thm2.csv", columns, rows)


def _assert_png(path):
    assert path.is_file()
    assert path.read_bytes()[:8] == PNG_MAGIC


def test_offdiag_vs_gap_renders(sweep_csv, tmp_path):
    out = render(FigureSpec("offdiag_vs_gap", sweep_csv, tmp_path / "f1.png",
                            log_y=True))
    _assert_png(out)


def test_bound_scatter_renders_and_points_satisfied(thm4_csv, tmp_path):
    _, rows = read_table(thm4_csv)
    assert all(float(r["lhs"]) >= float(r["rhs"]) for r in rows)
    out = render(FigureSpec("bound_scatter", thm4_csv, tmp_path / "f2.png"))
    _assert_png(out)


def test_bound_scatter_recognizes_sweep_schema(sweep_csv, tmp_path):
    _, rows = read_table(sweep_csv)
    assert all(float(r["ceiling"]) >= float(r["mean_offdiag"]) for r in rows)
    out = render(FigureSpec("bound_scatter", sweep_csv, tmp_path / "f3.png"))
    _assert_png(out)


def test_suppression_timeseries_renders(trajectory_csv, tmp_path):
    out = render(FigureSpec("suppression_timeseries", trajectory_csv,
                            tmp_path / "f4.png"))
    _assert_png(out)


def test_deff_histogram_renders(thm2_csv, tmp_path):
    out = render(FigureSpec("deff_histogram", thm2_csv, tmp_path / "f5.png"))
    _assert_png(out)


def test_rendering_is_deterministic(thm2_csv, tmp_path):
    a = render(FigureSpec("deff_histogram", thm2_csv, tmp_path / "a.png"))
    b = render(FigureSpec("deff_histogram", thm2_csv, tmp_path / "b.png"))
    assert a.read_bytes() == b.read_bytes()


def test_empty_csv_is_schema_mismatch(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("deff_histogram", empty, tmp_path / "x.png"))
    header_only = tmp_path / "header.csv"
    header_only.write_text("trial,seed,d_R,d_eff,below_quarter\n")
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("deff_histogram", header_only, tmp_path / "y.png"))


def test_wrong_columns_is_schema_mismatch(thm2_csv, tmp_path):
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("offdiag_vs_gap", thm2_csv, tmp_path / "x.png"))
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("bound_scatter", thm2_csv, tmp_path / "y.png"))
    with pytest.raises(SchemaMismatch):
        FigureSpec("starfield", thm2_csv, tmp_path / "z.png")


def test_cli_exit_codes(thm2_csv, tmp_path):
    assert main([
        "--kind", "deff_histogram", "--in", str(thm2_csv),
        "--out", str(tmp_path / "ok.png"),
    ]) == 0
    assert main([
        "--kind", "offdiag_vs_gap", "--in", str(thm2_csv),
        "--out", str(tmp_path / "bad.png"),
    ]) == 2


# ---------------------------------------------------------------------------
# end-to-end against the producer CLI


@pytest.mark.skipif(shutil.which("einsel") is None, reason="einsel CLI not installed")
def test_all_kinds_from_real_artifacts(tmp_path):
    def produce(args, out):
        res = subprocess.run(
            ["einsel", *args, "--out", str(out)],
            capture_output=True, text=True,
        )
        assert res.returncode == 0, res.stderr
        return out

    thm4 = produce(
        ["verify", "thm4", "--trials", "1", "--d-b", "4", "--n-samples", "20",
         "--scale", "0.5", "--scale", "0.05", "--seed", "3"],
        tmp_path / "thm4",
    )
    thm2 = produce(
        ["verify", "thm2", "--trials", "150", "--d-s", "2", "--d-b", "8",
         "--d-r", "8", "--seed", "3"],
        tmp_path / "thm2",
    )
    sweep = produce(
        ["sweep", "--trials", "1", "--d-b", "6", "--n-samples", "20",
         "--scale", "0.5", "--scale", "0.05", "--seed", "3"],
        tmp_path / "sweep",
    )

    jobs = [
        ("bound_scatter", thm4 / "results.csv"),
        ("deff_histogram", thm2 / "results.csv"),
        ("offdiag_vs_gap", sweep / "results.csv"),
        ("suppression_timeseries", sweep / "trajectory_0.csv"),
    ]
    for i, (kind, csv_path) in enumerate(jobs):
        out = tmp_path / f"fig_{i}.png"
        res = subprocess.run(
            [sys.executable, "-m", "einsel_plot.cli", "--kind", kind,
             "--in", str(csv_path), "--out", str(out)],
            capture_output=True, text=True,
        )
        assert res.returncode == 0, res.stderr
        _assert_png(out)

    # the producer's hard gate guarantees the scatter stays on the
    # satisfied side of the diagonal
    _, rows = read_table(thm4 / "results.csv")
    assert all(float(r["lhs"]) >= float(r["rhs"]) - 1e-9 for r in rows)
    _, sweep_rows = read_table(sweep / "results.csv")
    assert all(
        float(r["ceiling"]) >= float(r["mean_offdiag"]) - 1e-9 for r in sweep_rows
    )
    # histogram mass concentrates above half the subspace dimension
    _, deff_rows = read_table(thm2 / "results.csv")
    d_eff = np.array([float(r["d_eff"]) for r in deff_rows])
    d_r = float(deff_rows[0]["d_R"])
    assert np.mean(d_eff) >= d_r / 2
