"""Figure rendering from einsel CSV artifacts.

Strictly read-only presentation: figures consume the documented CSV
schemas and never recompute physics.  Rendering is deterministic for a
fixed matplotlib version (Agg backend, fixed geometry, no timestamps).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = (
    "offdiag_vs_gap",
    "bound_scatter",
    "suppression_timeseries",
    "deff_histogram",
)

# bound_scatter column mapping: (x = side that must be <=, y = side that
# must be >=), per results.csv schema; satisfied points lie on or above
# the diagonal.
_SCATTER_AXES = (
    ("rhs", "lhs", "pairing value", "interaction + speed"),
    ("rhs_pairing", "lhs", "2 x pairing value", "commutator trace norm"),
    ("mean_distance", "rhs_bath", "mean distance", "equilibration bound"),
    ("mean_speed", "rhs", "mean speed", "speed bound"),
    ("mean_offdiag", "ceiling", "mean |off-diagonal|", "decoherence ceiling"),
)


class SchemaMismatch(Exception):
    """The CSV does not carry the columns a figure kind needs."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_csv: Path
    output_image: Path
    log_x: bool = False
    log_y: bool = False

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaMismatch(f"unknown figure kind {self.kind!r}")
        object.__setattr__(self, "input_csv", Path(self.input_csv))
        object.__setattr__(self, "output_image", Path(self.output_image))


def read_table(path: Path) -> tuple[list[str], list[dict]]:
    if not Path(path).is_file():
        raise FileNotFoundError(f"no CSV at {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaMismatch(f"{path} has no header row")
        rows = list(reader)
    if not rows:
        raise SchemaMismatch(f"{path} has a header but no data rows")
    return list(reader.fieldnames), rows


def _require(columns: list[str], needed: set[str], path) -> None:
    missing = needed - set(columns)
    if missing:
        raise SchemaMismatch(f"{path} lacks columns {sorted(missing)}")


def _floats(rows: list[dict], column: str) -> np.ndarray:
    return np.array([float(r[column]) for r in rows])


def _new_axes():
    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=150)
    return fig, ax


def _finish(fig, ax, spec: FigureSpec):
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    spec.output_image.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output_image)
    plt.close(fig)


def _render_offdiag_vs_gap(spec: FigureSpec):
    columns, rows = read_table(spec.input_csv)
    _require(columns, {"gap", "mean_offdiag"}, spec.input_csv)
    if "model" in columns:  # pointer_contrast: only generic rows carry gaps
        rows = [r for r in rows if r["model"] == "generic"] or rows
    fig, ax = _new_axes()
    if "scale" in columns:
        for scale in sorted({r["scale"] for r in rows}, key=float, reverse=True):
            group = [r for r in rows if r["scale"] == scale]
            ax.plot(
                _floats(group, "gap"), _floats(group, "mean_offdiag"),
                "o", label=f"coupling {float(scale):g}",
            )
            if "omega_offdiag" in columns:
                ax.plot(
                    _floats(group, "gap"), _floats(group, "omega_offdiag"),
                    "x", color=ax.lines[-1].get_color(),
                )
        ax.legend(fontsize=8)
        if "omega_offdiag" in columns:
            ax.set_title("o: time-averaged |rho_kl|,  x: equilibrium |omega_kl|")
    else:
        ax.plot(_floats(rows, "gap"), _floats(rows, "mean_offdiag"), "o")
    ax.set_xlabel("local energy gap |E_k - E_l|")
    ax.set_ylabel("off-diagonal magnitude")
    _finish(fig, ax, spec)


def _render_bound_scatter(spec: FigureSpec):
    columns, rows = read_table(spec.input_csv)
    for x_col, y_col, x_label, y_label in _SCATTER_AXES:
        if x_col in columns and y_col in columns:
            break
    else:
        raise SchemaMismatch(
            f"{spec.input_csv} carries no recognized bound column pair"
        )
    x = _floats(rows, x_col)
    y = _floats(rows, y_col)
    finite = np.isfinite(x) & np.isfinite(y)
    x, y = x[finite], y[finite]
    if x.size == 0:
        raise SchemaMismatch(f"{spec.input_csv} has no finite bound rows")
    fig, ax = _new_axes()
    lim = (0.0, float(max(x.max(), y.max())) * 1.05 + 1e-12)
    ax.plot(lim, lim, "-", color="gray", linewidth=1, label="y = x")
    ax.plot(x, y, ".", markersize=4)
    ax.set_xlim(lim)
    ax.set_ylim(lim)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.set_title("satisfied points lie on or above the diagonal")
    ax.legend(fontsize=8)
    _finish(fig, ax, spec)


def _render_suppression_timeseries(spec: FigureSpec):
    columns, rows = read_table(spec.input_csv)
    _require(columns, {"time"}, spec.input_csv)
    series = [c for c in columns if c.startswith("offdiag_")]
    if not series:
        raise SchemaMismatch(f"{spec.input_csv} has no offdiag_<k>_<l> columns")
    t = _floats(rows, "time")
    fig, ax = _new_axes()
    for name in series:
        ax.plot(t, _floats(rows, name), "-", linewidth=0.8,
                label=name.replace("offdiag_", "pair "))
    ax.set_xlabel("time")
    ax.set_ylabel("|off-diagonal|")
    ax.legend(fontsize=8)
    _finish(fig, ax, spec)


def _render_deff_histogram(spec: FigureSpec):
    columns, rows = read_table(spec.input_csv)
    _require(columns, {"d_eff"}, spec.input_csv)
    values = _floats(rows, "d_eff")
    fig, ax = _new_axes()
    ax.hist(values, bins=40, color="tab:blue", alpha=0.8)
    if "d_R" in columns:
        d_r = float(rows[0]["d_R"])
        ax.axvline(d_r / 2, color="tab:red", linestyle="--", label="d_R / 2")
        ax.axvline(d_r / 4, color="tab:orange", linestyle=":", label="d_R / 4")
        ax.legend(fontsize=8)
    ax.set_xlabel("effective dimension")
    ax.set_ylabel("draws")
    _finish(fig, ax, spec)


_RENDERERS = {
    "offdiag_vs_gap": _render_offdiag_vs_gap,
    "bound_scatter": _render_bound_scatter,
    "suppression_timeseries": _render_suppression_timeseries,
    "deff_histogram": _render_deff_histogram,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path."""
    _RENDERERS[spec.kind](spec)
    return spec.output_image
