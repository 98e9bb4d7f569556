"""Render the three headline figures from the simulator's CSV output.

The only coupling to the simulator is the CSV schema: a detuning x
squeezing entanglement map (``density_dr``), a squeezing x temperature
entanglement/discord pair (``density_rt``), and the entanglement
input-output scatter with its least-squares line (``io_scatter``).
Rendering is read-only and deterministic; no timestamps are embedded.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["FigureJob", "SchemaError", "GridError", "render", "KINDS"]

# kind -> (required columns, value columns rendered)
KINDS = {
    "density_dr": (("detuning_over_omega_m", "r", "e_mean"), ("e_mean",)),
    "density_rt": (("r", "t_k", "e_mean", "d_mean"), ("e_mean", "d_mean")),
    "io_scatter": (("r", "e_in", "e_out", "t_star"), ("e_out",)),
}


class SchemaError(ValueError):
    """The CSV header does not match the figure kind."""


class GridError(ValueError):
    """The density data do not form a complete rectangular grid."""


@dataclass(frozen=True)
class FigureJob:
    input_csv: str
    kind: str
    output_image: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; expected one of {sorted(KINDS)}")


def read_table(path: str, kind: str) -> dict[str, np.ndarray]:
    """Parse a provenance-headed CSV and check the kind's schema.

    Lines starting with ``#`` are provenance and skipped.  Returns one
    float array per required column.
    """
    required, _ = KINDS[kind]
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh
                                      if not line.startswith("#")) if r]
    if not rows:
        raise SchemaError(f"{path}: empty CSV")
    header = [h.strip() for h in rows[0]]
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r} "
                              f"(required for kind {kind!r})")
    idx = {col: header.index(col) for col in required}
    out = {}
    for col in required:
        k = idx[col]
        vals = []
        for lineno, row in enumerate(rows[1:], start=2):
            try:
                cell = row[k].strip()
                vals.append(float(cell) if cell else np.nan)
            except (IndexError, ValueError):
                raise SchemaError(
                    f"{path}: line {lineno}: bad value for column {col!r}") from None
        out[col] = np.array(vals)
    return out


def _to_grid(x, y, z):
    """Reshape row-major (x, y, z) triples into a complete 2-D grid."""
    xs = np.unique(x)
    ys = np.unique(y)
    if xs.size * ys.size != z.size:
        raise GridError(
            f"ragged grid: {xs.size} x {ys.size} cells but {z.size} rows")
    order = np.lexsort((y, x))
    expected_x = np.repeat(xs, ys.size)
    expected_y = np.tile(ys, xs.size)
    if not (np.array_equal(x[order], expected_x)
            and np.array_equal(y[order], expected_y)):
        raise GridError("incomplete grid: coordinate pairs do not tile "
                        "the x/y products")
    return xs, ys, z[order].reshape(xs.size, ys.size)


def _heatmap(ax, xs, ys, grid, title, xlabel, ylabel):
    masked = np.ma.masked_invalid(grid.T)
    mesh = ax.pcolormesh(xs, ys, masked, shading="nearest", cmap="magma")
    ax.figure.colorbar(mesh, ax=ax)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return mesh


def _fit(e_in, e_out):
    keep = e_in > 0.0
    if keep.sum() < 2 or np.ptp(e_in[keep]) == 0.0:
        return None
    slope, intercept = np.polyfit(e_in[keep], e_out[keep], 1)
    pred = slope * e_in[keep] + intercept
    ss_res = float(np.sum((e_out[keep] - pred) ** 2))
    ss_tot = float(np.sum((e_out[keep] - e_out[keep].mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r2)


def render(job: FigureJob) -> dict:
    """Render one figure; returns a summary of what was drawn.

    The summary carries the grid (density kinds) or the fit (scatter kind)
    so callers can assert on the rendered data without decoding the image.
    """
    table = read_table(job.input_csv, job.kind)
    info: dict = {"kind": job.kind, "output": job.output_image}

    if job.kind == "density_dr":
        xs, ys, grid = _to_grid(table["detuning_over_omega_m"], table["r"],
                                table["e_mean"])
        fig, ax = plt.subplots(figsize=(6.0, 4.5))
        _heatmap(ax, xs, ys, grid, "Mechanical entanglement",
                 r"$\Delta / \omega_m$", "squeezing $r$")
        info.update(x=xs, y=ys, grid=grid)
    elif job.kind == "density_rt":
        xs, ys, e_grid = _to_grid(table["r"], table["t_k"], table["e_mean"])
        _, _, d_grid = _to_grid(table["r"], table["t_k"], table["d_mean"])
        fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.0))
        _heatmap(axes[0], xs, ys, e_grid, "Entanglement $E$",
                 "squeezing $r$", "$T$ [K]")
        _heatmap(axes[1], xs, ys, d_grid, "Gaussian discord $\\mathcal{D}$",
                 "squeezing $r$", "$T$ [K]")
        info.update(x=xs, y=ys, grid=e_grid, discord_grid=d_grid)
    else:  # io_scatter
        e_in, e_out = table["e_in"], table["e_out"]
        fig, ax = plt.subplots(figsize=(5.5, 4.5))
        ax.scatter(e_in, e_out, color="tab:blue", zorder=3)
        fit = _fit(e_in, e_out)
        if fit is not None:
            slope, intercept, r2 = fit
            line_x = np.array([0.0, e_in.max()])
            ax.plot(line_x, slope * line_x + intercept, "k--", zorder=2)
            ax.annotate(f"slope = {slope:.3f}\n$R^2$ = {r2:.2f}",
                        xy=(0.05, 0.92), xycoords="axes fraction",
                        va="top")
            info.update(slope=slope, intercept=intercept, r_squared=r2)
        ax.set_xlabel("input mechanical entanglement $E_{in}$")
        ax.set_ylabel("output optical entanglement $E_{out}$")
        ax.set_title("Entanglement input-output relation")

    fig.tight_layout()
    fig.savefig(job.output_image, dpi=150, metadata={"Software": "mechfig"})
    plt.close(fig)
    return info
