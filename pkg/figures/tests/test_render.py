from pathlib import Path

import numpy as np
import pytest

from mechfig import FigureJob, GridError, SchemaError, render
from mechfig.cli import main


def density_csv(path, nx=3, ny=3, cols=("detuning_over_omega_m", "r", "e_mean"),
                drop_last=False):
    lines = ["# provenance line", ",".join(cols)]
    for i in range(nx):
        for j in range(ny):
            lines.append(f"{0.5 + 0.5 * i},{0.1 * j},{i + 0.01 * j}")
    if drop_last:
        lines.pop()
    path.write_text("\n".join(lines) + "\n")
    return path


def io_csv(path, slope=0.3):
    lines = ["r,e_in,e_out,t_star", "0,0,0,0"]
    for k in range(1, 8):
        lines.append(f"{0.1 * k},{0.2 * k},{slope * 0.2 * k},1e-6")
    path.write_text("\n".join(lines) + "\n")
    return path


def test_density_grid_rendered(tmp_path):
    csv = density_csv(tmp_path / "grid.csv")
    out = tmp_path / "grid.png"
    info = render(FigureJob(str(csv), "density_dr", str(out)))
    assert out.exists() and out.stat().st_size > 0
    assert info["grid"].shape == (3, 3)
    assert info["x"][0] == 0.5


def test_io_scatter_perfect_line_annotated(tmp_path):
    csv = io_csv(tmp_path / "io.csv")
    out = tmp_path / "io.png"
    info = render(FigureJob(str(csv), "io_scatter", str(out)))
    assert out.exists()
    assert info["slope"] == pytest.approx(0.3, abs=1e-12)
    assert info["r_squared"] == pytest.approx(1.0, abs=1e-12)


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(SchemaError):
        FigureJob("x.csv", "contour", "x.png")


def test_missing_column_named(tmp_path):
    csv = density_csv(tmp_path / "bad.csv",
                      cols=("detuning_over_omega_m", "r", "wrong"))
    with pytest.raises(SchemaError, match="e_mean"):
        render(FigureJob(str(csv), "density_dr", str(tmp_path / "x.png")))


def test_ragged_grid_rejected(tmp_path):
    csv = density_csv(tmp_path / "ragged.csv", drop_last=True)
    with pytest.raises(GridError):
        render(FigureJob(str(csv), "density_dr", str(tmp_path / "x.png")))


def test_nan_cells_allowed(tmp_path):
    csv = tmp_path / "nan.csv"
    lines = ["detuning_over_omega_m,r,e_mean"]
    for i in range(2):
        for j in range(2):
            lines.append(f"{i},{j},{'nan' if i == j == 0 else 0.5}")
    csv.write_text("\n".join(lines) + "\n")
    info = render(FigureJob(str(csv), "density_dr", str(tmp_path / "nan.png")))
    assert np.isnan(info["grid"][0, 0])


def test_two_panel_kind(tmp_path):
    csv = tmp_path / "rt.csv"
    lines = ["r,t_k,e_mean,d_mean"]
    for i in range(3):
        for j in range(3):
            lines.append(f"{i},{0.01 * j},{0.1 * i},{0.2 * i}")
    csv.write_text("\n".join(lines) + "\n")
    info = render(FigureJob(str(csv), "density_rt", str(tmp_path / "rt.png")))
    assert info["discord_grid"].shape == (3, 3)


def test_rerender_is_byte_identical(tmp_path):
    csv = density_csv(tmp_path / "grid.csv")
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(FigureJob(str(csv), "density_dr", str(a)))
    render(FigureJob(str(csv), "density_dr", str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_cli_render_roundtrip(tmp_path, capsys):
    csv = io_csv(tmp_path / "io.csv")
    out = tmp_path / "io.png"
    assert main(["render", "--kind", "io_scatter",
                 "--in", str(csv), "--out", str(out)]) == 0
    assert out.exists()


def test_cli_schema_error_exit_code(tmp_path, capsys):
    csv = density_csv(tmp_path / "bad.csv", cols=("a", "b", "c"))
    code = main(["render", "--kind", "density_dr",
                 "--in", str(csv), "--out", str(tmp_path / "x.png")])
    assert code == 2


def test_cli_missing_file(tmp_path):
    code = main(["render", "--kind", "density_dr",
                 "--in", str(tmp_path / "absent.csv"),
                 "--out", str(tmp_path / "x.png")])
    assert code == 2
