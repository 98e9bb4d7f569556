"""Acceptance gate for the figure renderer.

Regenerates the three preset CSVs through the simulator's command-line
interface (the only sanctioned coupling) and renders each one.  The
detuning x squeezing density figure must peak in the column at the
mechanical resonance.
"""

import subprocess
import sys

import numpy as np
import pytest

from mechfig import FigureJob, render

FIG_KINDS = {1: "density_dr", 2: "density_rt", 3: "io_scatter"}


@pytest.fixture(scope="module")
def preset_csvs(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("fig_data")
    paths = {}
    for n in (1, 2, 3):
        path = out_dir / f"fig{n}.csv"
        subprocess.run([sys.executable, "-m", "mechlink.cli", "fig", str(n),
                        "--out", str(path)], check=True, capture_output=True)
        paths[n] = path
    return paths


def test_criterion_7_render_presets(preset_csvs, tmp_path):
    """All three preset CSVs render without error and the entanglement
    density map peaks at the resonant detuning column."""
    infos = {}
    for n, csv in preset_csvs.items():
        out = tmp_path / f"fig{n}.png"
        infos[n] = render(FigureJob(str(csv), FIG_KINDS[n], str(out)))
        assert out.exists() and out.stat().st_size > 0

    grid = infos[1]["grid"]
    dets = infos[1]["x"]
    assert not np.any(np.isnan(grid))
    peak_col = dets[np.unravel_index(np.argmax(grid), grid.shape)[0]]
    print(f"\n  density map argmax column: detuning {peak_col:.3f} omega_m; "
          f"io fit R^2 = {infos[3].get('r_squared', float('nan')):.3f}")
    assert abs(peak_col - 1.0) <= 0.05
