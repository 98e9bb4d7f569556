import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

from mechlink import cli
from mechlink.params import REFERENCE_PARAMS, with_point
from mechlink.sweep import SweepAxis, SweepSpec, run_sweep, write_csv

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "reference.cfg"


def small_spec(**kwargs):
    defaults = dict(
        base=REFERENCE_PARAMS,
        axes=(SweepAxis("detuning", 0.9, 1.1, 2),
              SweepAxis("squeezing_r", 0.0, 1.0, 2)),
    )
    defaults.update(kwargs)
    return SweepSpec(**defaults)


def csv_text(result):
    buf = io.StringIO()
    write_csv(result, buf)
    return buf.getvalue()


def test_grid_size():
    result = run_sweep(small_spec())
    assert len(result.results) == 4
    rows = [l for l in csv_text(result).splitlines() if not l.startswith("#")]
    assert len(rows) == 5  # header + 4 points


def test_zero_squeezing_rows_have_zero_measures():
    result = run_sweep(small_spec())
    for coords, res in zip(result.coords, result.results):
        if coords["squeezing_r"] == 0.0 and res.stable:
            assert res.e_mean == 0.0


def test_axis_invariants():
    with pytest.raises(ValueError):
        SweepAxis("squeezing_r", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        SweepAxis("bath_temperature", 0.0, 1.0, 4, "log")
    with pytest.raises(ValueError):
        SweepAxis("pump_power", 0.0, 1.0, 4)


def test_spec_invariants():
    with pytest.raises(ValueError):
        SweepSpec(base=REFERENCE_PARAMS, axes=())
    with pytest.raises(ValueError):
        small_spec(measures=("entropy",))


def test_unstable_points_reported_not_fabricated():
    spec = SweepSpec(
        base=REFERENCE_PARAMS,
        axes=(SweepAxis("detuning", -1.0, 1.0, 3),))
    result = run_sweep(spec)
    by_coord = {c["detuning"]: r for c, r in zip(result.coords, result.results)}
    assert not by_coord[-1.0].stable
    assert by_coord[-1.0].e_mean is None
    assert by_coord[1.0].stable
    text = csv_text(result)
    assert "false,,," in text


def test_jobs_do_not_change_output():
    spec = small_spec()
    a = csv_text(run_sweep(spec, jobs=1))
    b = csv_text(run_sweep(spec, jobs=4))
    assert a == b


def test_csv_is_deterministic_and_headed():
    spec = small_spec()
    text = csv_text(run_sweep(spec))
    assert text == csv_text(run_sweep(spec))
    header = [l for l in text.splitlines() if not l.startswith("#")][0]
    assert header.startswith("detuning_over_omega_m,squeezing_r,stable,e_mean")


def test_cli_validate_reference_config(capsys):
    assert cli.main(["validate", str(CONFIG)]) == 0
    out = capsys.readouterr().out
    assert "stable" in out and "not stable" not in out


def test_cli_validate_missing_file():
    assert cli.main(["validate", "/nonexistent/params.cfg"]) == cli.CONFIG_ERROR


def test_cli_unknown_subcommand():
    assert cli.main(["frobnicate"]) == cli.CONFIG_ERROR


def test_cli_sweep_rejects_single_step_axis(tmp_path):
    spec = tmp_path / "sweep.cfg"
    spec.write_text("axis = squeezing_r 0 1 1\n")
    out = tmp_path / "out.csv"
    code = cli.main(["sweep", str(CONFIG), "--spec", str(spec), "--out", str(out)])
    assert code == cli.CONFIG_ERROR


def test_cli_sweep_runs_small_grid(tmp_path, capsys):
    spec = tmp_path / "sweep.cfg"
    spec.write_text("axis = squeezing_r 0 1 3\nmeasures = log_negativity\n")
    out = tmp_path / "out.csv"
    assert cli.main(["sweep", str(CONFIG), "--spec", str(spec), "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 4


def test_cli_steady_state_json(tmp_path):
    out = tmp_path / "cm.json"
    assert cli.main(["steady-state", str(CONFIG), "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["vacuum"] == 0.5
    assert len(payload["matrix"]) == 8


def test_cli_readout_small_grid(tmp_path, capsys):
    out = tmp_path / "io.csv"
    assert cli.main(["readout", str(CONFIG), "--r-grid", "0:1:3",
                     "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "r,e_in,e_out,t_star"
    assert len(rows) == 4


def test_cli_readout_bad_grid(tmp_path):
    out = tmp_path / "io.csv"
    assert cli.main(["readout", str(CONFIG), "--r-grid", "0:3:5",
                     "--out", str(out)]) == cli.CONFIG_ERROR


def test_cli_log_base_scales_measures(tmp_path):
    out_e = tmp_path / "e.csv"
    out_2 = tmp_path / "b2.csv"
    for path, base in ((out_e, "e"), (out_2, "2")):
        spec = tmp_path / "sweep.cfg"
        spec.write_text("axis = squeezing_r 0.5 1 2\n")
        assert cli.main(["sweep", str(CONFIG), "--spec", str(spec),
                         "--out", str(path), "--log-base", base]) == 0

    def col(path, k):
        rows = [l for l in path.read_text().splitlines() if not l.startswith("#")][1:]
        return [float(r.split(",")[k]) for r in rows]

    for a, b in zip(col(out_e, 2), col(out_2, 2)):
        assert b == pytest.approx(a / math.log(2.0), rel=1e-12)
