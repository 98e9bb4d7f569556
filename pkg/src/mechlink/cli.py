"""Command-line interface.

Subcommands: ``validate``, ``steady-state``, ``sweep``, ``readout`` and
``fig`` (presets that regenerate the data behind the three headline
figures).  Exit codes: 0 success, 2 configuration error, 3 numerical
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import constants, dynamics, params, readout, steady_state, sweep
from .measures import UnphysicalStateError
from .pipeline import prepare_steady_state
from .steady_state import ConditioningError, StabilityError

CONFIG_ERROR = 2
NUMERICAL_ERROR = 3


def _provenance(args):
    lines = [f"mechlink {__version__}",
             f"constants hbar={constants.HBAR} k_b={constants.KB} c={constants.C_LIGHT}",
             f"command {' '.join(args)}"]
    return lines


def _measure_scale(log_base: str) -> float:
    return 1.0 / math.log(2.0) if log_base == "2" else 1.0


def cmd_validate(ns, argv):
    p = params.load_config(ns.config)
    d = params.derive(p)
    a = dynamics.build_drift(d)
    report = dynamics.check_stability(a)
    print(f"omega_m = {d.omega_m:.6e} rad/s, kappa = {d.kappa:.6e} rad/s, "
          f"delta/omega_m = {d.delta / d.omega_m:.4f}")
    print(f"g = {d.g:.6e} rad/s, |c_s| = {abs(d.c_s):.6e}, nbar = {d.nbar:.4f}")
    print(f"max Re(eig) = {report.max_real_part:.6e}")
    print("stable" if report.stable else "not stable")
    return 0


def cmd_steady_state(ns, argv):
    p = params.load_config(ns.config)
    _, _, _, pss = prepare_steady_state(p, convention=ns.convention)
    payload = steady_state.cm_to_json(pss.v0)
    if ns.out:
        Path(ns.out).write_text(payload + "\n")
        print(f"stationary covariance written to {ns.out}")
    else:
        print(payload)
    return 0


def _parse_sweep_spec(path, base, convention):
    axes = []
    measures_requested = ("log_negativity",)
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "axis":
            parts = value.split()
            if len(parts) not in (4, 5):
                raise ValueError(
                    f"line {lineno}: expected 'axis = name min max steps [spacing]'")
            axes.append(sweep.SweepAxis(
                name=parts[0], minimum=float(parts[1]), maximum=float(parts[2]),
                steps=int(parts[3]), spacing=parts[4] if len(parts) == 5 else "linear"))
        elif key == "measures":
            measures_requested = tuple(value.replace(",", " ").split())
        else:
            raise ValueError(f"line {lineno}: unknown sweep key {key!r}")
    return sweep.SweepSpec(base=base, axes=tuple(axes),
                           measures=measures_requested, convention=convention)


def cmd_sweep(ns, argv):
    base = params.load_config(ns.config)
    spec = _parse_sweep_spec(ns.spec, base, ns.convention)
    result = sweep.run_sweep(spec, jobs=ns.jobs)
    scale = _measure_scale(ns.log_base)
    with open(ns.out, "w") as fh:
        sweep.write_csv(result, fh, provenance=_provenance(argv),
                        measure_scale=scale)
    n_unstable = sum(not r.stable for r in result.results)
    print(f"{len(result.results)} grid points written to {ns.out}"
          + (f" ({n_unstable} unstable)" if n_unstable else ""))
    return 0


def _parse_r_grid(text):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ValueError(f"--r-grid must be 'start:stop:count', got {text!r}") from None
    if n < 1 or not 0.0 <= a <= b <= 2.0:
        raise ValueError(f"--r-grid range must lie within [0, 2], got {text!r}")
    return np.linspace(a, b, n)


def cmd_readout(ns, argv):
    base = params.load_config(ns.config)
    grid = _parse_r_grid(ns.r_grid)
    points = readout.io_curve(grid, base, convention=ns.convention)
    scale = _measure_scale(ns.log_base)
    with open(ns.out, "w") as fh:
        for line in _provenance(argv):
            fh.write(f"# {line}\n")
        fh.write("r,e_in,e_out,t_star\n")
        for pt in points:
            fh.write(f"{pt.r:.17g},{pt.e_in * scale:.17g},"
                     f"{pt.e_out * scale:.17g},{pt.t_star:.17g}\n")
    try:
        fit = readout.linear_fit(points)
        fit = {**fit, "slope": fit["slope"], "intercept": fit["intercept"] * scale}
        print(json.dumps(fit))
    except ValueError as exc:
        print(json.dumps({"error": str(exc)}))
    print(f"{len(points)} readout points written to {ns.out}", file=sys.stderr)
    return 0


FIG_KINDS = {1: "density_dr", 2: "density_rt", 3: "io_scatter"}


def cmd_fig(ns, argv):
    base = params.REFERENCE_PARAMS
    scale = _measure_scale(ns.log_base)
    omega_m = 2.0 * math.pi * base.mech_freq
    if ns.number == 1:
        spec = sweep.SweepSpec(
            base=params.with_point(base, bath_temperature=2e-3),
            axes=(sweep.SweepAxis("detuning", 0.5, 1.5, 41),
                  sweep.SweepAxis("squeezing_r", 0.0, 2.0, 41)),
            convention=ns.convention)
        result = sweep.run_sweep(spec, jobs=ns.jobs)
        with open(ns.out, "w") as fh:
            for line in _provenance(argv):
                fh.write(f"# {line}\n")
            fh.write("detuning_over_omega_m,r,e_mean\n")
            for coords, res in zip(result.coords, result.results):
                e = (res.e_mean or 0.0) * scale if res.stable else float("nan")
                fh.write(f"{coords['detuning']:.17g},{coords['squeezing_r']:.17g},{e:.17g}\n")
    elif ns.number == 2:
        spec = sweep.SweepSpec(
            base=params.with_point(base, detuning=omega_m),
            axes=(sweep.SweepAxis("squeezing_r", 0.0, 2.0, 21),
                  sweep.SweepAxis("bath_temperature", 1e-3, 0.15, 21)),
            measures=("log_negativity", "discord"),
            convention=ns.convention)
        result = sweep.run_sweep(spec, jobs=ns.jobs)
        with open(ns.out, "w") as fh:
            for line in _provenance(argv):
                fh.write(f"# {line}\n")
            fh.write("r,t_k,e_mean,d_mean\n")
            for coords, res in zip(result.coords, result.results):
                e = (res.e_mean or 0.0) * scale if res.stable else float("nan")
                d = (res.d_mean or 0.0) * scale if res.stable else float("nan")
                fh.write(f"{coords['squeezing_r']:.17g},{coords['bath_temperature']:.17g},"
                         f"{e:.17g},{d:.17g}\n")
    else:
        grid = np.linspace(0.0, 2.0, 21)
        points = readout.io_curve(grid, params.with_point(base, detuning=omega_m,
                                                          bath_temperature=2e-3),
                                  convention=ns.convention)
        with open(ns.out, "w") as fh:
            for line in _provenance(argv):
                fh.write(f"# {line}\n")
            fh.write("r,e_in,e_out,t_star\n")
            for pt in points:
                fh.write(f"{pt.r:.17g},{pt.e_in * scale:.17g},"
                         f"{pt.e_out * scale:.17g},{pt.t_star:.17g}\n")
    print(f"figure {ns.number} data ({FIG_KINDS[ns.number]}) written to {ns.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mechlink",
        description="Quantum-correlation distribution between remote mechanical "
                    "oscillators driven by two-mode squeezed light.")
    parser.add_argument("--version", action="version", version=f"mechlink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--convention", choices=("rotating", "static"), default="rotating",
                        help="squeezed-input phase convention")
        sp.add_argument("--log-base", choices=("e", "2"), default="e", dest="log_base",
                        help="logarithm base for reported measures (display only)")
        sp.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: MECHLINK_JOBS or 1)")

    sp = sub.add_parser("validate", help="parse a config and report stability")
    sp.add_argument("config")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("steady-state", help="stationary covariance matrix as JSON")
    sp.add_argument("config")
    sp.add_argument("--out", default=None)
    common(sp)
    sp.set_defaults(func=cmd_steady_state)

    sp = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    sp.add_argument("config")
    sp.add_argument("--spec", required=True, help="sweep spec file")
    sp.add_argument("--out", required=True, help="output CSV path")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("readout", help="entanglement input-output curve to CSV")
    sp.add_argument("config")
    sp.add_argument("--r-grid", required=True, dest="r_grid",
                    help="resource squeezing grid as start:stop:count")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_readout)

    sp = sub.add_parser("fig", help="regenerate the data for a headline figure")
    sp.add_argument("number", type=int, choices=(1, 2, 3))
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_fig)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else CONFIG_ERROR
    try:
        return ns.func(ns, argv)
    except (params.InvalidParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except (StabilityError, ConditioningError, UnphysicalStateError,
            np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
