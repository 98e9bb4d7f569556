"""Parameter-sweep engine with deterministic CSV output.

Grid points are independent pipeline evaluations; a worker pool maps over
them and results are re-ordered row-major over the axes as declared, so
the output bytes do not depend on the worker count.  Floats are written
with 17 significant digits.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import params
from .pipeline import CorrelationResult, evaluate_point

__all__ = ["SweepAxis", "SweepSpec", "SweepResult", "run_sweep", "write_csv"]

AXIS_NAMES = ("detuning", "squeezing_r", "bath_temperature")


@dataclass(frozen=True)
class SweepAxis:
    """One sweep axis; ``detuning`` values are multiples of omega_m."""

    name: str
    minimum: float
    maximum: float
    steps: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}")
        if self.steps < 2:
            raise ValueError(f"axis {self.name}: steps must be >= 2, got {self.steps}")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"axis {self.name}: spacing must be linear or log")
        if self.spacing == "log" and self.minimum <= 0.0:
            raise ValueError(f"axis {self.name}: log spacing requires min > 0")
        if not self.maximum > self.minimum:
            raise ValueError(f"axis {self.name}: max must exceed min")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.minimum, self.maximum, self.steps)
        return np.linspace(self.minimum, self.maximum, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    base: params.PhysicalParams
    axes: tuple
    measures: tuple = ("log_negativity",)
    convention: str = "rotating"

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError(f"expected 1 or 2 sweep axes, got {len(self.axes)}")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate sweep axes: {names}")
        unknown = set(self.measures) - {"log_negativity", "discord"}
        if unknown:
            raise ValueError(f"unknown measures: {sorted(unknown)}")

    def grid(self):
        """Row-major list of (coords, PhysicalParams) over the axes as declared."""
        omega_m = 2.0 * math.pi * self.base.mech_freq
        axis_values = [ax.values() for ax in self.axes]
        points = []
        for idx in np.ndindex(*(len(v) for v in axis_values)):
            coords = {ax.name: float(axis_values[k][i])
                      for k, (ax, i) in enumerate(zip(self.axes, idx))}
            kwargs = dict(coords)
            if "detuning" in kwargs:
                kwargs["detuning"] = kwargs["detuning"] * omega_m
            points.append((coords, params.with_point(self.base, **kwargs)))
        return points


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    coords: tuple          # one dict per grid point, row-major
    results: tuple         # matching CorrelationResult per point


def _evaluate(args):
    point, want_discord, convention = args
    return evaluate_point(point, want_discord=want_discord, convention=convention)


def default_jobs() -> int:
    env = os.environ.get("MECHLINK_JOBS")
    if env:
        return max(1, int(env))
    return 1


def run_sweep(spec: SweepSpec, jobs: int | None = None) -> SweepResult:
    """Evaluate the full pipeline on every grid point of ``spec``.

    ``jobs`` > 1 fans the points out to a process pool; the result ordering
    (and any serialized output) is identical for every worker count.
    """
    jobs = default_jobs() if jobs is None else max(1, jobs)
    points = spec.grid()
    want_discord = "discord" in spec.measures
    tasks = [(p, want_discord, spec.convention) for _, p in points]
    if jobs == 1 or len(tasks) == 1:
        results = [_evaluate(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return SweepResult(spec=spec, coords=tuple(c for c, _ in points), results=tuple(results))


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


_COLUMNS = {
    "detuning": "detuning_over_omega_m",
    "squeezing_r": "squeezing_r",
    "bath_temperature": "temperature_k",
}


def write_csv(result: SweepResult, stream, provenance=(), measure_scale=1.0):
    """Write a sweep result as deterministic CSV with `#` provenance header.

    ``measure_scale`` rescales the measure columns (base-2 display option);
    coordinates and diagnostics are never rescaled.
    """
    spec = result.spec
    for line in provenance:
        stream.write(f"# {line}\n")
    base = spec.base
    stream.write("# base_params "
                 + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(base.__dict__.items()))
                 + "\n")
    stream.write(f"# convention={spec.convention}\n")
    for ax in spec.axes:
        stream.write(f"# axis {ax.name} min={_fmt(ax.minimum)} max={_fmt(ax.maximum)} "
                     f"steps={ax.steps} spacing={ax.spacing}\n")

    cols = [_COLUMNS[ax.name] for ax in spec.axes]
    cols += ["stable", "e_mean", "e_min", "e_max"]
    want_discord = "discord" in spec.measures
    if want_discord:
        cols += ["d_mean", "d_min", "d_max"]
    cols += ["max_real_part", "lyapunov_residual", "min_symplectic"]
    stream.write(",".join(cols) + "\n")

    def _fmt_measure(x):
        return "" if x is None else _fmt(x * measure_scale)

    for coords, res in zip(result.coords, result.results):
        row = [_fmt(coords[ax.name]) for ax in spec.axes]
        row.append("true" if res.stable else "false")
        row += [_fmt_measure(res.e_mean), _fmt_measure(res.e_min), _fmt_measure(res.e_max)]
        if want_discord:
            row += [_fmt_measure(res.d_mean), _fmt_measure(res.d_min), _fmt_measure(res.d_max)]
        row += [_fmt(res.max_real_part), _fmt(res.lyapunov_residual),
                _fmt(res.min_symplectic)]
        stream.write(",".join(row) + "\n")
