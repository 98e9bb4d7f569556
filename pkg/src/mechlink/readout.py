"""All-optical readout of the prepared mechanical entanglement.

Two ancilla cavity modes, each in a coherent state, interact bilocally with
the two mirrors.  The optomechanical transducer maps mechanical
entanglement onto the ancilla light; since the ancillas start uncorrelated
and never interact, any optical entanglement certifies pre-existing
mechanical entanglement.  The ancilla inputs are vacuum, so the covariance
equation has a constant diffusion matrix
Diag[0, gamma_m (2 nbar + 1), kappa, kappa] per device.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dynamics, measures, params, steady_state
from .pipeline import prepare_steady_state

__all__ = [
    "ReadoutConfig",
    "InputOutputPoint",
    "readout_propagate",
    "io_curve",
    "linear_fit",
]


@dataclass(frozen=True)
class ReadoutConfig:
    """Ancilla-stage parameters and time grid for the readout propagation.

    By default the ancilla modes reuse the preparation-stage cavity
    parameters.  ``t_max`` defaults to 10 cavity lifetimes.
    """

    derived: params.DerivedParams
    t_max: float | None = None
    n_samples: int = 512

    def __post_init__(self):
        if self.t_max is not None and self.t_max <= 0.0:
            raise ValueError(f"t_max must be > 0, got {self.t_max!r}")
        if self.n_samples < 16:
            raise ValueError(f"n_samples must be >= 16, got {self.n_samples!r}")

    @property
    def horizon(self) -> float:
        return self.t_max if self.t_max is not None else 10.0 / self.derived.kappa


@dataclass(frozen=True)
class InputOutputPoint:
    r: float
    e_in: float
    e_out: float
    t_star: float


def _initial_cm(v_mech: np.ndarray) -> np.ndarray:
    """8-mode CM: mechanical state + vacuum-level coherent ancillas, no cross terms."""
    v_mech = np.asarray(v_mech, dtype=float)
    if v_mech.shape != (4, 4):
        raise ValueError(f"expected a 4x4 mechanical covariance matrix, got {v_mech.shape}")
    report = measures.validate_physical(v_mech)
    if not report.physical:
        raise measures.UnphysicalStateError(
            f"initial mechanical state is unphysical "
            f"(min symplectic eigenvalue {report.min_symplectic_eigenvalue:.6f})")
    v = 0.5 * np.eye(8)
    mech = [0, 1, 4, 5]  # device-major slots of (Q1, P1) and (Q2, P2)
    order = [0, 1, 2, 3]
    for a, i in zip(mech, order):
        for b, j in zip(mech, order):
            v[a, b] = v_mech[i, j]
    return v


def readout_propagate(v_mech_init, cfg: ReadoutConfig):
    """Propagate the mechanical + ancilla system; return (times, E_out(t)).

    The drift is the same two-device kernel as in the preparation stage;
    the diffusion is constant (vacuum optical inputs, thermal mechanical
    bath).  E_out is the logarithmic negativity of the two ancilla modes.
    """
    d = cfg.derived
    a = dynamics.build_drift(d)
    report = dynamics.check_stability(a)
    if not report.stable:
        raise steady_state.StabilityError(
            f"readout drift is not stable: max Re(eig) = {report.max_real_part:.3e}")

    local = np.array([0.0, d.gamma_m * (2.0 * d.nbar + 1.0), d.kappa, d.kappa])
    spec = dynamics.DiffusionSpec(
        d0=np.diag(np.concatenate([local, local])),
        d2=np.zeros((8, 8), dtype=complex),
        mod_freq=2.0 * d.omega_m,
    )
    v0 = _initial_cm(v_mech_init)
    # quarter the step limit so the sampling grid, not the integrator,
    # bounds the peak-location accuracy
    dt = steady_state.max_rk4_step(d.omega_m, d.kappa) / 4.0
    times, traj = steady_state.propagate(
        a, spec, v0, cfg.horizon, dt, n_samples=cfg.n_samples, check_physical=False)
    e_out = np.array([
        measures.log_negativity(steady_state.extract_optical(v)) for v in traj])
    return times, e_out


PREP_SAMPLES = 64


def prepared_mechanical_cm(p: params.PhysicalParams, convention="rotating"):
    """Mechanical CM handed to the readout.

    The steady state is periodic and its stationary part carries no
    mechanical cross-correlations (they oscillate at 2 omega_m), so the
    readout starts from the stroboscopic sample with the largest mechanical
    entanglement over one period (first argmax on a 64-point grid;
    deterministic).
    """
    _, _, _, pss = prepare_steady_state(p, convention=convention)
    times = np.arange(PREP_SAMPLES) * (pss.period / PREP_SAMPLES)
    blocks = [steady_state.extract_mechanical(pss.sample(t)) for t in times]
    es = [measures.log_negativity(v) for v in blocks]
    return blocks[int(np.argmax(es))]


def peak_entanglement(times, e_out):
    """(E_out, t_star) at the curve maximum.

    Quadratic interpolation through the discrete argmax and its neighbors,
    so the reported peak is insensitive to the sampling grid.
    """
    times = np.asarray(times)
    e_out = np.asarray(e_out)
    k = int(np.argmax(e_out))
    if e_out[k] == 0.0:
        return 0.0, 0.0
    if 0 < k < len(e_out) - 1:
        y0, y1, y2 = e_out[k - 1], e_out[k], e_out[k + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0.0:
            shift = 0.5 * (y0 - y2) / denom
            h = times[k + 1] - times[k]
            return float(y1 - 0.25 * (y0 - y2) * shift), float(times[k] + shift * h)
    return float(e_out[k]), float(times[k])


def io_curve(r_grid, base: params.PhysicalParams, cfg: ReadoutConfig | None = None,
             convention="rotating"):
    """Input-output entanglement relation over a grid of resource squeezings.

    For each r: prepare the mechanical steady state, record its
    entanglement E_in, run the readout propagation and record the maximum
    ancilla entanglement E_out with its argmax time.
    """
    r_grid = list(r_grid)
    if not r_grid:
        raise ValueError("r_grid must be nonempty")
    points = []
    for r in r_grid:
        p = params.with_point(base, squeezing_r=float(r))
        v_mech = prepared_mechanical_cm(p, convention=convention)
        e_in = measures.log_negativity(v_mech)
        if cfg is None:
            point_cfg = ReadoutConfig(derived=params.derive(p))
        else:
            point_cfg = cfg
        times, e_out = readout_propagate(v_mech, point_cfg)
        peak, t_star = peak_entanglement(times, e_out)
        points.append(InputOutputPoint(
            r=float(r), e_in=float(e_in), e_out=peak, t_star=t_star))
    return points


def linear_fit(points):
    """Least-squares fit of E_out on E_in over points with E_in > 0.

    Returns a dict with slope, intercept, r_squared and n_points.  Raises
    ValueError on fewer than 5 usable points or degenerate (constant) E_in.
    """
    e_in = np.array([pt.e_in for pt in points if pt.e_in > 0.0])
    e_out = np.array([pt.e_out for pt in points if pt.e_in > 0.0])
    if e_in.size < 5:
        raise ValueError(f"need >= 5 points with E_in > 0, got {e_in.size}")
    if np.ptp(e_in) == 0.0:
        raise ValueError("degenerate fit: all E_in values identical")
    slope, intercept = np.polyfit(e_in, e_out, 1)
    pred = slope * e_in + intercept
    ss_res = float(np.sum((e_out - pred) ** 2))
    ss_tot = float(np.sum((e_out - e_out.mean()) ** 2))
    r_squared = 0.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return {"slope": float(slope), "intercept": float(intercept),
            "r_squared": float(r_squared), "n_points": int(e_in.size)}
