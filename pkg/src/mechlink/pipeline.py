"""End-to-end evaluation: lab parameters -> steady state -> correlation measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics, measures, params, steady_state

__all__ = ["CorrelationResult", "prepare_steady_state", "evaluate_point"]

PERIOD_SAMPLES = 32


@dataclass(frozen=True)
class CorrelationResult:
    """Mechanical correlation measures of one parameter point.

    Measures are period statistics of the periodic steady state, evaluated
    at 32 uniform times; the headline scalar is the mean.  ``stable`` is
    False when no steady state exists, in which case all measures are None.
    """

    stable: bool
    max_real_part: float
    e_mean: float | None = None
    e_min: float | None = None
    e_max: float | None = None
    d_mean: float | None = None
    d_min: float | None = None
    d_max: float | None = None
    lyapunov_residual: float | None = None
    min_symplectic: float | None = None


def prepare_steady_state(p: params.PhysicalParams, convention="rotating"):
    """Drift, diffusion and periodic steady state for one parameter point.

    Returns ``(derived, drift, diffusion, steady)``; raises
    :class:`steady_state.StabilityError` on unstable drift.
    """
    d = params.derive(p)
    a = dynamics.build_drift(d)
    spec = dynamics.build_diffusion(d, convention=convention)
    pss = steady_state.solve_periodic(a, spec)
    return d, a, spec, pss


def evaluate_point(p: params.PhysicalParams, want_discord=False,
                   convention="rotating") -> CorrelationResult:
    """Full pipeline for one parameter point; never raises on instability."""
    d = params.derive(p)
    a = dynamics.build_drift(d)
    report = dynamics.check_stability(a)
    if not report.stable:
        return CorrelationResult(stable=False, max_real_part=report.max_real_part)

    spec = dynamics.build_diffusion(d, convention=convention)
    pss = steady_state.solve_periodic(a, spec)
    resid = np.linalg.norm(a @ pss.v0 + pss.v0 @ a.T + spec.d0) / max(
        np.linalg.norm(spec.d0), 1e-300)

    es, ds, nu_mins = [], [], []
    for v in pss.sample_period(PERIOD_SAMPLES):
        vm = steady_state.extract_mechanical(v)
        nu_mins.append(measures.symplectic_eigenvalues(v).min())
        es.append(measures.log_negativity(vm))
        if want_discord:
            ds.append(measures.gaussian_discord(vm))

    result = CorrelationResult(
        stable=True,
        max_real_part=report.max_real_part,
        e_mean=float(np.mean(es)), e_min=float(np.min(es)), e_max=float(np.max(es)),
        lyapunov_residual=float(resid),
        min_symplectic=float(np.min(nu_mins)),
    )
    if want_discord:
        result = CorrelationResult(
            **{**result.__dict__,
               "d_mean": float(np.mean(ds)), "d_min": float(np.min(ds)),
               "d_max": float(np.max(ds))})
    return result
