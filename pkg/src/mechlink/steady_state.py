"""Asymptotic covariance of the 8-mode system.

Three routes to the same object:

* harmonic balance (primary): the asymptotic covariance of a stable linear
  system with single-harmonic diffusion is exactly
  V(t) = V0 + V2 exp(-i w t) + conj(V2) exp(+i w t), with V0 from a
  Lyapunov equation and V2 from a frequency-shifted Sylvester equation;
* direct RK4 propagation of dV/dt = A V + V A^T + D(t) (cross-check and
  transient studies);
* a spectral quadrature of the transfer function (independent oracle for
  the stationary part).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
from scipy.integrate import quad_vec

from .dynamics import DiffusionSpec, check_stability, BASIS_LABELS, symplectic_form

__all__ = [
    "StabilityError",
    "PeriodicSteadyState",
    "solve_lyapunov",
    "solve_harmonic",
    "solve_periodic",
    "propagate",
    "spectral_oracle",
    "extract_mechanical",
    "extract_optical",
    "cm_to_json",
    "cm_from_json",
]

LYAPUNOV_RTOL = 1e-10


class StabilityError(RuntimeError):
    """The drift matrix is not Hurwitz; no steady state exists."""


class ConditioningError(RuntimeError):
    """The steady-state linear system is numerically singular."""


def _require_stable(a):
    report = check_stability(a)
    if not report.stable:
        raise StabilityError(
            f"drift is not stable: max Re(eig) = {report.max_real_part:.3e}")


def solve_lyapunov(a: np.ndarray, d0: np.ndarray) -> np.ndarray:
    """Stationary covariance V0 solving A V0 + V0 A^T + D0 = 0.

    Requires a stable drift.  The Bartels-Stewart solve is verified against
    the residual bound ||A V0 + V0 A^T + D0||_F <= 1e-10 ||D0||_F.
    """
    _require_stable(a)
    if not np.any(d0):
        return np.zeros_like(d0)
    v0 = la.solve_continuous_lyapunov(a, -d0)
    v0 = 0.5 * (v0 + v0.T)
    resid = np.linalg.norm(a @ v0 + v0 @ a.T + d0) / np.linalg.norm(d0)
    if resid > LYAPUNOV_RTOL:
        raise ConditioningError(
            f"Lyapunov residual {resid:.2e} exceeds {LYAPUNOV_RTOL:.0e}; "
            f"drift condition number ~ {np.linalg.cond(a):.2e}")
    return v0


def solve_harmonic(a: np.ndarray, d2: np.ndarray, mod_freq: float) -> np.ndarray:
    """Harmonic covariance V2 solving (A + i w I) V2 + V2 A^T + D2 = 0."""
    _require_stable(a)
    if mod_freq <= 0.0:
        raise ValueError(f"mod_freq must be > 0, got {mod_freq!r}")
    if not np.any(d2):
        return np.zeros_like(d2, dtype=complex)
    shifted = a.astype(complex) + 1j * mod_freq * np.eye(a.shape[0])
    v2 = la.solve_sylvester(shifted, a.T.astype(complex), -d2.astype(complex))
    scale = np.linalg.norm(d2)
    resid = np.linalg.norm(shifted @ v2 + v2 @ a.T + d2) / scale
    if resid > LYAPUNOV_RTOL:
        raise ConditioningError(
            f"Sylvester residual {resid:.2e} exceeds {LYAPUNOV_RTOL:.0e}")
    return v2


@dataclass(frozen=True)
class PeriodicSteadyState:
    """Asymptotic periodic covariance V(t) = V0 + V2 e^{-iwt} + c.c."""

    v0: np.ndarray
    v2: np.ndarray
    mod_freq: float

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.mod_freq

    def sample(self, t: float) -> np.ndarray:
        """Real symmetric covariance matrix at time t."""
        phase = np.exp(-1j * self.mod_freq * t)
        return self.v0 + 2.0 * (self.v2 * phase).real

    def sample_period(self, n: int = 32) -> np.ndarray:
        """Stack of n covariance samples uniformly spaced over one period."""
        times = np.arange(n) * (self.period / n)
        return np.stack([self.sample(t) for t in times])


def solve_periodic(a: np.ndarray, spec: DiffusionSpec) -> PeriodicSteadyState:
    """Harmonic-balance steady state for drift ``a`` and diffusion ``spec``."""
    v0 = solve_lyapunov(a, spec.d0)
    v2 = solve_harmonic(a, spec.d2, spec.mod_freq)
    return PeriodicSteadyState(v0=v0, v2=v2, mod_freq=spec.mod_freq)


try:
    from ._rk4 import rk4_covariance as _rk4_kernel
except ImportError:  # pragma: no cover - numba missing
    _rk4_kernel = None


def _rk4_python(a, d0, d2r, d2i, w, v, dt, n_steps, t0):
    at = a.T

    def diffusion(t):
        wt = w * t
        return d0 + 2.0 * (d2r * np.cos(wt) + d2i * np.sin(wt))

    t = t0
    for _ in range(n_steps):
        k1 = a @ v + v @ at + diffusion(t)
        vh = v + 0.5 * dt * k1
        k2 = a @ vh + vh @ at + diffusion(t + 0.5 * dt)
        vh = v + 0.5 * dt * k2
        k3 = a @ vh + vh @ at + diffusion(t + 0.5 * dt)
        vf = v + dt * k3
        k4 = a @ vf + vf @ at + diffusion(t + dt)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v = 0.5 * (v + v.T)
        t += dt
    return v


def _rk4_run(a, spec, v, dt, n_steps, t0):
    d2r = np.ascontiguousarray(spec.d2.real)
    d2i = np.ascontiguousarray(spec.d2.imag)
    kernel = _rk4_kernel if _rk4_kernel is not None else _rk4_python
    return kernel(np.ascontiguousarray(a), np.ascontiguousarray(spec.d0),
                  d2r, d2i, spec.mod_freq, np.ascontiguousarray(v),
                  float(dt), int(n_steps), float(t0))


def max_rk4_step(omega_m: float, kappa: float) -> float:
    """Largest step size accepted by :func:`propagate` for these rates."""
    return min(2.0 * np.pi / omega_m, 1.0 / kappa) / 50.0


def propagate(a, spec: DiffusionSpec, v_init, t_final, dt, n_samples=64,
              check_physical=True, t0=0.0):
    """Integrate dV/dt = A V + V A^T + D(t) with classical RK4.

    The state is symmetrized exactly after every step.  Returns
    ``(times, trajectory)`` with ``n_samples + 1`` covariance snapshots from
    t = t0 to t = t0 + t_final (inclusive); ``t0`` only sets the phase of
    the periodic diffusion.

    ``dt`` must not exceed min(2 pi / omega_m, 1 / kappa) / 50, with the
    rates inferred from the drift's spectral content; a too-large step
    raises ValueError.  Non-physical sampled states trigger a warning, not
    an error.
    """
    if t_final <= 0.0:
        raise ValueError(f"t_final must be > 0, got {t_final!r}")
    eigs = np.linalg.eigvals(a)
    osc = max(np.max(np.abs(eigs.imag)), spec.mod_freq / 2.0, 1.0 / t_final)
    decay = max(np.max(np.abs(eigs.real)), 1.0 / t_final)
    dt_max = max_rk4_step(osc, decay)
    if dt > dt_max * (1.0 + 1e-12):
        raise ValueError(f"dt = {dt:.3e} exceeds integrator limit {dt_max:.3e}")

    v = 0.5 * (np.asarray(v_init, dtype=float) + np.asarray(v_init, dtype=float).T)
    steps_total = int(np.ceil(t_final / dt))
    sample_marks = np.unique(np.linspace(0, steps_total, n_samples + 1).astype(int))
    times = []
    snaps = []
    done = 0
    for mark in sample_marks:
        chunk = mark - done
        if chunk > 0:
            v = _rk4_run(a, spec, v, dt, chunk, t0 + done * dt)
            done = mark
        times.append(t0 + done * dt)
        snaps.append(v.copy())
    times = np.array(times)
    trajectory = np.stack(snaps)

    if check_physical:
        from .measures import symplectic_eigenvalues
        worst = min(symplectic_eigenvalues(s).min() for s in trajectory[:: max(1, len(trajectory) // 8)])
        if worst < 0.5 - 1e-6:
            warnings.warn(
                f"trajectory leaves the physical cone: min symplectic eigenvalue {worst:.6f}",
                RuntimeWarning, stacklevel=2)
    return times, trajectory


def spectral_oracle(a, d0, max_freq=None, rtol=1e-10):
    """Stationary covariance from the transfer-function integral.

    Evaluates V0 = (1/2 pi) Int T(w) D0 T(w)^dag dw with
    T(w) = (i w I - A)^{-1} by adaptive quadrature over [-W, W],
    W >= 100 max(|eig A|).  The leading tail beyond the window, D0/(pi W),
    is added analytically; the next-order tail is used as an accuracy
    estimate.  Agrees with :func:`solve_lyapunov` for stable drifts; kept
    deliberately independent of it.
    """
    _require_stable(a)
    n = a.shape[0]
    eye = np.eye(n)
    rates = np.linalg.eigvals(a)
    scale = np.max(np.abs(rates))
    if max_freq is None:
        max_freq = 100.0 * scale

    def integrand(w):
        t = np.linalg.inv(1j * w * eye - a)
        return (t @ d0 @ t.conj().T).real

    # resonances sit at the eigenfrequencies of the drift
    points = sorted(set(np.round(rates.imag, 6)))
    result, _ = quad_vec(integrand, -max_freq, max_freq, epsrel=rtol,
                         epsabs=0.0, points=points, limit=5000)
    # T(w) = 1/(iw) + A/(iw)^2 + ...; the 1/w^2 term of the integrand gives
    # the D0/(pi W) tail, the 1/w^3 term integrates to zero by oddness.
    v0 = result / (2.0 * np.pi) + d0 / (np.pi * max_freq)
    tail_next = scale**2 * np.linalg.norm(d0) / (3.0 * np.pi * max_freq**3)
    if tail_next > 1e-5 * max(np.linalg.norm(v0), 1e-300):
        raise RuntimeError(
            f"spectral tail estimate {tail_next:.2e} too large for requested "
            f"accuracy; increase max_freq (currently {max_freq:.3e})")
    return 0.5 * (v0 + v0.T)


# device-major (Q1,P1,x1,y1,Q2,P2,x2,y2) -> grouped (Q1,P1,Q2,P2,x1,y1,x2,y2)
_GROUPED = np.array([0, 1, 4, 5, 2, 3, 6, 7])


def extract_mechanical(v: np.ndarray) -> np.ndarray:
    """4x4 mechanical covariance (dQ1, dP1, dQ2, dP2) from the 8-mode matrix."""
    v = np.asarray(v)
    if v.shape != (8, 8):
        raise ValueError(f"expected an 8x8 covariance matrix, got {v.shape}")
    return v[np.ix_(_GROUPED, _GROUPED)][:4, :4]


def extract_optical(v: np.ndarray) -> np.ndarray:
    """4x4 optical covariance (dx1, dy1, dx2, dy2) from the 8-mode matrix."""
    v = np.asarray(v)
    if v.shape != (8, 8):
        raise ValueError(f"expected an 8x8 covariance matrix, got {v.shape}")
    return v[np.ix_(_GROUPED, _GROUPED)][4:, 4:]


def cm_to_json(v: np.ndarray, basis=BASIS_LABELS) -> str:
    """Serialize a covariance matrix to the artifact's JSON schema."""
    v = np.asarray(v)
    if v.shape != (len(basis), len(basis)):
        raise ValueError(f"matrix shape {v.shape} does not match basis of {len(basis)}")
    return json.dumps({
        "basis": list(basis),
        "matrix": [list(row) for row in v],
        "vacuum": 0.5,
    }, indent=2)


def cm_from_json(text: str):
    """Inverse of :func:`cm_to_json`; returns ``(matrix, basis_labels)``."""
    payload = json.loads(text)
    basis = tuple(payload["basis"])
    v = np.array(payload["matrix"], dtype=float)
    if v.shape != (len(basis), len(basis)):
        raise ValueError("matrix shape does not match basis length")
    if payload.get("vacuum") != 0.5:
        raise ValueError("unsupported vacuum convention")
    return v, basis
