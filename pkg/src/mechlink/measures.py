"""Gaussian-state correlation quantifiers.

All covariance matrices use the vacuum = 1/2 convention and the mode-major
quadrature ordering (q1, p1, q2, p2, ...).  Entanglement is measured by the
logarithmic negativity (natural log); quantum correlations beyond
entanglement by the Gaussian discord, minimized over single-mode Gaussian
measurements on the second mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .dynamics import symplectic_form

__all__ = [
    "UnphysicalStateError",
    "symplectic_eigenvalues",
    "log_negativity",
    "gaussian_discord",
    "validate_physical",
    "PhysicalityReport",
    "tmsv_covariance",
]

PHYSICALITY_TOL = 1e-9


class UnphysicalStateError(ValueError):
    """The covariance matrix violates the uncertainty principle."""


def _check_square_symmetric(v):
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise ValueError(f"covariance matrix must be square of even size, got {v.shape}")
    if not np.allclose(v, v.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(v).max())):
        raise ValueError("covariance matrix must be symmetric")
    return 0.5 * (v + v.T)


def symplectic_eigenvalues(v) -> np.ndarray:
    """Symplectic spectrum of a 2n x 2n covariance matrix, ascending.

    The n values are the moduli of the eigenvalues of i Omega V; physical
    states have all of them >= 1/2.
    """
    v = _check_square_symmetric(v)
    n = v.shape[0] // 2
    omega = symplectic_form(n)
    eigs = np.linalg.eigvals(1j * omega @ v)
    nus = np.sort(np.abs(eigs))
    # eigenvalues come in +/- pairs; keep one of each
    return nus[::2][:n] if nus.size == 2 * n else nus[:n]


def _require_physical(v):
    nu_min = symplectic_eigenvalues(v).min()
    if nu_min < 0.5 - PHYSICALITY_TOL:
        raise UnphysicalStateError(
            f"minimum symplectic eigenvalue {nu_min:.9f} below the vacuum floor 1/2")


def log_negativity(v_m) -> float:
    """Logarithmic negativity of a two-mode Gaussian state.

    Partially transposes mode 2 (momentum sign flip), takes the smallest
    symplectic eigenvalue nu of the result and returns max(0, -ln(2 nu)).
    """
    v_m = _check_square_symmetric(v_m)
    if v_m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance matrix, got {v_m.shape}")
    _require_physical(v_m)
    p = np.diag([1.0, 1.0, 1.0, -1.0])
    nu_min = symplectic_eigenvalues(p @ v_m @ p).min()
    return max(0.0, -np.log(2.0 * nu_min))


def _entropy_f(x):
    """f(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2) for x >= 1."""
    x = np.asarray(x, dtype=float)
    xp = (x + 1.0) / 2.0
    xm = np.clip((x - 1.0) / 2.0, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        term = np.where(xm > 0.0, xm * np.log(np.where(xm > 0.0, xm, 1.0)), 0.0)
    return xp * np.log(xp) - term


def _measured_det(sigma, lam, theta):
    """det of the Schur complement after measuring mode 2 with a rotated
    squeezed state sigma0 = R diag(lam, 1/lam) R^T (unit-vacuum scale).

    Vectorized over equal-shaped arrays ``lam`` and ``theta``.
    """
    a1 = sigma[:2, :2]
    a2 = sigma[2:, 2:]
    g = sigma[:2, 2:]
    lam = np.asarray(lam, dtype=float)
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    # sigma0 entries
    s00 = lam * c**2 + s**2 / lam
    s11 = lam * s**2 + c**2 / lam
    s01 = (lam - 1.0 / lam) * c * s
    m00 = a2[0, 0] + s00
    m01 = a2[0, 1] + s01
    m11 = a2[1, 1] + s11
    det_m = m00 * m11 - m01**2
    # eps = a1 - g (a2 + sigma0)^{-1} g^T, expanded entrywise
    inv00 = m11 / det_m
    inv01 = -m01 / det_m
    inv11 = m00 / det_m
    b00 = g[0, 0] * inv00 + g[0, 1] * inv01
    b01 = g[0, 0] * inv01 + g[0, 1] * inv11
    b10 = g[1, 0] * inv00 + g[1, 1] * inv01
    b11 = g[1, 0] * inv01 + g[1, 1] * inv11
    e00 = a1[0, 0] - (b00 * g[0, 0] + b01 * g[0, 1])
    e01 = a1[0, 1] - (b00 * g[1, 0] + b01 * g[1, 1])
    e11 = a1[1, 1] - (b10 * g[1, 0] + b11 * g[1, 1])
    return e00 * e11 - e01**2


def minimize_measured_entropy(sigma, n_lam=64, n_theta=32, refine=True):
    """inf over single-mode Gaussian measurements of f(sqrt(det eps)).

    Deterministic: coarse grid over (log lam, theta) followed by
    Nelder-Mead refinement from the best grid cell; grid ties break toward
    the smallest |log lam|.
    """
    log_lams = np.linspace(-6.0, 6.0, n_lam)
    thetas = np.linspace(0.0, np.pi, n_theta, endpoint=False)
    ll, th = np.meshgrid(log_lams, thetas, indexing="ij")
    dets = _measured_det(sigma, np.exp(ll), th)
    vals = _entropy_f(np.sqrt(np.clip(dets, 1.0, None)))
    order = np.lexsort((np.abs(ll).ravel(), np.round(vals.ravel(), 12)))
    best = order[0]
    best_val = float(vals.ravel()[best])
    x0 = np.array([ll.ravel()[best], th.ravel()[best]])
    if not refine:
        return best_val

    def objective(x):
        det = _measured_det(sigma, np.exp(x[0]), x[1])
        return float(_entropy_f(np.sqrt(max(det, 1.0))))

    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400})
    return min(best_val, float(res.fun))


def gaussian_discord(v_m, n_lam=64, n_theta=32) -> float:
    """Gaussian quantum discord of a two-mode state (measurement on mode 2).

    Internally rescales to the unit-vacuum convention sigma = 2 V so the
    entropic function f acts on arguments >= 1.  Natural logarithm.
    """
    v_m = _check_square_symmetric(v_m)
    if v_m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance matrix, got {v_m.shape}")
    _require_physical(v_m)
    sigma = 2.0 * v_m
    a2_det = np.linalg.det(sigma[2:, 2:])
    mu = np.clip(symplectic_eigenvalues(0.5 * sigma) * 2.0, 1.0, None)
    inf_term = minimize_measured_entropy(sigma, n_lam=n_lam, n_theta=n_theta)
    d = _entropy_f(np.sqrt(a2_det)) - _entropy_f(mu[0]) - _entropy_f(mu[1]) + inf_term
    d = float(d)
    if d < -1e-9:
        raise RuntimeError(f"discord optimization produced {d:.3e} < 0; "
                           "optimizer failed to reach the infimum")
    return max(0.0, d)


@dataclass(frozen=True)
class PhysicalityReport:
    symmetric: bool
    min_symplectic_eigenvalue: float
    physical: bool
    entangled: bool | None  # PPT verdict, two-mode states only


def validate_physical(v) -> PhysicalityReport:
    """Symmetry, uncertainty-floor and (for two modes) PPT checks."""
    v = np.asarray(v, dtype=float)
    symmetric = np.allclose(v, v.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(v).max()))
    if not symmetric:
        return PhysicalityReport(False, float("nan"), False, None)
    nu_min = float(symplectic_eigenvalues(v).min())
    physical = nu_min >= 0.5 - PHYSICALITY_TOL
    entangled = None
    if v.shape == (4, 4):
        p = np.diag([1.0, 1.0, 1.0, -1.0])
        nu_pt = float(symplectic_eigenvalues(p @ v @ p).min())
        entangled = physical and nu_pt < 0.5 - PHYSICALITY_TOL
    return PhysicalityReport(True, nu_min, physical, entangled)


def tmsv_covariance(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum covariance matrix (vacuum = 1/2 scale)."""
    ch = 0.5 * np.cosh(2.0 * r)
    sh = 0.5 * np.sinh(2.0 * r)
    return np.array([
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ])
