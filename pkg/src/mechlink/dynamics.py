"""Drift and diffusion matrices of the two driven optomechanical devices.

Basis ordering is device-major throughout this module:

    (dQ1, dP1, dx1, dy1, dQ2, dP2, dx2, dy2)

with Q = q * sqrt(m omega_m / hbar), P = p / sqrt(hbar m omega_m) for the
mirrors and x = (dc^dag + dc)/sqrt(2), y = i(dc^dag - dc)/sqrt(2) for the
cavity fields.  The symplectic form in this ordering is the direct sum of
four 2x2 blocks [[0, 1], [-1, 0]].

The drift is block diagonal (the devices never couple directly); all
cross-device correlations enter through the diffusion matrix of the shared
two-mode squeezed drive.  The squeezed drive at the upper mechanical
sideband makes the optical cross-diffusion oscillate at twice the
mechanical frequency, so the full diffusion matrix is

    D(t) = D0 + D2 exp(-i w t) + conj(D2) exp(+i w t),     w = 2 omega_m,

real and symmetric at every t.  A ``static`` convention folds the squeezed
cross terms into D0 instead (no harmonic), matching a time-independent
reading of the squeezed-input correlations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DerivedParams

__all__ = [
    "BASIS_LABELS",
    "symplectic_form",
    "DiffusionSpec",
    "StabilityReport",
    "build_drift",
    "build_diffusion",
    "check_stability",
]

BASIS_LABELS = ("dQ1", "dP1", "dx1", "dy1", "dQ2", "dP2", "dx2", "dy2")


def symplectic_form(n_modes: int) -> np.ndarray:
    """Symplectic form for n modes in (q1, p1, q2, p2, ...) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def _kernel_block(d: DerivedParams) -> np.ndarray:
    """4x4 drift kernel of a single device in (dQ, dP, dx, dy) order."""
    re_cs = d.c_s.real
    im_cs = d.c_s.imag
    # Couplings follow from the linearized radiation-pressure Hamiltonian:
    # dP picks up 2g(Re[c_s] x + Im[c_s] y), the optical rows the 90-degree
    # rotated vector 2g(-Im[c_s], Re[c_s]) Q.  A phase rotation of the
    # cavity field that makes c_s real reduces this to the usual form with
    # a single coupling rate 2g|c_s| on (dP, x) and (dy, Q).
    return np.array([
        [0.0, d.omega_m, 0.0, 0.0],
        [-d.omega_m, -d.gamma_m, 2.0 * d.g * re_cs, 2.0 * d.g * im_cs],
        [-2.0 * d.g * im_cs, 0.0, -d.kappa, d.delta],
        [2.0 * d.g * re_cs, 0.0, -d.delta, -d.kappa],
    ])


def build_drift(d: DerivedParams) -> np.ndarray:
    """8x8 drift matrix A = K (+) K, block diagonal over the two devices."""
    block = _kernel_block(d)
    a = np.zeros((8, 8))
    a[:4, :4] = block
    a[4:, 4:] = block
    return a


@dataclass(frozen=True)
class DiffusionSpec:
    """Stationary + single-harmonic decomposition of the diffusion matrix.

    ``d0`` is the real symmetric stationary part, ``d2`` the complex
    symmetric coefficient of exp(-i mod_freq t); ``mod_freq`` is 2 omega_m.
    """

    d0: np.ndarray
    d2: np.ndarray
    mod_freq: float

    def at(self, t: float) -> np.ndarray:
        """Full diffusion matrix D(t), real symmetric."""
        phase = np.exp(-1j * self.mod_freq * t)
        return self.d0 + 2.0 * (self.d2 * phase).real


def build_diffusion(d: DerivedParams, convention: str = "rotating") -> DiffusionSpec:
    """Diffusion spec for the two devices driven by two-mode squeezed light.

    Parameters
    ----------
    d : DerivedParams
    convention : {"rotating", "static"}
        ``rotating`` puts the squeezed cross-correlations on the 2 omega_m
        harmonic (squeezed carrier on the upper mechanical sideband);
        ``static`` folds them into the stationary part.
    """
    if convention not in ("rotating", "static"):
        raise ValueError(f"unknown squeeze phase convention: {convention!r}")

    local = np.array([
        0.0,
        d.gamma_m * (2.0 * d.nbar + 1.0),
        2.0 * d.kappa * (d.big_n + 0.5),
        2.0 * d.kappa * (d.big_n + 0.5),
    ])
    d0 = np.diag(np.concatenate([local, local]))

    # Anomalous cross-device optical correlations: for amplitude mu the
    # (x_j, y_j) x (x_k, y_k) block of D(t) is
    # 2 kappa [[Re mu, Im mu], [Im mu, -Re mu]].
    cross = d.kappa * d.big_m * np.array([[1.0, -1.0j], [-1.0j, -1.0]])
    d2 = np.zeros((8, 8), dtype=complex)
    if convention == "rotating":
        d2[2:4, 6:8] = cross
        d2[6:8, 2:4] = cross.T
        mod_freq = 2.0 * d.omega_m
    else:
        d0 = d0.astype(float) + 2.0 * np.real(
            _embed_cross(cross))
        mod_freq = 2.0 * d.omega_m
    return DiffusionSpec(d0=d0, d2=d2, mod_freq=mod_freq)


def _embed_cross(cross: np.ndarray) -> np.ndarray:
    full = np.zeros((8, 8), dtype=complex)
    full[2:4, 6:8] = cross
    full[6:8, 2:4] = cross.T
    return full


@dataclass(frozen=True)
class StabilityReport:
    """Spectral abscissa of the drift and the resulting stability verdict."""

    max_real_part: float
    stable: bool
    eigenvalues: np.ndarray


def check_stability(a: np.ndarray) -> StabilityReport:
    """Report whether the drift matrix is Hurwitz stable."""
    eigs = np.linalg.eigvals(a)
    max_re = float(np.max(eigs.real))
    return StabilityReport(max_real_part=max_re, stable=max_re < 0.0, eigenvalues=eigs)
