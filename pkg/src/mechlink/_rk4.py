"""Compiled RK4 kernel for the covariance matrix ODE.

Separated so that the package degrades gracefully to a pure-numpy loop when
numba is unavailable; results are bit-compatible between the two paths only
up to floating-point reassociation, so tests compare with tolerances.
"""

import numpy as np
from numba import njit

__all__ = ["rk4_covariance"]


@njit(cache=True)
def rk4_covariance(a, d0, d2r, d2i, w, v, dt, n_steps, t0):
    at = a.T.copy()
    t = t0
    for _ in range(n_steps):
        wt = w * t
        d_a = d0 + 2.0 * (d2r * np.cos(wt) + d2i * np.sin(wt))
        wt = w * (t + 0.5 * dt)
        d_b = d0 + 2.0 * (d2r * np.cos(wt) + d2i * np.sin(wt))
        wt = w * (t + dt)
        d_c = d0 + 2.0 * (d2r * np.cos(wt) + d2i * np.sin(wt))

        k1 = a @ v + v @ at + d_a
        vh = v + 0.5 * dt * k1
        k2 = a @ vh + vh @ at + d_b
        vh = v + 0.5 * dt * k2
        k3 = a @ vh + vh @ at + d_b
        vf = v + dt * k3
        k4 = a @ vf + vf @ at + d_c
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v = 0.5 * (v + v.T)
        t += dt
    return v
