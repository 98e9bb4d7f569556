import numpy as np
import pytest

from mechlink.dynamics import DiffusionSpec, build_diffusion, build_drift
from mechlink.measures import log_negativity, symplectic_eigenvalues
from mechlink.params import REFERENCE_PARAMS, derive, with_point
from mechlink.steady_state import (StabilityError, cm_from_json, cm_to_json,
                                   extract_mechanical, extract_optical,
                                   max_rk4_step, propagate, solve_harmonic,
                                   solve_lyapunov, solve_periodic,
                                   spectral_oracle)


@pytest.fixture(scope="module")
def reference_system():
    d = derive(REFERENCE_PARAMS)
    return d, build_drift(d), build_diffusion(d)


def test_lyapunov_scalar_balance():
    v0 = solve_lyapunov(-0.5 * np.eye(8), np.eye(8))
    assert np.allclose(v0, np.eye(8), atol=1e-12)


def test_lyapunov_zero_diffusion():
    assert not np.any(solve_lyapunov(-0.5 * np.eye(8), np.zeros((8, 8))))


def test_lyapunov_rejects_unstable():
    with pytest.raises(StabilityError):
        solve_lyapunov(np.eye(8), np.eye(8))


def test_lyapunov_residual_and_physicality(reference_system):
    d, a, spec = reference_system
    v0 = solve_lyapunov(a, spec.d0)
    resid = np.linalg.norm(a @ v0 + v0 @ a.T + spec.d0) / np.linalg.norm(spec.d0)
    assert resid <= 1e-10
    assert symplectic_eigenvalues(v0).min() >= 0.5 - 1e-9


def test_harmonic_zero_forcing(reference_system):
    _, a, _ = reference_system
    assert not np.any(solve_harmonic(a, np.zeros((8, 8)), 1e6))


def test_harmonic_residual(reference_system):
    d, a, spec = reference_system
    v2 = solve_harmonic(a, spec.d2, spec.mod_freq)
    shifted = a + 1j * spec.mod_freq * np.eye(8)
    resid = np.linalg.norm(shifted @ v2 + v2 @ a.T + spec.d2) / np.linalg.norm(spec.d2)
    assert resid <= 1e-10


def test_assembled_state_real_symmetric(reference_system):
    d, a, spec = reference_system
    pss = solve_periodic(a, spec)
    for t in (0.0, np.pi / (4 * d.omega_m), np.pi / (2 * d.omega_m)):
        v = pss.sample(t)
        assert np.isrealobj(v)
        assert np.allclose(v, v.T)
    assert np.allclose(pss.sample(0.3 / d.omega_m),
                       pss.sample(0.3 / d.omega_m + pss.period), rtol=1e-12)


def test_fixed_point_residual_over_period(reference_system):
    d, a, spec = reference_system
    pss = solve_periodic(a, spec)
    w = spec.mod_freq
    scale = np.linalg.norm(spec.d0)
    for t in np.arange(16) * (pss.period / 16):
        v = pss.sample(t)
        dv = (-1j * w * pss.v2 * np.exp(-1j * w * t)).real * 2.0
        resid = np.linalg.norm(dv - (a @ v + v @ a.T + spec.at(t))) / scale
        assert resid <= 1e-8


def test_zero_resource_has_no_cross_device_covariance():
    d = derive(with_point(REFERENCE_PARAMS, squeezing_r=0.0))
    pss = solve_periodic(build_drift(d), build_diffusion(d))
    assert np.abs(pss.v0[:4, 4:]).max() <= 1e-10 * np.abs(pss.v0).max()
    assert not np.any(pss.v2)
    assert log_negativity(extract_mechanical(pss.v0)) == 0.0


def test_convention_agreement(reference_system):
    d, a, _ = reference_system
    rot = solve_periodic(a, build_diffusion(d, "rotating"))
    static = solve_periodic(a, build_diffusion(d, "static"))
    assert np.any(rot.v2)
    assert not np.any(static.v2)


def test_propagate_fixed_point_stays_fixed(reference_system):
    d, a, spec = reference_system
    const = DiffusionSpec(d0=spec.d0, d2=np.zeros((8, 8), complex),
                          mod_freq=spec.mod_freq)
    v0 = solve_lyapunov(a, spec.d0)
    dt = max_rk4_step(d.omega_m, d.kappa)
    _, traj = propagate(a, const, v0, 50 * dt, dt, n_samples=4)
    for v in traj:
        assert np.linalg.norm(v - v0) <= 1e-8 * np.linalg.norm(v0)


def test_propagate_scalar_analytic_oracle():
    a = -0.5 * np.eye(8)
    spec = DiffusionSpec(d0=np.eye(8), d2=np.zeros((8, 8), complex), mod_freq=1.0)
    times, traj = propagate(a, spec, np.zeros((8, 8)), 5.0, 1e-3, n_samples=10,
                            check_physical=False)
    for t, v in zip(times, traj):
        assert np.allclose(v, (1 - np.exp(-t)) * np.eye(8), atol=1e-9)


def test_propagate_rejects_large_step(reference_system):
    d, a, spec = reference_system
    dt = max_rk4_step(d.omega_m, d.kappa)
    with pytest.raises(ValueError):
        propagate(a, spec, np.zeros((8, 8)), 1e-5, 10 * dt)


def test_propagation_converges_to_harmonic_balance(reference_system):
    d, a, spec = reference_system
    pss = solve_periodic(a, spec)
    slowest = -np.max(np.linalg.eigvals(a).real)
    dt = max_rk4_step(d.omega_m, d.kappa) / 8.0
    t_relax = 30.0 / slowest
    times, traj = propagate(a, spec, np.zeros((8, 8)), t_relax, dt, n_samples=1,
                            check_physical=False)
    times2, traj2 = propagate(a, spec, traj[-1], pss.period, dt, n_samples=8,
                              t0=times[-1], check_physical=False)
    for t, v in zip(times2, traj2):
        ref = pss.sample(t)
        assert np.linalg.norm(v - ref) <= 1e-6 * np.linalg.norm(ref)


def test_spectral_oracle_scalar():
    v0 = spectral_oracle(-0.5 * np.eye(4), np.eye(4))
    assert np.allclose(v0, np.eye(4), rtol=1e-6)


def test_spectral_oracle_matches_lyapunov_no_squeezing():
    d = derive(with_point(REFERENCE_PARAMS, squeezing_r=0.0))
    a = build_drift(d)
    d0 = build_diffusion(d).d0
    ref = solve_lyapunov(a, d0)
    est = spectral_oracle(a, d0)
    assert np.linalg.norm(est - ref) <= 1e-4 * np.linalg.norm(ref)


def test_spectral_oracle_window_self_convergence(reference_system):
    d, a, spec = reference_system
    scale = np.max(np.abs(np.linalg.eigvals(a)))
    coarse = spectral_oracle(a, spec.d0, max_freq=100 * scale)
    fine = spectral_oracle(a, spec.d0, max_freq=200 * scale)
    assert np.linalg.norm(fine - coarse) <= 1e-5 * np.linalg.norm(fine)


def test_extract_identity_permutation():
    assert np.allclose(extract_mechanical(0.5 * np.eye(8)), 0.5 * np.eye(4))
    assert np.allclose(extract_optical(0.5 * np.eye(8)), 0.5 * np.eye(4))


def test_extract_block_structure():
    v = np.zeros((8, 8))
    v[0:2, 0:2] = [[1.0, 0.1], [0.1, 2.0]]     # mech 1
    v[4:6, 4:6] = [[3.0, 0.2], [0.2, 4.0]]     # mech 2
    vm = extract_mechanical(v)
    assert np.allclose(vm[:2, :2], [[1.0, 0.1], [0.1, 2.0]])
    assert np.allclose(vm[2:, 2:], [[3.0, 0.2], [0.2, 4.0]])
    assert not np.any(vm[:2, 2:])


def test_extract_rejects_wrong_shape():
    with pytest.raises(ValueError):
        extract_mechanical(np.eye(4))


def test_reference_point_has_mechanical_cross_correlations(reference_system):
    d, a, spec = reference_system
    pss = solve_periodic(a, spec)
    vm = extract_mechanical(pss.sample(0.0))
    assert np.abs(vm[:2, 2:]).max() > 1e-3


def test_cm_json_roundtrip(reference_system):
    d, a, spec = reference_system
    v0 = solve_lyapunov(a, spec.d0)
    v, basis = cm_from_json(cm_to_json(v0))
    assert np.array_equal(v, v0)
    assert basis[0] == "dQ1"
