"""Closure construction: bands, spectra, projections, reconstructions."""

import numpy as np
import pytest

from bandrad.errors import ConfigError
from bandrad.velocity import (
    ClosureSpec,
    build_bands,
    build_closure,
    legendre,
    project_intensity,
    radiation_energy,
    reconstruct_intensity,
    reflect_moments,
    streaming_block,
)

AC = 1.372e14 * 3.0e10


def legendre_roots(n):
    """Independent root oracle: numpy's Legendre companion eigenvalues."""
    coeffs = np.zeros(n + 1)
    coeffs[-1] = 1.0
    return np.sort(np.polynomial.legendre.legroots(coeffs))


def test_band_mesh_geometry():
    bands = build_bands(4)
    assert bands.delta_mu == pytest.approx(0.5)
    assert np.allclose(bands.mu_centers, [-0.75, -0.25, 0.25, 0.75])


def test_streaming_block_tridiagonal():
    J = streaming_block(3)
    k = np.arange(3)
    assert np.allclose(np.diag(J, 1), (k + 1) / (2 * k + 1))
    assert np.allclose(np.diag(J, -1), (k + 1) / (2 * k + 3))
    assert np.count_nonzero(J - np.diag(np.diag(J, 1), 1)
                            - np.diag(np.diag(J, -1), -1)) == 0


def test_block_matrices_shift_plus_scaled_block():
    closure = build_closure(3, 2, allow_zero_eigenvalues=True)
    J = streaming_block(2)
    for j in range(3):
        expect = closure.bands.mu_centers[j] * np.eye(3) \
            + 0.5 * closure.bands.delta_mu * J
        assert np.allclose(closure.block_matrices[j], expect)


def test_eigenvalue_structure_against_root_oracle():
    # eigenvalues are mu_j + (delta_mu/2) s_k with s_k the P_{N+1} roots
    for T in range(1, 9):
        for N in range(0, 8):
            closure = build_closure(T, N, allow_zero_eigenvalues=True)
            s = legendre_roots(N + 1)
            expect = np.sort(
                (closure.bands.mu_centers[:, None]
                 + 0.5 * closure.bands.delta_mu * s[None, :]).ravel())
            got = np.sort(np.linalg.eigvals(closure.full_matrix).real)
            assert np.max(np.abs(got - expect)) < 1e-10, (T, N)
            if expect.size > 1:
                assert np.min(np.diff(expect)) > 1e-12, (T, N)
            assert closure.spectral_radius < 1.0


def test_zero_eigenvalue_flagged_for_odd_T_even_N():
    with pytest.raises(ConfigError):
        build_closure(3, 2)
    closure = build_closure(3, 2, allow_zero_eigenvalues=True)
    assert np.min(np.abs(np.linalg.eigvals(closure.full_matrix))) < 1e-12
    build_closure(2, 2)   # even T never hits zero


def test_reduction_single_band_is_tridiagonal_moment_system():
    closure = build_closure(1, 5, allow_zero_eigenvalues=False)
    assert np.array_equal(closure.full_matrix, streaming_block(5))


def test_reduction_degree_zero_is_midpoint_ordinates():
    closure = build_closure(4, 0)
    assert np.array_equal(closure.full_matrix,
                          np.diag(closure.bands.mu_centers))


def test_abs_matrix_spectrum():
    closure = build_closure(3, 3)
    lam = np.sort(np.abs(np.linalg.eigvals(closure.full_matrix).real))
    lam_abs = np.sort(np.linalg.eigvals(closure.full_abs_matrix).real)
    assert np.max(np.abs(lam - lam_abs)) < 1e-12


def test_abs_matrix_commutes_and_dominates():
    closure = build_closure(2, 3)
    A, M = closure.full_matrix, closure.full_abs_matrix
    assert np.allclose(A @ M, M @ A, atol=1e-12)
    # |A| +/- A have non-negative spectra
    for sign in (1.0, -1.0):
        lam = np.linalg.eigvals(M + sign * A).real
        assert np.min(lam) > -1e-12


def test_project_isotropic():
    closure = build_closure(3, 2, allow_zero_eigenvalues=True)
    u = project_intensity(lambda mu: 0.5 * AC, closure)
    for j in range(3):
        assert u[3 * j] == pytest.approx(AC, rel=1e-13)
        assert np.allclose(u[3 * j + 1:3 * j + 3], 0.0, atol=1e-10 * AC)


def test_project_dirac_forward_beam():
    closure = build_closure(2, 2)
    u = project_intensity(None, closure, ((1.0, AC),))
    dmu = closure.bands.delta_mu
    assert np.allclose(u[:3], 0.0)
    assert np.allclose(u[3:], 2.0 * AC / dmu)


def test_project_zero():
    closure = build_closure(2, 1)
    assert np.array_equal(project_intensity(lambda mu: 0.0, closure),
                          np.zeros(4))


def test_dirac_on_interior_band_boundary_rejected():
    closure = build_closure(2, 1)
    with pytest.raises(ConfigError):
        project_intensity(None, closure, ((0.0, 1.0),))


def test_radiation_energy_matches_quadrature():
    closure = build_closure(3, 4, allow_zero_eigenvalues=True)
    intensity = lambda mu: 1.0 + 0.3 * mu + 0.2 * mu**3
    u = project_intensity(intensity, closure)
    c = 3.0e10
    x, w = np.polynomial.legendre.leggauss(8)
    exact = np.sum(w * np.array([intensity(m) for m in x])) / c
    assert radiation_energy(u, closure, c) == pytest.approx(exact, rel=1e-12)


def test_reconstruct_project_roundtrip():
    # a band-local polynomial ansatz survives projection + reconstruction
    closure = build_closure(2, 3)
    rng = np.random.default_rng(7)
    u = rng.normal(size=closure.size)
    for mu in (-0.9, -0.3, 0.1, 0.77):
        val = reconstruct_intensity(u, closure, mu)
        u2 = project_intensity(lambda m: reconstruct_intensity(u, closure, m),
                               closure)
        assert np.allclose(u2, u, atol=1e-12)
        assert np.isfinite(val)


def test_reflect_moments_involution_and_energy():
    closure = build_closure(2, 2)
    rng = np.random.default_rng(3)
    u = rng.normal(size=closure.size)
    r = reflect_moments(u, closure)
    assert np.allclose(reflect_moments(r, closure), u)
    c = 3.0e10
    assert radiation_energy(r, closure, c) == pytest.approx(
        radiation_energy(u, closure, c), rel=1e-12)
    # reflection flips mu: reconstructed intensities mirror
    for mu in (0.3, 0.8):
        assert reconstruct_intensity(r, closure, -mu) == pytest.approx(
            reconstruct_intensity(u, closure, mu), rel=1e-12)


def test_legendre_recurrence_values():
    alpha = np.linspace(-1, 1, 11)
    assert np.allclose(legendre(0, alpha), 1.0)
    assert np.allclose(legendre(1, alpha), alpha)
    assert np.allclose(legendre(2, alpha), 0.5 * (3 * alpha**2 - 1))
