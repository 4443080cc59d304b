"""Mesh geometry, upwind fluxes, boundary ghosts, streaming operator."""

import numpy as np
import pytest

from bandrad.errors import ConfigError
from bandrad.mesh_dg import (
    BoundarySpec,
    DgField,
    Dirichlet,
    Mesh1D,
    Periodic,
    Reflective,
    Vacuum,
    face_fluxes,
    ghost_state,
    numerical_flux,
    streaming_rhs,
)
from bandrad.velocity import build_closure, project_intensity, reflect_moments


def test_mesh_geometry():
    mesh = Mesh1D(0.0, 1.0, 4)
    assert mesh.dz == pytest.approx(0.25)
    assert np.allclose(mesh.centers, [0.125, 0.375, 0.625, 0.875])
    assert np.allclose(mesh.node_z[0], [0.0, 0.25])
    with pytest.raises(ConfigError):
        Mesh1D(1.0, 0.0, 4)
    with pytest.raises(ConfigError):
        Mesh1D(0.0, 1.0, 0)


def test_flux_consistency():
    closure = build_closure(2, 3)
    rng = np.random.default_rng(0)
    u = rng.normal(size=closure.size)
    assert np.allclose(numerical_flux(u, u, closure),
                       closure.full_matrix @ u, atol=1e-13)


def test_flux_pure_upwind_on_diagonal_closure():
    # T=2, N=0: speeds -1/2 and +1/2; each component picks its upwind trace
    closure = build_closure(2, 0)
    u_minus = np.array([1.0, 2.0])
    u_plus = np.array([3.0, 4.0])
    F = numerical_flux(u_minus, u_plus, closure)
    assert F[0] == pytest.approx(-0.5 * u_plus[0])
    assert F[1] == pytest.approx(0.5 * u_minus[1])


def test_flux_matches_characteristic_splitting_oracle():
    closure = build_closure(2, 3)
    A = closure.full_matrix
    lam, V = np.linalg.eig(A)
    lam = lam.real
    V = V.real
    Vinv = np.linalg.inv(V)
    rng = np.random.default_rng(42)
    for _ in range(5):
        um, up = rng.normal(size=(2, closure.size))
        expect = V @ (np.maximum(lam, 0.0) * (Vinv @ um)) \
            + V @ (np.minimum(lam, 0.0) * (Vinv @ up))
        assert np.allclose(numerical_flux(um, up, closure), expect, atol=1e-12)


def test_ghost_states():
    closure = build_closure(2, 1)
    trace = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(ghost_state(trace, "left", Vacuum(), closure), 0.0)
    moments = project_intensity(lambda mu: 1.0, closure)
    g = ghost_state(trace, "left", Dirichlet(moments=moments), closure)
    assert np.allclose(g, moments)
    r = ghost_state(trace, "right", Reflective(), closure)
    assert np.allclose(r, reflect_moments(trace, closure))


def test_periodic_must_pair():
    with pytest.raises(ConfigError):
        BoundarySpec(Periodic(), Vacuum())


def test_constant_state_is_steady_with_matching_dirichlet():
    closure = build_closure(2, 2)
    mesh = Mesh1D(0.0, 1.0, 8)
    u = project_intensity(lambda mu: 0.7 + 0.2 * mu, closure)
    field = DgField.zeros(mesh, closure)
    field.U[:] = u
    bc = BoundarySpec(Dirichlet(moments=u), Dirichlet(moments=u))
    rhs = streaming_rhs(field, bc, 0.0)
    assert np.max(np.abs(rhs)) < 1e-12 * np.max(np.abs(u))


def test_periodic_streaming_conserves_cell_average_sum():
    closure = build_closure(2, 1)
    mesh = Mesh1D(0.0, 2.0, 16)
    rng = np.random.default_rng(1)
    field = DgField.zeros(mesh, closure)
    field.U[:] = rng.normal(size=field.U.shape)
    bc = BoundarySpec(Periodic(), Periodic())
    rhs = streaming_rhs(field, bc, 0.0)
    avg_rate = 0.5 * (rhs[:, 0, :] + rhs[:, 1, :])
    assert np.max(np.abs(np.sum(avg_rate, axis=0))) < 1e-10


def test_face_fluxes_shape_and_periodic_wrap():
    closure = build_closure(2, 0)
    mesh = Mesh1D(0.0, 1.0, 4)
    field = DgField.zeros(mesh, closure)
    field.U[:, :, :] = np.arange(8).reshape(4, 2, 1)
    bc = BoundarySpec(Periodic(), Periodic())
    F = face_fluxes(field, bc, 0.0)
    assert F.shape == (5, 2)
    assert np.allclose(F[0], F[-1])


def test_streaming_advects_at_closure_speed():
    # an N=0 band profile advects at exactly mu_j: the cell-averaged rhs is
    # a second-order approximation of -mu_j du/dz for a smooth sine profile
    closure = build_closure(2, 0)
    mesh = Mesh1D(0.0, 1.0, 256)
    field = DgField.zeros(mesh, closure)
    z = mesh.node_z
    field.U[:, :, 0] = np.sin(2 * np.pi * z)
    field.U[:, :, 1] = np.sin(2 * np.pi * z)
    bc = BoundarySpec(Periodic(), Periodic())
    rhs = streaming_rhs(field, bc, 0.0)
    avg = 0.5 * (rhs[:, 0, :] + rhs[:, 1, :])
    expect = -2 * np.pi * np.cos(2 * np.pi * mesh.centers)
    assert np.allclose(avg[:, 0], -0.5 * expect, atol=5e-3)
    assert np.allclose(avg[:, 1], 0.5 * expect, atol=5e-3)
