"""Material laws and the affine implicit-emission algebra."""

import numpy as np
import pytest

from bandrad.errors import ConfigError, SolverError
from bandrad.materials import (
    HeatCapacityModel,
    MaterialModel,
    OpacityModel,
    PhysicalConstants,
    SourceModel,
    exact_theta4_cubic,
    linearized_theta4,
    opacity,
    planck_b,
    temperature_update,
    theta4_affine,
)

CONST = PhysicalConstants()


def test_constants_validation():
    with pytest.raises(ConfigError):
        PhysicalConstants(c=-1.0)


def test_opacity_laws():
    assert opacity(OpacityModel.constant(5.0), 0.3) == 5.0
    assert opacity(OpacityModel.power_law(300.0), 0.5) == pytest.approx(2400.0)
    with pytest.raises(ConfigError):
        opacity(OpacityModel.power_law(1.0), 0.0)


def test_planck_emission():
    assert planck_b(1.0, CONST) == pytest.approx(0.5 * CONST.a * CONST.c)
    assert planck_b(2.0, CONST) == pytest.approx(8.0 * CONST.a * CONST.c)


def test_source_box():
    s = SourceModel(amplitude=2.0, z_lo=-0.5, z_hi=0.5, t_hi=1.0)
    z = np.array([-1.0, 0.0, 0.4, 0.6])
    assert np.allclose(s(0.5, z), [0.0, 2.0, 2.0, 0.0])
    assert np.allclose(s(2.0, z), 0.0)
    assert SourceModel().is_zero


def test_linearized_constant_capacity_residual():
    # theta~^4 = p + q S must satisfy the linearized backward-Euler material
    # relation Cv (theta~ - theta_n) = tau sigma (dmu/2 S - a c theta~^4)
    # with tau = dt/2 (half) or dt (full) and theta~^4 expanded to first
    # order about theta_n
    material = MaterialModel(OpacityModel.constant(4.0),
                             HeatCapacityModel.constant())
    a, c = CONST.a, CONST.c
    cv = material.heat_capacity.cv
    dmu, sigma, dt, theta_n = 1.0, 4.0, 1e-12, 0.7
    S = 3.0e24
    for stage, fac in (("half", 1.0), ("full", 2.0)):
        th4 = linearized_theta4(theta_n, S, sigma, dt, stage, material,
                                CONST, dmu)
        tau = 0.5 * fac * dt
        dtheta = (th4 - theta_n**4) / (4.0 * theta_n**3)
        lhs = cv * dtheta
        rhs = tau * sigma * (0.5 * dmu * S - a * c * th4)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_exact_cubic_residual():
    # cubic capacity: (a/tau)(w - w_n) = sigma (dmu/2 S - a c w), w = theta^4
    a, c = CONST.a, CONST.c
    dmu, sigma, dt, theta_n = 0.5, 1.0, 1e-11, 0.4
    S = 1.0e24
    for stage, tau in (("half", 0.5 * dt), ("full", dt)):
        w = exact_theta4_cubic(theta_n, S, sigma, dt, stage, CONST, dmu)
        lhs = (a / tau) * (w - theta_n**4)
        rhs = sigma * (0.5 * dmu * S - a * c * w)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_affine_rejects_bad_stage_and_variant():
    material = MaterialModel(OpacityModel.constant(1.0),
                             HeatCapacityModel.constant())
    with pytest.raises(ConfigError):
        theta4_affine(1.0, 1.0, 1e-12, "third", material, CONST, 1.0)
    with pytest.raises(ConfigError):
        linearized_theta4(1.0, 1.0, 1.0, 1e-12, "full",
                          MaterialModel(OpacityModel.constant(1.0),
                                        HeatCapacityModel.cubic()),
                          CONST, 1.0)


def test_temperature_update_equilibrium_fixed_point():
    # radiation in Planck equilibrium with the material leaves theta unchanged
    material = MaterialModel(OpacityModel.constant(10.0),
                             HeatCapacityModel.constant())
    theta = 0.8
    T_bands, dmu = 2, 1.0
    # S such that (dmu/2) S = a c theta^4 summed over bands
    S = 2.0 * CONST.a * CONST.c * theta**4 / dmu
    out = temperature_update(theta, S, 10.0, 1e-12, material, CONST, dmu)
    assert out == pytest.approx(theta, rel=1e-13)


def test_temperature_update_cubic_energy_balance():
    # a(theta_new^4 - theta_n^4) equals the backward-Euler exchange exactly
    material = MaterialModel(OpacityModel.constant(1.0),
                             HeatCapacityModel.cubic())
    a, c = CONST.a, CONST.c
    theta_n, sigma, dt, dmu = 0.3, 1.0, 2e-11, 1.0
    S = 5.0e23
    theta = temperature_update(theta_n, S, sigma, dt, material, CONST, dmu)
    w = float(theta) ** 4
    lhs = a * (w - theta_n**4) / dt
    rhs = sigma * (0.5 * dmu * S - a * c * w)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_temperature_update_signed_quartic_root():
    # strong transient absorption of a cold node can push theta^4 negative;
    # the signed fourth root keeps the update defined and sign-consistent
    material = MaterialModel(OpacityModel.constant(1.0),
                             HeatCapacityModel.cubic())
    theta = temperature_update(1e-3, -1.0e22, 1.0, 1e-9, material, CONST, 1.0)
    assert theta < 0.0
    assert np.isfinite(theta)


def test_temperature_update_floor_and_error():
    material = MaterialModel(OpacityModel.constant(50.0),
                             HeatCapacityModel.constant(cv=1.0))
    # a spuriously negative moment sum drives theta negative without a floor
    with pytest.raises(SolverError):
        temperature_update(0.5, -1.0e30, 50.0, 1.0, material, CONST, 1.0)
    out = temperature_update(0.5, -1.0e30, 50.0, 1.0, material, CONST, 1.0,
                             theta_min=1e-4)
    assert out == pytest.approx(1e-4)
