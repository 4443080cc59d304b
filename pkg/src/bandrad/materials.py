"""Material physics: constants, opacity/heat-capacity laws, emission algebra.

The implicit stages of the time integrator need the quartic emission term
expressed as an affine function of the summed zeroth band moments; both the
linearized constant-capacity algebra and the exact cubic-capacity solve are
provided in that form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SolverError

THETA_FLOOR = 1e-10  # keV, guards 1/theta^3 opacities


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 3.0e10        # speed of light, cm/s
    a: float = 1.372e14      # radiation constant, erg cm^-3 keV^-4

    def __post_init__(self):
        if self.c <= 0 or self.a <= 0:
            raise ConfigError("physical constants must be positive")


@dataclass(frozen=True)
class OpacityModel:
    """Constant opacity or the power law kappa/theta^3 (cm^-1)."""

    variant: str             # "constant" | "power_law"
    coefficient: float       # sigma0 [cm^-1] or kappa [cm^-1 keV^3]

    @classmethod
    def constant(cls, sigma0: float) -> "OpacityModel":
        return cls("constant", sigma0)

    @classmethod
    def power_law(cls, kappa: float) -> "OpacityModel":
        return cls("power_law", kappa)


def opacity(model: OpacityModel, theta):
    """sigma(theta) in cm^-1; theta must be positive (clamp first)."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0.0):
        raise ConfigError("opacity requires theta > 0; clamp to the floor first")
    if model.variant == "constant":
        return np.broadcast_to(model.coefficient, theta.shape).copy() \
            if theta.ndim else model.coefficient
    if model.variant == "power_law":
        val = model.coefficient / theta**3
        return val if theta.ndim else float(val)
    raise ConfigError(f"unknown opacity variant {model.variant!r}")


@dataclass(frozen=True)
class HeatCapacityModel:
    """Constant C_v, or the cubic law C_v = 4*a*theta^3."""

    variant: str             # "constant" | "cubic"
    cv: float = 0.3e16       # erg cm^-3 keV^-1, used by "constant"

    @classmethod
    def constant(cls, cv: float = 0.3e16) -> "HeatCapacityModel":
        return cls("constant", cv)

    @classmethod
    def cubic(cls) -> "HeatCapacityModel":
        return cls("cubic")


@dataclass(frozen=True)
class MaterialModel:
    opacity: OpacityModel
    heat_capacity: HeatCapacityModel


@dataclass(frozen=True)
class SourceModel:
    """Space-time box external source (erg cm^-3 s^-1), or zero."""

    amplitude: float = 0.0
    z_lo: float = -np.inf
    z_hi: float = np.inf
    t_lo: float = 0.0
    t_hi: float = np.inf

    def __call__(self, t, z):
        z = np.asarray(z, dtype=float)
        if self.amplitude == 0.0:
            return np.zeros_like(z)
        inside = (z >= self.z_lo) & (z <= self.z_hi) & (t >= self.t_lo) & (t <= self.t_hi)
        return np.where(inside, self.amplitude, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0


def planck_b(theta, constants: PhysicalConstants):
    """Frequency-integrated blackbody emission a*c*theta^4 / 2."""
    return 0.5 * constants.a * constants.c * np.asarray(theta, dtype=float) ** 4


def theta4_affine(theta_n, sigma, dt, stage, material: MaterialModel,
                  constants: PhysicalConstants, delta_mu: float):
    """Coefficients (p, q) of the implicit emission value theta~^4 = p + q*S.

    S is the sum over bands of the zeroth moments at the new stage time.
    For constant capacity this is the closed-form linearization of the
    quartic term; for cubic capacity the backward-Euler material equation is
    linear in theta^4 and solved exactly.
    """
    if stage not in ("half", "full"):
        raise ConfigError(f"stage must be 'half' or 'full', got {stage!r}")
    theta_n = np.asarray(theta_n, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    a, c = constants.a, constants.c
    hc = material.heat_capacity
    if hc.variant == "constant":
        cv = hc.cv
        th3 = theta_n**3
        fac = 1.0 if stage == "half" else 2.0
        denom = cv + 2.0 * fac * dt * a * c * sigma * th3
        p = cv * th3 * theta_n / denom
        q = fac * dt * delta_mu * sigma * th3 / denom
        return p, q
    if hc.variant == "cubic":
        tau = 0.5 * dt if stage == "half" else dt
        # signed power keeps the linear-in-theta^4 equation exact when a
        # wavefront undershoot drives theta^4 transiently negative
        w_n = theta_n * np.abs(theta_n) ** 3
        denom = a / tau + sigma * a * c
        p = (a / tau) * w_n / denom
        q = (sigma * delta_mu / 2.0) / denom
        return p, q
    raise ConfigError(f"unknown heat capacity variant {hc.variant!r}")


def linearized_theta4(theta_n, moment_sum, sigma, dt, stage,
                      material: MaterialModel, constants: PhysicalConstants,
                      delta_mu: float):
    """Linearized implicit emission theta~^4 for a given moment sum."""
    if material.heat_capacity.variant != "constant":
        raise ConfigError("linearized_theta4 applies to constant heat capacity")
    p, q = theta4_affine(theta_n, sigma, dt, stage, material, constants, delta_mu)
    return p + q * np.asarray(moment_sum, dtype=float)


def exact_theta4_cubic(theta_n, moment_sum, sigma, dt, stage,
                       constants: PhysicalConstants, delta_mu: float):
    """Backward-Euler solve of the cubic-capacity material equation in theta^4."""
    material = MaterialModel(OpacityModel.constant(0.0), HeatCapacityModel.cubic())
    p, q = theta4_affine(theta_n, sigma, dt, stage, material, constants, delta_mu)
    return p + q * np.asarray(moment_sum, dtype=float)


def temperature_update(theta_n, moment_sum_new, sigma, dt,
                       material: MaterialModel, constants: PhysicalConstants,
                       delta_mu: float, theta_min: float = 0.0):
    """End-of-step material temperature from the already-solved moments.

    Constant capacity uses the explicit-cost linearized update; cubic
    capacity takes the fourth root of the exact theta^4 solve.  A positive
    ``theta_min`` clamps the result from below; cold ambient material next
    to a steep front is otherwise driven below its bath temperature by
    stiffness-amplified roundoff in the radiation moments.
    """
    theta_n = np.asarray(theta_n, dtype=float)
    moment_sum_new = np.asarray(moment_sum_new, dtype=float)
    a, c = constants.a, constants.c
    if material.heat_capacity.variant == "cubic":
        w = exact_theta4_cubic(theta_n, moment_sum_new, sigma, dt, "full",
                               constants, delta_mu)
        theta_new = np.sign(w) * np.abs(w) ** 0.25
        return np.maximum(theta_new, theta_min) if theta_min > 0.0 else theta_new
    cv = material.heat_capacity.cv
    th3 = theta_n**3
    num = sigma * dt * (0.5 * delta_mu * moment_sum_new - a * c * theta_n**4)
    theta_new = theta_n + num / (cv + 4.0 * dt * a * c * sigma * th3)
    if theta_min > 0.0:
        return np.maximum(theta_new, theta_min)
    if np.any(theta_new <= 0.0):
        bad = np.argwhere(np.atleast_1d(theta_new) <= 0.0)[0]
        raise SolverError(
            f"non-positive temperature at node index {tuple(bad)}; "
            "time step too large or invalid data"
        )
    return theta_new
