"""Two-stage semi-implicit time integrator with slope limiting.

Streaming is explicit (midpoint predictor/corrector), the opacity coupling
is backward Euler within each stage, and the quartic emission is replaced
by its closed-form implicit value so each node solve is linear.  Coupling
across bands enters only through the summed zeroth moments, so the node
solve reduces to scalar relations plus one rank-one correction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .materials import (
    THETA_FLOOR,
    MaterialModel,
    PhysicalConstants,
    SourceModel,
    opacity,
    temperature_update,
    theta4_affine,
)
from .mesh_dg import BoundarySpec, DgField, Mesh1D, ghost_cell_averages, streaming_rhs
from .velocity import ClosureSpec


@dataclass
class StepControl:
    cfl: float = 0.3
    t_end: float = 0.0
    limiter_alpha: float = 2.0
    limiter_enabled: bool = True   # False disables slope limiting entirely
    limit_per_stage: bool = True   # False limits only after the full step
    theta_min: float = 0.0         # ambient temperature floor (keV), 0 = off


def compute_dt(mesh: Mesh1D, closure: ClosureSpec, control: StepControl,
               constants: PhysicalConstants) -> float:
    """dt = CFL * dz / (c * rho(A))."""
    return control.cfl * mesh.dz / (constants.c * closure.spectral_radius)


def minmod(a, b, c):
    """Sign-matched minimum magnitude of three slopes, else zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    same = (np.sign(a) == np.sign(b)) & (np.sign(b) == np.sign(c))
    mag = np.minimum(np.abs(a), np.minimum(np.abs(b), np.abs(c)))
    out = np.where(same, np.sign(a) * mag, 0.0)
    return out if out.ndim else float(out)


def limit(field: DgField, bc: BoundarySpec, t: float,
          alpha: float = 2.0) -> None:
    """Double-minmod slope limiter, in place; preserves cell averages."""
    U = field.U
    ubar = 0.5 * (U[:, 0, :] + U[:, 1, :])
    gl, gr = ghost_cell_averages(field, bc, t)
    ext = np.concatenate([gl[None, :], ubar, gr[None, :]], axis=0)
    s = minmod(
        U[:, 1, :] - U[:, 0, :],
        alpha * (ext[1:-1] - ext[:-2]),
        alpha * (ext[2:] - ext[1:-1]),
    )
    U[:, 0, :] = ubar - 0.5 * s
    U[:, 1, :] = ubar + 0.5 * s


@dataclass
class ImplicitNodeProblem:
    """One node's implicit-stage data."""

    explicit_part: np.ndarray   # moments after the explicit streaming update
    theta_n: float
    sigma: float
    dt: float                   # full step size
    stage: str                  # "half" | "full"


def _implicit_solve(b: np.ndarray, theta_n: np.ndarray, sigma: np.ndarray,
                    dt: float, stage: str, closure: ClosureSpec,
                    material: MaterialModel, constants: PhysicalConstants):
    """Rank-one closed-form solve of the implicit stage relations.

    b, theta_n, sigma broadcast over leading axes; returns (U_new, theta4).
    """
    c = constants.c
    tau = 0.5 * dt if stage == "half" else dt
    cts = c * tau * sigma
    d = 1.0 + cts
    p, q = theta4_affine(theta_n, sigma, dt, stage, material, constants,
                         closure.bands.delta_mu)
    emis = cts * constants.a * c
    B = np.sum(b[..., closure.zeroth_idx], axis=-1)
    denom = d - closure.T * emis * q
    if np.any(denom <= 0.0):
        raise SolverError("non-positive rank-one denominator in implicit solve")
    S = (B + closure.T * emis * p) / denom
    theta4 = p + q * S
    U_new = b / d[..., None]
    U_new[..., closure.zeroth_idx] = (
        b[..., closure.zeroth_idx] + (emis * theta4)[..., None]
    ) / d[..., None]
    return U_new, theta4


def implicit_node_solve(problem: ImplicitNodeProblem, closure: ClosureSpec,
                        material: MaterialModel, constants: PhysicalConstants):
    """Single-node implicit solve; returns (new moments, theta~^4)."""
    U, theta4 = _implicit_solve(
        np.asarray(problem.explicit_part, dtype=float),
        np.asarray(problem.theta_n, dtype=float),
        np.asarray(problem.sigma, dtype=float),
        problem.dt, problem.stage, closure, material, constants,
    )
    return U, float(theta4)


def _source_term(source: SourceModel, t: float, field: DgField,
                 e_vec: np.ndarray) -> np.ndarray:
    if source is None or source.is_zero:
        return 0.0
    s = source(t, field.mesh.node_z)            # (n_cells, 2)
    return s[..., None] * e_vec


def step(field: DgField, bc: BoundarySpec, material: MaterialModel,
         control: StepControl, source: SourceModel,
         constants: PhysicalConstants, t: float, dt: float) -> DgField:
    """Advance the field by one predictor/corrector step of size dt."""
    closure = field.closure
    c = constants.c
    e_vec = closure.emission_vector()
    theta_n = field.theta
    # opacity frozen at the cell-averaged start-of-step temperature: a nodal
    # 1/theta^3 opacity varies by many decades across a front cell, and the
    # resulting nodewise implicit scalings destabilize steep fronts at
    # relaxed CFL numbers
    theta_bar = 0.5 * (theta_n[:, 0] + theta_n[:, 1])
    sigma = opacity(material.opacity, np.maximum(theta_bar, THETA_FLOOR))
    sigma = np.broadcast_to(np.atleast_1d(sigma)[:, None], theta_n.shape)

    try:
        # predictor: half step, emission linearized about theta^n.  The
        # slope limiter acts on the explicit stage state before the nodal
        # implicit solve, so strongly absorbing cells never equilibrate
        # against unlimited undershoots.
        rhs = streaming_rhs(field, bc, t) + _source_term(source, t, field, e_vec)
        b = field.U + (0.5 * c * dt) * rhs
        U_half, _ = _implicit_solve(b, theta_n, sigma, dt, "half",
                                    closure, material, constants)
        half = DgField(field.mesh, closure, U_half, theta_n)
        if control.limiter_enabled and control.limit_per_stage:
            limit(half, bc, t + 0.5 * dt, control.limiter_alpha)

        # corrector: full step from t^n using the half-state fluxes
        rhs = streaming_rhs(half, bc, t + 0.5 * dt) \
            + _source_term(source, t + 0.5 * dt, field, e_vec)
        b = field.U + (c * dt) * rhs
        U_new, _ = _implicit_solve(b, theta_n, sigma, dt, "full",
                                   closure, material, constants)
        out = DgField(field.mesh, closure, U_new, theta_n)
        if control.limiter_enabled:
            limit(out, bc, t + dt, control.limiter_alpha)
        # the material update reads the limited end-of-step moments: at a
        # strongly absorbing node next to a front, unlimited DG transients
        # can starve the node's zeroth moments and drive theta negative
        moment_sum = np.sum(out.U[..., closure.zeroth_idx], axis=-1)
        theta_new = temperature_update(theta_n, moment_sum, sigma, dt,
                                       material, constants,
                                       closure.bands.delta_mu,
                                       theta_min=control.theta_min)
        out.theta = np.asarray(theta_new)
        return out
    except SolverError as err:
        raise SolverError(f"{err} (t={t:.6e}, dt={dt:.3e})") from err


def evolve(field: DgField, bc: BoundarySpec, material: MaterialModel,
           control: StepControl, source: SourceModel,
           constants: PhysicalConstants, output_times):
    """March from t=0, yielding (t, field, n_steps) at each output time.

    The step size is the CFL value except for truncated steps that land
    exactly on output times.
    """
    dt_nominal = compute_dt(field.mesh, field.closure, control, constants)
    t = 0.0
    n_steps = 0
    for t_out in output_times:
        if t_out <= 0.0:
            yield t, field.copy(), n_steps
            continue
        while t < t_out - 1e-14 * t_out:
            dt = min(dt_nominal, t_out - t)
            field = step(field, bc, material, control, source, constants, t, dt)
            t += dt
            n_steps += 1
        t = t_out
        yield t_out, field.copy(), n_steps
