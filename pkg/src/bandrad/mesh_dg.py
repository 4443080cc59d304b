"""Spatial mesh, piecewise-linear nodal DG operators, and boundary states.

Each cell carries two nodes (left/right cell endpoints).  Faces use an
upwind flux built from the flux matrix and its absolute value; boundary
faces are closed with ghost moment vectors and the Riemann flux performs
the characteristic selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError
from .velocity import ClosureSpec, project_intensity, reflect_moments


@dataclass(frozen=True)
class Mesh1D:
    z_left: float
    z_right: float
    n_cells: int

    def __post_init__(self):
        if self.z_left >= self.z_right:
            raise ConfigError("mesh requires z_left < z_right")
        if self.n_cells < 1:
            raise ConfigError("mesh requires at least one cell")

    @property
    def dz(self) -> float:
        return (self.z_right - self.z_left) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.z_left + (np.arange(self.n_cells) + 0.5) * self.dz

    @property
    def node_z(self) -> np.ndarray:
        """Node positions, shape (n_cells, 2): cell endpoints."""
        c = self.centers
        return np.stack([c - 0.5 * self.dz, c + 0.5 * self.dz], axis=1)


@dataclass
class DgField:
    """Nodal DG coefficients for the moments and the material temperature."""

    mesh: Mesh1D
    closure: ClosureSpec
    U: np.ndarray       # (n_cells, 2, (N+1)T)
    theta: np.ndarray   # (n_cells, 2)

    @classmethod
    def zeros(cls, mesh: Mesh1D, closure: ClosureSpec,
              theta0: float = 0.0) -> "DgField":
        return cls(mesh, closure,
                   np.zeros((mesh.n_cells, 2, closure.size)),
                   np.full((mesh.n_cells, 2), float(theta0)))

    def copy(self) -> "DgField":
        return DgField(self.mesh, self.closure, self.U.copy(), self.theta.copy())


# --- boundary conditions ----------------------------------------------------

@dataclass(frozen=True)
class Vacuum:
    kind: str = "vacuum"


@dataclass(frozen=True)
class Reflective:
    kind: str = "reflective"


@dataclass(frozen=True)
class Periodic:
    kind: str = "periodic"


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed outside state, as a fixed ghost moment vector or I(mu)."""

    moments: Optional[np.ndarray] = None
    intensity: Optional[Callable] = None
    diracs: tuple = ()
    kind: str = "dirichlet"

    def ghost(self, closure: ClosureSpec) -> np.ndarray:
        if self.moments is not None:
            return np.asarray(self.moments, dtype=float)
        return project_intensity(self.intensity, closure, self.diracs)


@dataclass(frozen=True)
class BoundarySpec:
    left: object
    right: object

    def __post_init__(self):
        if isinstance(self.left, Periodic) != isinstance(self.right, Periodic):
            raise ConfigError("periodic boundaries must be used on both ends")


def numerical_flux(u_minus: np.ndarray, u_plus: np.ndarray,
                   closure: ClosureSpec) -> np.ndarray:
    """Upwind face flux (1/2)A(u- + u+) - (1/2)|A|(u+ - u-).

    u_minus is the trace from the left cell (its right node), u_plus the
    trace from the right cell (its left node).  Broadcasts over leading axes.
    """
    avg = closure.apply(closure.block_matrices, u_minus + u_plus)
    jump = closure.apply(closure.abs_blocks, u_plus - u_minus)
    return 0.5 * (avg - jump)


def ghost_state(interior_trace: np.ndarray, side: str, bc,
                closure: ClosureSpec, t: float = 0.0) -> np.ndarray:
    """Ghost moment vector just outside the boundary."""
    if isinstance(bc, Vacuum):
        return np.zeros_like(interior_trace)
    if isinstance(bc, Dirichlet):
        return bc.ghost(closure)
    if isinstance(bc, Reflective):
        return reflect_moments(interior_trace, closure)
    raise ConfigError(f"cannot build a ghost state for boundary {bc!r}")


def face_fluxes(field: DgField, bc: BoundarySpec, t: float) -> np.ndarray:
    """Fluxes at the n_cells+1 faces, shape (n_cells+1, (N+1)T)."""
    U, closure = field.U, field.closure
    n = field.mesh.n_cells
    u_minus = np.empty((n + 1, closure.size))
    u_plus = np.empty((n + 1, closure.size))
    u_minus[1:] = U[:, 1, :]
    u_plus[:-1] = U[:, 0, :]
    if isinstance(bc.left, Periodic):
        u_minus[0] = U[-1, 1, :]
        u_plus[-1] = U[0, 0, :]
    else:
        u_minus[0] = ghost_state(U[0, 0, :], "left", bc.left, closure, t)
        u_plus[-1] = ghost_state(U[-1, 1, :], "right", bc.right, closure, t)
    return numerical_flux(u_minus, u_plus, closure)


def streaming_rhs(field: DgField, bc: BoundarySpec, t: float) -> np.ndarray:
    """Streaming right-hand side (1/c dU/dt contribution) per node.

    Returns shape (n_cells, 2, (N+1)T).  Node 0 receives
    +[2F_{i+1/2} + 4F_{i-1/2} - 3A(U_i1 + U_i2)]/dz and node 1 the
    matching expression with the opposite sign and swapped face weights.
    """
    F = face_fluxes(field, bc, t)
    closure = field.closure
    dz = field.mesh.dz
    AU = closure.apply(closure.block_matrices, field.U[:, 0, :] + field.U[:, 1, :])
    rhs = np.empty_like(field.U)
    rhs[:, 0, :] = (2.0 * F[1:] + 4.0 * F[:-1] - 3.0 * AU) / dz
    rhs[:, 1, :] = -(4.0 * F[1:] + 2.0 * F[:-1] - 3.0 * AU) / dz
    return rhs


def ghost_cell_averages(field: DgField, bc: BoundarySpec, t: float):
    """Cell averages just outside each boundary, for the slope limiter."""
    ubar = 0.5 * (field.U[:, 0, :] + field.U[:, 1, :])
    if isinstance(bc.left, Periodic):
        return ubar[-1], ubar[0]
    closure = field.closure
    left = ghost_state(ubar[0], "left", bc.left, closure, t)
    right = ghost_state(ubar[-1], "right", bc.right, closure, t)
    return left, right
