"""Benchmark problem configurations, exact/reference solutions, and norms."""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, SolverError
from .materials import (
    HeatCapacityModel,
    MaterialModel,
    OpacityModel,
    PhysicalConstants,
    SourceModel,
)
from .mesh_dg import BoundarySpec, DgField, Dirichlet, Mesh1D, Periodic, Vacuum
from .velocity import ClosureSpec, project_intensity

BENCHMARK_NAMES = (
    "bilateral", "vacuum", "su_olson",
    "marshak_diffusive", "marshak_thin", "marshak_smooth",
)


@dataclass
class ProblemSetup:
    """Complete description of one benchmark run."""

    name: str
    z_left: float
    z_right: float
    default_nz: int
    default_T: int
    default_N: int
    material: MaterialModel
    source: SourceModel
    t_end: float                       # seconds
    output_times: tuple                # seconds, ends with t_end
    cfl: float
    constants: PhysicalConstants
    # initial_intensity(z) -> (smooth callable of mu or None, dirac pairs)
    initial_intensity: Callable
    initial_theta: Callable            # z -> keV
    bc_factory: Callable               # closure -> BoundarySpec
    reference: Optional[str] = None    # "bilateral" | "vacuum" | "su_olson_table"
    theta_min: float = 0.0             # ambient temperature floor, 0 disables
    parameters: dict = field(default_factory=dict)

    def boundary(self, closure: ClosureSpec) -> BoundarySpec:
        return self.bc_factory(closure)

    def mesh(self, n_cells: Optional[int] = None) -> Mesh1D:
        return Mesh1D(self.z_left, self.z_right, n_cells or self.default_nz)

    def initial_field(self, mesh: Mesh1D, closure: ClosureSpec) -> DgField:
        fld = DgField.zeros(mesh, closure)
        zs = mesh.node_z
        for i in range(mesh.n_cells):
            for j in range(2):
                smooth, diracs = self.initial_intensity(zs[i, j])
                fld.U[i, j, :] = project_intensity(smooth, closure, diracs)
                fld.theta[i, j] = self.initial_theta(zs[i, j])
        return fld


# --- exact solutions --------------------------------------------------------

def exact_bilateral_E(t: float, z, c: float):
    """Scaled radiation energy E/a for the bilateral inflow problem."""
    ct = c * t
    if not (0.0 < ct < 0.3):
        raise ConfigError(f"bilateral exact profile requires 0 < ct < 0.3, got ct={ct}")
    z = np.asarray(z, dtype=float)
    ramp = (z - 0.8 + ct) / (2.0 * ct)
    out = np.where(z <= 0.2 + ct, 1.0,
                   np.where(z <= 0.8 - ct, 0.0,
                            np.where(z <= 0.8 + ct, ramp, 1.0)))
    return out if out.ndim else float(out)


def exact_vacuum_E(t: float, z, c: float):
    """Scaled radiation energy E/a for streaming into a vacuum."""
    z = np.asarray(z, dtype=float)
    ct = c * t
    out = np.clip(1.0 - z / ct, 0.0, 1.0) if ct > 0 else np.zeros_like(z)
    return out if out.ndim else float(out)


def radiation_temperature(E, a: float):
    """theta_rad = (E/a)^(1/4); rejects negative energies."""
    E = np.asarray(E, dtype=float)
    if np.any(E < 0.0):
        raise SolverError("negative radiation energy; limiter missing or unstable")
    out = (E / a) ** 0.25
    return out if out.ndim else float(out)


def error_norms(numeric, reference, domain_length: Optional[float] = None):
    """L2 and Linf of the sample-point differences.

    With ``domain_length`` None the L2 norm is sqrt(sum diff^2 / N); with a
    length it is the domain-scaled sqrt(length/N * sum diff^2).
    """
    numeric = np.asarray(numeric, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if numeric.shape != reference.shape:
        raise ConfigError("error_norms requires equal-length sample arrays")
    diff = numeric - reference
    n = diff.size
    scale = 1.0 / n if domain_length is None else domain_length / n
    return {
        "l2": float(np.sqrt(scale * np.sum(diff**2))),
        "linf": float(np.max(np.abs(diff))),
    }


def coarsen_reference(values: np.ndarray) -> np.ndarray:
    """Project onto the next coarser mesh by pairwise averaging."""
    values = np.asarray(values, dtype=float)
    if values.size % 2 != 0:
        raise ConfigError("coarsening requires an even number of samples")
    return 0.5 * (values[0::2] + values[1::2])


def load_su_olson_reference():
    """Bundled reference table, as {ct: (z, E_over_a, theta)} with z >= 0."""
    path = importlib.resources.files("bandrad.data") / "su_olson_transport.txt"
    data = np.loadtxt(str(path))
    out = {}
    for ct in np.unique(data[:, 0]):
        rows = data[data[:, 0] == ct]
        out[float(ct)] = (rows[:, 1], rows[:, 2], rows[:, 3])
    return out


def interp_su_olson(ct: float, z, table=None):
    """Reference (E_over_a, theta) at |z|, interpolated from the table."""
    table = table or load_su_olson_reference()
    key = min(table, key=lambda c: abs(c - ct))
    if abs(key - ct) > 1e-6 * max(1.0, ct):
        raise ConfigError(f"no reference slice at ct={ct}")
    zs, e, th = table[key]
    az = np.abs(np.asarray(z, dtype=float))
    return np.interp(az, zs, e), np.interp(az, zs, th)


# --- benchmark setups -------------------------------------------------------

def _isotropic(value: float):
    return (lambda mu: value), ()


def setup_benchmark(name: str, constants: Optional[PhysicalConstants] = None,
                    **params) -> ProblemSetup:
    """Benchmark configuration by name; see BENCHMARK_NAMES."""
    constants = constants or PhysicalConstants()
    a, c = constants.a, constants.c
    ac = a * c

    if name == "bilateral":
        ct_end = params.pop("ct_end", 0.1)
        t_end = ct_end / c

        def initial(z):
            if z <= 0.2:
                return None, ((1.0, ac),)
            if z < 0.8:
                return None, ()
            return _isotropic(0.5 * ac)

        def bc(closure):
            left = Dirichlet(moments=project_intensity(None, closure, ((1.0, ac),)))
            right = Dirichlet(moments=project_intensity(lambda mu: 0.5 * ac, closure))
            return BoundarySpec(left, right)

        return ProblemSetup(
            name=name, z_left=0.0, z_right=1.0, default_nz=500,
            default_T=2, default_N=2,
            material=MaterialModel(OpacityModel.constant(0.0),
                                   HeatCapacityModel.constant()),
            source=SourceModel(), t_end=t_end, output_times=(t_end,),
            cfl=params.pop("cfl", 0.3), constants=constants,
            initial_intensity=initial, initial_theta=lambda z: 1.0,
            bc_factory=bc, reference="bilateral",
            parameters={"ct_end": ct_end, **params},
        )

    if name == "vacuum":
        t_end = params.pop("t_end", 2.5e-11)

        def bc(closure):
            left = Dirichlet(moments=project_intensity(lambda mu: ac, closure))
            return BoundarySpec(left, Vacuum())

        return ProblemSetup(
            name=name, z_left=0.0, z_right=1.0, default_nz=100,
            default_T=8, default_N=1,
            material=MaterialModel(OpacityModel.constant(0.0),
                                   HeatCapacityModel.constant()),
            source=SourceModel(), t_end=t_end, output_times=(t_end,),
            cfl=params.pop("cfl", 0.3), constants=constants,
            initial_intensity=lambda z: (None, ()),
            initial_theta=lambda z: 1.0,
            bc_factory=bc, reference="vacuum", parameters=params,
        )

    if name == "su_olson":
        ct_end = params.pop("ct_end", 10.0)
        t_end = ct_end / c
        half_width = ct_end + 1.0
        out_cts = params.pop("output_cts", None)
        times = tuple(ct / c for ct in out_cts) if out_cts else (t_end,)
        return ProblemSetup(
            name=name, z_left=-half_width, z_right=half_width, default_nz=100,
            default_T=2, default_N=2,
            material=MaterialModel(OpacityModel.constant(1.0),
                                   HeatCapacityModel.cubic()),
            source=SourceModel(amplitude=ac, z_lo=-0.5, z_hi=0.5),
            t_end=t_end, output_times=times,
            cfl=params.pop("cfl", 0.3), constants=constants,
            initial_intensity=lambda z: (None, ()),
            initial_theta=lambda z: 0.0,
            bc_factory=lambda closure: BoundarySpec(Periodic(), Periodic()),
            reference="su_olson_table",
            parameters={"ct_end": ct_end, **params},
        )

    if name in ("marshak_diffusive", "marshak_thin"):
        if name == "marshak_diffusive":
            kappa, theta0, z_right = 300.0, 1.0e-4, 0.6
            t_end = params.pop("t_end", 1.0e-7)
            times = params.pop("output_times", (1.0e-8, 5.0e-8, 1.0e-7))
            nz, cfl = 15, params.pop("cfl", 1.7)
        else:
            kappa, theta0, z_right = 3.0, 1.0e-5, 0.35
            t_end = params.pop("t_end", 1.0e-9)
            times = params.pop("output_times", (t_end,))
            nz, cfl = 400, params.pop("cfl", 0.3)

        def bc(closure):
            left = Dirichlet(moments=project_intensity(lambda mu: 0.5 * ac, closure))
            return BoundarySpec(left, Vacuum())

        return ProblemSetup(
            name=name, z_left=0.0, z_right=z_right, default_nz=nz,
            default_T=2, default_N=2,
            material=MaterialModel(OpacityModel.power_law(kappa),
                                   HeatCapacityModel.constant()),
            source=SourceModel(), t_end=t_end, output_times=tuple(times),
            cfl=cfl, constants=constants,
            initial_intensity=lambda z: _isotropic(0.5 * ac * theta0**4),
            initial_theta=lambda z: theta0,
            bc_factory=bc, reference=None,
            theta_min=theta0,
            parameters={"theta0": theta0, **params},
        )

    if name == "marshak_smooth":
        ct_end = params.pop("ct_end", 0.3)   # output time is not pinned down
        t_end = ct_end / c

        def profile(z):
            return 1.0 - 0.498 * (1.0 + np.tanh(50.0 * (z - 0.25)))

        def bc(closure):
            left = Dirichlet(moments=project_intensity(
                lambda mu: 0.5 * ac * profile(0.0), closure))
            return BoundarySpec(left, Vacuum())

        return ProblemSetup(
            name=name, z_left=0.0, z_right=0.8, default_nz=128,
            default_T=2, default_N=2,
            material=MaterialModel(OpacityModel.power_law(3.0),
                                   HeatCapacityModel.constant()),
            source=SourceModel(), t_end=t_end, output_times=(t_end,),
            cfl=params.pop("cfl", 0.3), constants=constants,
            initial_intensity=lambda z: _isotropic(0.5 * ac * profile(z)),
            initial_theta=lambda z: float(profile(z)) ** 0.25,
            bc_factory=bc, reference=None,
            parameters={"ct_end": ct_end, **params},
        )

    raise ConfigError(
        f"unknown benchmark {name!r}; expected one of {BENCHMARK_NAMES}")
