"""Grey thermal radiative transfer in slab geometry with a hybrid banded
angular closure, a nodal DG spatial discretization, and a semi-implicit
predictor/corrector time integrator."""

from .errors import BandradError, ConfigError, SolverError
from .integrator import StepControl, compute_dt, evolve, step
from .materials import (
    HeatCapacityModel,
    MaterialModel,
    OpacityModel,
    PhysicalConstants,
    SourceModel,
)
from .mesh_dg import (
    BoundarySpec,
    DgField,
    Dirichlet,
    Mesh1D,
    Periodic,
    Reflective,
    Vacuum,
)
from .problems import (
    BENCHMARK_NAMES,
    ProblemSetup,
    error_norms,
    exact_bilateral_E,
    exact_vacuum_E,
    radiation_temperature,
    setup_benchmark,
)
from .velocity import (
    ClosureSpec,
    build_closure,
    project_intensity,
    radiation_energy,
    reconstruct_intensity,
)

__version__ = "1.0.0"

__all__ = [
    "BENCHMARK_NAMES",
    "BandradError",
    "BoundarySpec",
    "ClosureSpec",
    "ConfigError",
    "DgField",
    "Dirichlet",
    "HeatCapacityModel",
    "MaterialModel",
    "Mesh1D",
    "OpacityModel",
    "Periodic",
    "PhysicalConstants",
    "ProblemSetup",
    "Reflective",
    "SolverError",
    "SourceModel",
    "StepControl",
    "Vacuum",
    "build_closure",
    "compute_dt",
    "error_norms",
    "evolve",
    "exact_bilateral_E",
    "exact_vacuum_E",
    "project_intensity",
    "radiation_energy",
    "radiation_temperature",
    "reconstruct_intensity",
    "setup_benchmark",
    "step",
]
