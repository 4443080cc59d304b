"""Configuration-driven command line: single runs, convergence sweeps, suites.

Configs are single JSON documents; every benchmark default is a real
default, so a minimal config is ``{"problem": "vacuum"}``.  Each run writes
one CSV per output time (nodal ``z, E_over_a, theta, theta_rad``) plus a
JSON summary that echoes the resolved config.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import ConfigError, SolverError
from .integrator import StepControl, evolve
from .mesh_dg import Periodic
from .problems import (
    ProblemSetup,
    coarsen_reference,
    error_norms,
    exact_bilateral_E,
    exact_vacuum_E,
    interp_su_olson,
    load_su_olson_reference,
    setup_benchmark,
)
from .velocity import build_closure, radiation_energy

CSV_HEADER = "z,E_over_a,theta,theta_rad"

RUN_KEYS = {
    "problem", "T", "N", "nz", "cfl", "limiter_alpha", "limiter_enabled",
    "limit_per_stage",
    "theta_min", "label", "output_times", "output_cts", "moment_dump",
    "parameters", "mode", "nz_list", "reference_nz", "quantity",
}


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from err
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    unknown = set(cfg) - RUN_KEYS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    return cfg


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply repeated ``key=value`` strings; values parse as JSON or string."""
    cfg = dict(cfg)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        if "." in key:
            head, tail = key.split(".", 1)
            sub = dict(cfg.get(head) or {})
            sub[tail] = value
            cfg[head] = sub
        else:
            cfg[key] = value
    return cfg


def _build_setup(cfg: dict) -> ProblemSetup:
    name = cfg.get("problem")
    if not name:
        raise ConfigError("config field 'problem' is required")
    params = dict(cfg.get("parameters") or {})
    setup = setup_benchmark(name, **params)
    c = setup.constants.c
    if cfg.get("output_times") is not None and cfg.get("output_cts") is not None:
        raise ConfigError("give output_times (s) or output_cts (cm), not both")
    if cfg.get("output_times") is not None:
        times = tuple(float(t) for t in cfg["output_times"])
    elif cfg.get("output_cts") is not None:
        times = tuple(float(ct) / c for ct in cfg["output_cts"])
    else:
        times = setup.output_times
    if any(t < 0 for t in times) or list(times) != sorted(times):
        raise ConfigError("output times must be non-negative and increasing")
    return dataclasses.replace(setup, output_times=times,
                               t_end=times[-1] if times else setup.t_end)


def _resolve(cfg: dict, setup: ProblemSetup) -> dict:
    """Fill every defaulted knob so the echo reproduces the run exactly."""
    c = setup.constants.c
    out = {
        "problem": setup.name,
        "T": int(cfg.get("T", setup.default_T)),
        "N": int(cfg.get("N", setup.default_N)),
        "nz": int(cfg.get("nz", setup.default_nz)),
        "cfl": float(cfg.get("cfl", setup.cfl)),
        "limiter_alpha": float(cfg.get("limiter_alpha", 2.0)),
        "limiter_enabled": bool(cfg.get("limiter_enabled", True)),
        "limit_per_stage": bool(cfg.get("limit_per_stage", True)),
        "theta_min": float(cfg.get("theta_min", setup.theta_min)),
        "label": cfg.get("label", setup.name),
        "output_times": [float(t) for t in setup.output_times],
        "output_cts": [float(t) * c for t in setup.output_times],
        "moment_dump": bool(cfg.get("moment_dump", False)),
        "parameters": dict(cfg.get("parameters") or {}),
    }
    if out["nz"] < 1 or out["cfl"] <= 0:
        raise ConfigError("nz must be >= 1 and cfl > 0")
    return out


def _material_energy(field, material, constants):
    """Material internal energy density per node (erg cm^-3)."""
    if material.heat_capacity.variant == "cubic":
        return constants.a * field.theta**4
    return material.heat_capacity.cv * field.theta


def _total_energy(field, material, constants):
    closure = field.closure
    E = radiation_energy(field.U, closure, constants.c)
    dz = field.mesh.dz
    return 0.5 * dz * float(np.sum(E + _material_energy(field, material, constants)))


def _reference_norms(setup, t, z, E_over_a, theta):
    c = setup.constants.c
    if setup.reference == "bilateral":
        try:
            ref = exact_bilateral_E(t, z, c)
        except ConfigError:      # profile only defined for 0 < ct < 0.3
            return None
        return {"E_over_a": error_norms(E_over_a, ref)}
    if setup.reference == "vacuum":
        return {"E_over_a": error_norms(E_over_a, exact_vacuum_E(t, z, c))}
    if setup.reference == "su_olson_table":
        try:
            e_ref, th_ref = interp_su_olson(c * t, z, load_su_olson_reference())
        except ConfigError:
            return None
        return {"E_over_a": error_norms(E_over_a, e_ref),
                "theta": error_norms(theta, th_ref)}
    return None


def run_config(cfg: dict, output_dir) -> dict:
    """Execute one run; returns the summary dict (also written to disk)."""
    setup = _build_setup(cfg)
    resolved = _resolve(cfg, setup)
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    closure = build_closure(resolved["T"], resolved["N"],
                            allow_zero_eigenvalues=True)
    mesh = setup.mesh(resolved["nz"])
    field = setup.initial_field(mesh, closure)
    bc = setup.boundary(closure)
    control = StepControl(
        cfl=resolved["cfl"], t_end=setup.t_end,
        limiter_alpha=resolved["limiter_alpha"],
        limiter_enabled=resolved["limiter_enabled"],
        limit_per_stage=resolved["limit_per_stage"],
        theta_min=resolved["theta_min"],
    )
    constants = setup.constants
    a, c = constants.a, constants.c
    z = mesh.node_z.ravel()

    start_total = _total_energy(field, setup.material, constants)
    conserving = isinstance(bc.left, Periodic) and setup.source.is_zero

    t0 = time.perf_counter()
    outputs = []
    n_steps = 0
    end_total = start_total
    for k, (t, snap, n_steps) in enumerate(evolve(
            field, bc, setup.material, control, setup.source,
            constants, setup.output_times)):
        E = radiation_energy(snap.U, closure, c).ravel() / a
        theta = snap.theta.ravel()
        theta_rad = (np.maximum(E, 0.0)) ** 0.25
        csv_path = outdir / f"{resolved['label']}_{k:02d}.csv"
        np.savetxt(csv_path, np.column_stack([z, E, theta, theta_rad]),
                   delimiter=",", header=CSV_HEADER, comments="", fmt="%.17g")
        if resolved["moment_dump"]:
            mom_path = outdir / f"{resolved['label']}_{k:02d}_moments.csv"
            header = ",".join(["z"] + [f"u{m}" for m in range(closure.size)])
            np.savetxt(mom_path,
                       np.column_stack([z, snap.U.reshape(-1, closure.size)]),
                       delimiter=",", header=header, comments="", fmt="%.17g")
        outputs.append({
            "t_s": t, "ct_cm": c * t, "csv": csv_path.name,
            "norms": _reference_norms(setup, t, z, E, theta),
        })
        end_total = _total_energy(snap, setup.material, constants)
    wall = time.perf_counter() - t0

    summary = {
        "config": resolved,
        "closure": {"T": closure.T, "N": closure.N, "dof": closure.size,
                    "spectral_radius": closure.spectral_radius},
        "wall_time_s": wall,
        "n_steps": n_steps,
        "outputs": outputs,
        "conservation_drift": (
            (end_total - start_total) / start_total if conserving else None),
    }
    with open(outdir / f"{resolved['label']}_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return summary


# --- convergence sweeps -----------------------------------------------------

def _cell_average_run(cfg: dict, nz: int) -> np.ndarray:
    """Cell-averaged sweep quantity at t_end for one resolution."""
    setup = _build_setup(cfg)
    resolved = _resolve(cfg, setup)
    closure = build_closure(resolved["T"], resolved["N"],
                            allow_zero_eigenvalues=True)
    mesh = setup.mesh(nz)
    field = setup.initial_field(mesh, closure)
    bc = setup.boundary(closure)
    control = StepControl(
        cfl=resolved["cfl"], t_end=setup.t_end,
        limiter_alpha=resolved["limiter_alpha"],
        limiter_enabled=resolved["limiter_enabled"],
        limit_per_stage=resolved["limit_per_stage"],
        theta_min=resolved["theta_min"],
    )
    snap = None
    for _, snap, _ in evolve(field, bc, setup.material, control, setup.source,
                             setup.constants, (setup.t_end,)):
        pass
    quantity = cfg.get("quantity", "theta")
    if quantity == "theta":
        vals = snap.theta
    elif quantity == "E_over_a":
        vals = radiation_energy(snap.U, closure, setup.constants.c) / setup.constants.a
    else:
        raise ConfigError(f"unknown sweep quantity {quantity!r}")
    return 0.5 * (vals[:, 0] + vals[:, 1])


def convergence_config(cfg: dict, output_dir, jobs: int = 1) -> dict:
    """Self-convergence sweep against a fine-mesh reference run."""
    nz_list = cfg.get("nz_list")
    ref_nz = cfg.get("reference_nz")
    if not nz_list or not ref_nz:
        raise ConfigError("convergence config needs nz_list and reference_nz")
    nz_list = [int(n) for n in nz_list]
    ref_nz = int(ref_nz)
    for nz in nz_list:
        ratio = ref_nz / nz
        if nz < 1 or ratio != int(ratio) or (int(ratio) & (int(ratio) - 1)):
            raise ConfigError(
                f"nz={nz} must divide reference_nz={ref_nz} by a power of two")

    setup = _build_setup(cfg)
    resolved = _resolve(cfg, setup)
    length = setup.z_right - setup.z_left
    reference = _cell_average_run(cfg, ref_nz)

    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            coarse = list(pool.map(_cell_average_run, [cfg] * len(nz_list), nz_list))
    else:
        coarse = [_cell_average_run(cfg, nz) for nz in nz_list]

    entries = []
    for nz, vals in zip(nz_list, coarse):
        proj = reference
        while proj.size > nz:
            proj = coarsen_reference(proj)
        norms = error_norms(vals, proj, domain_length=length)
        entries.append({"nz": nz, "dz": length / nz, **norms})

    logs_h = np.log2([e["dz"] for e in entries])
    logs_e = np.log2([e["l2"] for e in entries])
    slope = float(np.polyfit(logs_h, logs_e, 1)[0])
    table = {
        "config": {**resolved, "nz_list": nz_list, "reference_nz": ref_nz,
                   "quantity": cfg.get("quantity", "theta")},
        "entries": entries,
        "slope": slope,
    }
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / f"{resolved['label']}_convergence.json", "w") as fh:
        json.dump(table, fh, indent=2)
    return table


# --- entry points -----------------------------------------------------------

def _dispatch(cfg: dict, output_dir, jobs: int):
    mode = cfg.get("mode", "convergence" if "nz_list" in cfg else "run")
    if mode == "run":
        return run_config(cfg, output_dir)
    if mode == "convergence":
        return convergence_config(cfg, output_dir, jobs)
    raise ConfigError(f"unknown config mode {mode!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bandrad",
        description="banded-closure radiative transfer benchmark driver")
    parser.add_argument("--output-dir", default="out")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--override", action="append", default=[],
                        metavar="KEY=VALUE")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run").add_argument("config")
    sub.add_parser("convergence").add_argument("config")
    sub.add_parser("suite").add_argument("config_dir")

    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            paths = sorted(Path(args.config_dir).glob("*.json"))
            if not paths:
                raise ConfigError(f"no .json configs in {args.config_dir}")
            for path in paths:
                cfg = apply_overrides(load_config(path), args.override)
                _dispatch(cfg, args.output_dir, args.jobs)
                print(f"{path.name}: ok")
        else:
            cfg = apply_overrides(load_config(args.config), args.override)
            if args.command == "run":
                summary = run_config(cfg, args.output_dir)
                drift = summary["conservation_drift"]
                print(f"{summary['config']['label']}: {summary['n_steps']} steps, "
                      f"{summary['wall_time_s']:.2f} s"
                      + (f", drift {drift:.3e}" if drift is not None else ""))
            else:
                table = convergence_config(cfg, args.output_dir, args.jobs)
                print(f"{table['config']['label']}: slope {table['slope']:.3f}")
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
