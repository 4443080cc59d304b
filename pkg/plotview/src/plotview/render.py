"""Declarative figure rendering from solver CSV/JSON artifacts.

A recipe is a single JSON document describing one figure: a list of panels,
each holding data series (CSV columns or convergence-table entries) plus an
optional reference overlay (analytic profile or log-log slope guide).
Rendering is read-only over its inputs and fully deterministic.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


class RecipeError(Exception):
    """Invalid recipe or missing/incomplete input artifact."""


# --- analytic reference profiles --------------------------------------------
# Re-derived locally from the benchmark definitions so this package only
# touches the solver's published file formats, never its code.

def vacuum_E(ct: float, z):
    """Scaled radiation energy for streaming from a hot wall into vacuum."""
    z = np.asarray(z, dtype=float)
    return np.clip(1.0 - z / ct, 0.0, 1.0) if ct > 0 else np.zeros_like(z)


def bilateral_E(ct: float, z):
    """Scaled radiation energy for the beam + isotropic-step inflow problem."""
    z = np.asarray(z, dtype=float)
    ramp = (z - 0.8 + ct) / (2.0 * ct)
    return np.where(z <= 0.2 + ct, 1.0,
                    np.where(z <= 0.8 - ct, 0.0,
                             np.where(z <= 0.8 + ct, ramp, 1.0)))


ANALYTIC = {"vacuum_E": vacuum_E, "bilateral_E": bilateral_E}


# --- input readers ----------------------------------------------------------

def read_csv_columns(path: Path, names):
    """Columns ``names`` from a headered CSV as float arrays."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as err:
        raise RecipeError(f"missing input file: {path}") from err
    if not rows:
        raise RecipeError(f"empty input file: {path}")
    header = [h.strip() for h in rows[0]]
    cols = []
    for name in names:
        if name not in header:
            raise RecipeError(f"column {name!r} not in {path} "
                              f"(has {header})")
        idx = header.index(name)
        cols.append(np.array([float(r[idx]) for r in rows[1:]]))
    return cols


def read_convergence(path: Path, norm: str):
    """(dz, error) points from a convergence-table JSON."""
    try:
        with open(path) as fh:
            table = json.load(fh)
    except OSError as err:
        raise RecipeError(f"missing input file: {path}") from err
    except json.JSONDecodeError as err:
        raise RecipeError(f"{path} is not valid JSON: {err}") from err
    entries = table.get("entries")
    if not entries:
        raise RecipeError(f"no convergence entries in {path}")
    for key in ("dz", norm):
        if any(key not in e for e in entries):
            raise RecipeError(f"column {key!r} not in {path} entries")
    dz = np.array([e["dz"] for e in entries], dtype=float)
    err = np.array([e[norm] for e in entries], dtype=float)
    order = np.argsort(dz)
    return dz[order], err[order]


# --- recipe handling --------------------------------------------------------

def load_recipe(path) -> dict:
    try:
        with open(path) as fh:
            recipe = json.load(fh)
    except OSError as err:
        raise RecipeError(f"cannot read recipe {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise RecipeError(f"recipe {path} is not valid JSON: {err}") from err
    if not isinstance(recipe, dict):
        raise RecipeError(f"recipe {path} must be a JSON object")
    if not recipe.get("output"):
        raise RecipeError(f"recipe {path} has no 'output' image path")
    panels = recipe.get("panels")
    if not panels:
        raise RecipeError(f"recipe {path} has no panels")
    if any(not p.get("series") for p in panels):
        raise RecipeError(f"recipe {path} has a panel with no series")
    return recipe


def _plot_series(ax, series, data_dir: Path, loglog: bool):
    """Draw one series; returns its (x, y) for slope-guide anchoring."""
    style = series.get("style", "-")
    label = series.get("label")
    if "csv" in series:
        x, y = read_csv_columns(data_dir / series["csv"],
                                [series.get("x", "z"),
                                 series.get("y", "E_over_a")])
    elif "json" in series:
        x, y = read_convergence(data_dir / series["json"],
                                series.get("norm", "l2"))
    else:
        raise RecipeError(f"series needs a 'csv' or 'json' source: {series}")
    plot = ax.loglog if loglog else ax.plot
    plot(x, y, style, label=label, markersize=4, linewidth=1.2)
    return x, y


def _draw_reference(ax, ref, first_xy, loglog: bool):
    if "analytic" in ref:
        name = ref["analytic"]
        if name not in ANALYTIC:
            raise RecipeError(f"unknown analytic reference {name!r} "
                              f"(have {sorted(ANALYTIC)})")
        x = np.linspace(*ax.get_xlim(), 600)
        ax.plot(x, ANALYTIC[name](float(ref["ct"]), x), "k--",
                linewidth=1.0, label=ref.get("label", "exact"))
    elif "slope" in ref:
        if not loglog:
            raise RecipeError("slope guides require loglog scale")
        s = float(ref["slope"])
        x, y = first_xy
        # anchor the guide slightly below the coarsest data point
        guide = 0.7 * y[-1] * (x / x[-1]) ** s
        ax.loglog(x, guide, "k--", linewidth=1.0,
                  label=ref.get("label", f"slope {s:g}"))
    else:
        raise RecipeError(f"reference needs 'analytic' or 'slope': {ref}")


def render(recipe_path, data_dir=".", output_dir=".") -> Path:
    """Render one recipe; returns the written image path."""
    recipe = load_recipe(recipe_path)
    data_dir = Path(data_dir)
    panels = recipe["panels"]
    loglog = recipe.get("scale", "linear") == "loglog"

    ncols = min(len(panels), 2)
    nrows = -(-len(panels) // ncols)
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(5.0 * ncols, 3.6 * nrows))
    try:
        for ax in axes.ravel()[len(panels):]:
            ax.set_axis_off()
        for panel, ax in zip(panels, axes.ravel()):
            first_xy = None
            for series in panel["series"]:
                xy = _plot_series(ax, series, data_dir, loglog)
                first_xy = first_xy or xy
            if loglog:
                # annotate the least-squares slope of the first series
                x, y = first_xy
                slope = np.polyfit(np.log(x), np.log(y), 1)[0]
                ax.set_title(panel.get("title", ""), fontsize=10)
                ax.text(0.05, 0.92, f"fitted slope {slope:.2f}",
                        transform=ax.transAxes, fontsize=9, va="top")
            else:
                ax.set_title(panel.get("title", ""), fontsize=10)
            if panel.get("reference"):
                _draw_reference(ax, panel["reference"], first_xy, loglog)
            ax.set_xlabel(panel.get("xlabel", recipe.get("xlabel", "z")))
            ax.set_ylabel(panel.get("ylabel", recipe.get("ylabel", "")))
            ax.grid(True, which="both", alpha=0.3)
            if any(s.get("label") for s in panel["series"]) \
                    or panel.get("reference"):
                ax.legend(fontsize=8, loc=panel.get("legend", "best"))
        if recipe.get("title"):
            fig.suptitle(recipe["title"])
        fig.tight_layout()
        out = Path(output_dir) / recipe["output"]
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=150)
    finally:
        plt.close(fig)
    return out


def render_all(recipe_dir, data_dir=".", output_dir="."):
    """Render every *.json recipe in a directory; returns image paths."""
    paths = sorted(Path(recipe_dir).glob("*.json"))
    if not paths:
        raise RecipeError(f"no .json recipes in {recipe_dir}")
    return [render(p, data_dir, output_dir) for p in paths]
