"""Batch figure renderer for solver CSV/JSON run artifacts."""

from .render import (
    ANALYTIC,
    RecipeError,
    bilateral_E,
    load_recipe,
    read_convergence,
    read_csv_columns,
    render,
    render_all,
    vacuum_E,
)

__version__ = "1.0.0"

__all__ = [
    "ANALYTIC",
    "RecipeError",
    "bilateral_E",
    "load_recipe",
    "read_convergence",
    "read_csv_columns",
    "render",
    "render_all",
    "vacuum_E",
]
