"""Static SVG charts for sweep CSVs produced by the simulation CLI."""

from .render import render, render_svg
from .series import OPTIONAL_CURVE, REQUIRED_COLUMNS, SchemaError, SweepSeries, load_series

__version__ = "0.1.0"

__all__ = [
    "OPTIONAL_CURVE",
    "REQUIRED_COLUMNS",
    "SchemaError",
    "SweepSeries",
    "load_series",
    "render",
    "render_svg",
]
