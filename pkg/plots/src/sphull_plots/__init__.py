"""Figure rendering for sphull CSV output."""

from .reader import SchemaError, read_rows
from .render import render_curve, render_deficiency, render_hist

__version__ = "1.0.0"

__all__ = ["SchemaError", "read_rows", "render_curve", "render_deficiency",
           "render_hist"]
