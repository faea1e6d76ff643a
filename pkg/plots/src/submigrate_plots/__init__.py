"""Charts for submigrate experiment CSV output."""
from .render import KINDS, REQUIRED_COLUMNS, PlotSpec, RenderSummary, load_rows, render

__all__ = ["KINDS", "REQUIRED_COLUMNS", "PlotSpec", "RenderSummary",
           "load_rows", "render"]
__version__ = "0.1.0"
