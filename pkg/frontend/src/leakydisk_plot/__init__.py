"""Plot renderer for leakydisk spectrum CSV files."""

from .render import PlotSpec, SchemaError, build_figure, render

__all__ = ["PlotSpec", "SchemaError", "build_figure", "render"]
__version__ = "0.1.0"
