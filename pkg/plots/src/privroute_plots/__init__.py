"""Static figure rendering for simulator CSV outputs."""

from .render import PlotJob, RenderResult, SchemaError, build_figure, main, render

__all__ = ["PlotJob", "RenderResult", "SchemaError", "build_figure", "main", "render"]
