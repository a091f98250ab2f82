"""Figure rendering for rislab experiment CSVs.

This package is a pure consumer of the simulator's documented result
format: CSV files with columns ``snr_db,value,std_error,method,label``
(absent values as empty fields).  It never imports the simulator.
"""

from risfig.schema import Point, SchemaError, Series, load_results
from risfig.figspecs import FIGSPECS, FigureSpec
from risfig.render import RenderError, build_figure, render

__all__ = [
    "FIGSPECS",
    "FigureSpec",
    "Point",
    "RenderError",
    "SchemaError",
    "Series",
    "build_figure",
    "load_results",
    "render",
]
