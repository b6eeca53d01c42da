"""Figure rendering for the matching experiment CSVs."""

from .figures import FIGURE_IDS, FigureSpec, NoDataError, SchemaError, render

__version__ = "0.1.0"
