"""Publication-style figures from einsel CSV artifacts."""

__version__ = "0.1.0"

from .figures import FIGURE_KINDS, FigureSpec, SchemaMismatch, read_table, render

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaMismatch", "read_table", "render"]
