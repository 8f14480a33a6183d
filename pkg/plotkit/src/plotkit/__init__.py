"""Batch figure rendering for simulation record files.

plotkit never recomputes physics: it reads the CSV/JSON records emitted by
the simulation CLI (and, for scaling plots, the companion fit JSON) and
renders heatmaps, per-initial-state panels, edge-bulk difference maps, and
the semilog lifetime plot with its fitted line.
"""

from .figures import FigureSpec, load_figure_spec, render
from .records import Record, SchemaError, read_records

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "Record",
    "SchemaError",
    "load_figure_spec",
    "read_records",
    "render",
    "__version__",
]
