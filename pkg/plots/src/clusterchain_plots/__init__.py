"""Figure rendering for clusterchain CSV sweep outputs."""

from .figures import FIGURES, SchemaError, read_table, render

__version__ = "0.1.0"

__all__ = ["FIGURES", "SchemaError", "read_table", "render", "__version__"]
