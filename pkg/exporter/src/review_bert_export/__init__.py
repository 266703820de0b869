"""Batch exporter of review sentiment stars for the rating workbench."""

from .scoring import DEFAULT_MODEL, ExporterError, ExportJob, export_scores

__version__ = "0.1.0"
__all__ = ["DEFAULT_MODEL", "ExporterError", "ExportJob", "export_scores", "__version__"]
