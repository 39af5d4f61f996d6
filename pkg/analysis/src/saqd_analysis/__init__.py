"""Offline analysis of saqd results CSVs: scaling fits and figures."""

from .io import ResultPoint, read_results
from .fss import FssFit, crossing_estimate, fss_fit
from .figures import render_figures

__all__ = [
    "ResultPoint",
    "read_results",
    "FssFit",
    "crossing_estimate",
    "fss_fit",
    "render_figures",
]
__version__ = "0.1.0"
