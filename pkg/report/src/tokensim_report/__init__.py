"""Batch figure rendering for simulation output directories.

Consumes the flat files written by the ``tokensim`` CLI
(``trajectories.csv`` and ``summary.json``) and renders the standard set
of diagnostic figures: reward schedules, intrinsic-value and fiat-price
bands, token price sample paths, the joint distribution of log token
price against intrinsic value, growth histograms, and windowed-growth
pair plots.
"""

from .data import EmptyEnsemble, MissingColumn, load_trajectories
from .figures import FIGURE_IDS, FigureSpec, default_specs, render

__version__ = "0.1.0"

__all__ = [
    "EmptyEnsemble",
    "FIGURE_IDS",
    "FigureSpec",
    "MissingColumn",
    "default_specs",
    "load_trajectories",
    "render",
    "__version__",
]
