from .data import Dataset, evaluate_fit, read_dataset, read_fit_report
from .render import FigureSpec, render

__all__ = [
    "Dataset",
    "FigureSpec",
    "evaluate_fit",
    "read_dataset",
    "read_fit_report",
    "render",
]

__version__ = "0.1.0"
