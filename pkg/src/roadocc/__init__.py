"""Online road detection by one-class color classification.

Pipeline: convert RGB pixels to a chosen color representation, train a
one-class classifier on a bottom-of-image ROI assumed to be road, score
every pixel into a road likelihood, and evaluate with ROC/AUC/EER against
polygon ground truth.
"""

from . import color, dataset, evaluation, occ, sampling
from .bench import BenchmarkConfig, ResultGrid, default_classifiers, run_benchmark
from .reports import emit_reports

__version__ = "0.1.0"

__all__ = [
    "color",
    "dataset",
    "evaluation",
    "occ",
    "sampling",
    "BenchmarkConfig",
    "ResultGrid",
    "default_classifiers",
    "run_benchmark",
    "emit_reports",
    "__version__",
]
