"""Antimicrobial resistance prediction from tabular clinical cohorts.

The package covers the full pipeline: schema-driven cohort ingestion and
synthesis (:mod:`amr.data`), mixed-type association statistics
(:mod:`amr.correlation`), from-scratch random forest and neural network
classifiers (:mod:`amr.forest`, :mod:`amr.neuralnet`), a cross-validation
harness with minority-class oversampling (:mod:`amr.evaluation`), and a
JSON model bundle served over HTTP (:mod:`amr.bundle`, :mod:`amr.service`).
"""

from . import bundle, correlation, data, evaluation, forest, neuralnet, reports, service
from .errors import AmrError

__version__ = "0.1.0"

__all__ = [
    "AmrError",
    "bundle",
    "correlation",
    "data",
    "evaluation",
    "forest",
    "neuralnet",
    "reports",
    "service",
    "__version__",
]
