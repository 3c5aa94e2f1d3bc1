"""tweetsift: keyword-filtered posting corpora, word-frequency classifiers,
reliability statistics, and category volume monitoring.
"""

from . import annotate, corpus, eval, features, models, preprocess, solver, taxonomy, timeseries

__version__ = "0.1.0"

__all__ = [
    "annotate",
    "corpus",
    "eval",
    "features",
    "models",
    "preprocess",
    "solver",
    "taxonomy",
    "timeseries",
    "__version__",
]
