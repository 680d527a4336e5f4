"""Repository trend mining: stream clustering, Pareto selection, topics, reports."""

__version__ = "0.1.0"

from .schema import RepoRecord, lifespan, read_corpus, timeliness, write_corpus
from .selection import IndicatorVector, dominates, indicator_vector, non_dominated_filter
from .textclust import ClustererConfig, run_stream
from .textprep import TokenDoc, build_idf, cosine, preprocess

__all__ = [
    "ClustererConfig",
    "IndicatorVector",
    "RepoRecord",
    "TokenDoc",
    "__version__",
    "build_idf",
    "cosine",
    "dominates",
    "indicator_vector",
    "lifespan",
    "non_dominated_filter",
    "preprocess",
    "read_corpus",
    "run_stream",
    "timeliness",
    "write_corpus",
]
