"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`EveError` so the CLI can map
domain failures to exit code 1 while letting genuine bugs surface as
tracebacks.
"""

from __future__ import annotations


class EveError(Exception):
    """Base class for all errors raised by this package."""


class LocatedError(EveError):
    """Error tied to a position in an input file."""

    def __init__(self, message: str, file: str | None = None, line: int | None = None):
        self.file = file
        self.line = line
        if file is not None and line is not None:
            message = f"{file}:{line}: {message}"
        elif file is not None:
            message = f"{file}: {message}"
        super().__init__(message)


class GraphLoadError(LocatedError):
    """Malformed row, dangling reference, or duplicate in graph input files."""


class VectorFormatError(LocatedError):
    """Malformed external vector file (word2vec text or labeled JSONL)."""


class DatasetError(EveError):
    """Ground-truth dataset file violates its schema."""


class InvalidQueryError(EveError):
    """Empty or whitespace-only concept resolution query."""


class ConceptNotFoundError(EveError):
    """A concept could not be resolved to any article."""


class ZeroVectorError(EveError):
    """Similarity requested against an all-zero vector."""


class MixedSpaceError(EveError):
    """Labeled and dense vectors (or dense vectors of unequal length) mixed in one computation."""


class DegenerateClusteringError(EveError):
    """Cluster validity index undefined (k <= 1, k >= n, or zero within-cluster scatter)."""


class UndefinedMetricError(EveError):
    """Metric undefined for the given input (e.g. average precision with no relevant items)."""
