"""Sparse labeled vectors and the algebra used by the embedder, tasks, and explanations.

A labeled vector maps human-readable dimension labels to real scores. Labels
carry a kind (article vs category) so an article and a category sharing a name
occupy distinct dimensions. Embedding vectors are nonnegative with L1 sum 1;
explanation intermediates (differences) may carry negative scores and are
never reused as embeddings.

Also hosts the two on-disk vector formats: word2vec text for dense external
spaces, and JSON Lines for labeled vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import MixedSpaceError, VectorFormatError, ZeroVectorError
from .ioutil import write_text_atomic


class DimensionKind(str, Enum):
    ARTICLE = "article"
    CATEGORY = "category"


# Tie-break rank: categories sort ahead of articles at equal score.
_KIND_RANK = {DimensionKind.CATEGORY: 0, DimensionKind.ARTICLE: 1}


class DimensionLabel(NamedTuple):
    kind: DimensionKind
    name: str

    def render(self) -> str:
        """Human-readable form: articles get an "α:" marker, categories are bare."""
        if self.kind is DimensionKind.ARTICLE:
            return f"α:{self.name}"
        return self.name


def article_label(name: str) -> DimensionLabel:
    return DimensionLabel(DimensionKind.ARTICLE, name)


def category_label(name: str) -> DimensionLabel:
    return DimensionLabel(DimensionKind.CATEGORY, name)


@dataclass(frozen=True, repr=False)
class LabeledVector:
    """Sparse map from dimension labels to scores. Treat as immutable."""

    scores: dict[DimensionLabel, float] = field(default_factory=dict)

    def get(self, label: DimensionLabel, default: float = 0.0) -> float:
        return self.scores.get(label, default)

    def items(self) -> Iterator[tuple[DimensionLabel, float]]:
        return iter(self.scores.items())

    def labels(self) -> Iterator[DimensionLabel]:
        return iter(self.scores.keys())

    def __len__(self) -> int:
        return len(self.scores)

    def __bool__(self) -> bool:
        return bool(self.scores)

    def l1(self) -> float:
        return sum(abs(v) for v in self.scores.values())

    def l2(self) -> float:
        return math.sqrt(sum(v * v for v in self.scores.values()))

    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.scores.values())

    def __repr__(self) -> str:  # compact: show a few largest dims
        head = top_n(self, 3) if self.scores else []
        shown = ", ".join(f"{lab.render()}={score:.4g}" for lab, score in head)
        more = f", …({len(self.scores)} dims)" if len(self.scores) > 3 else ""
        return f"LabeledVector({shown}{more})"


def scale(v: LabeledVector, alpha: float) -> LabeledVector:
    """Return alpha * v."""
    return LabeledVector({lab: alpha * s for lab, s in v.scores.items()})


def add(u: LabeledVector, v: LabeledVector) -> LabeledVector:
    """Per-dimension sum over the union of supports."""
    out = dict(u.scores)
    for lab, s in v.scores.items():
        out[lab] = out.get(lab, 0.0) + s
    return LabeledVector(out)


def subtract(u: LabeledVector, v: LabeledVector) -> LabeledVector:
    """Per-dimension u - v over the union of supports; negative entries retained."""
    out = dict(u.scores)
    for lab, s in v.scores.items():
        out[lab] = out.get(lab, 0.0) - s
    return LabeledVector(out)


def hadamard(u: LabeledVector, v: LabeledVector) -> LabeledVector:
    """Per-dimension product; support is the intersection of supports."""
    if len(v.scores) < len(u.scores):
        u, v = v, u
    return LabeledVector(
        {lab: s * v.scores[lab] for lab, s in u.scores.items() if lab in v.scores}
    )


def mean(vectors: Sequence[LabeledVector]) -> LabeledVector:
    """Per-dimension arithmetic mean over the union of supports."""
    if not vectors:
        raise ValueError("mean of an empty vector list is undefined")
    acc: dict[DimensionLabel, float] = {}
    for v in vectors:
        for lab, s in v.scores.items():
            acc[lab] = acc.get(lab, 0.0) + s
    n = len(vectors)
    return LabeledVector({lab: s / n for lab, s in acc.items()})


def cosine(u: LabeledVector, v: LabeledVector) -> float:
    """Cosine similarity over the union of dimensions (missing entries count as 0).

    Raises ZeroVectorError when either vector has no nonzero entry.
    """
    nu, nv = u.l2(), v.l2()
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for an all-zero vector")
    if len(v.scores) < len(u.scores):
        u, v = v, u
    dot = sum(s * v.scores.get(lab, 0.0) for lab, s in u.scores.items())
    return dot / (nu * nv)


def top_n(v: LabeledVector, n: int) -> list[tuple[DimensionLabel, float]]:
    """The n highest-scoring dimensions, deterministically ordered.

    Sorted by score descending; ties broken by label kind (category before
    article) and then lexicographic name.
    """
    if n < 1:
        raise ValueError(f"top_n requires n >= 1, got {n}")
    ordered = sorted(
        v.scores.items(), key=lambda kv: (-kv[1], _KIND_RANK[kv[0].kind], kv[0].name)
    )
    return ordered[:n]


# ---------------------------------------------------------------------------
# Dense external spaces (word2vec text format)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExternalSpace:
    """Token -> dense vector map with uniform dimensionality."""

    dimension: int
    vectors: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)

    def lookup(self, name: str) -> np.ndarray | None:
        """Resolve a concept name to a token, tolerating the usual word2vec
        conventions (spaces stored as underscores, lowercased tokens)."""
        for candidate in (name, name.replace(" ", "_"), name.lower(),
                          name.lower().replace(" ", "_")):
            vec = self.vectors.get(candidate)
            if vec is not None:
                return vec
        return None


def dense_cosine(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise MixedSpaceError(
            f"dense vectors of unequal dimensionality: {u.shape[0]} vs {v.shape[0]}"
        )
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for an all-zero vector")
    return float(np.dot(u, v)) / (nu * nv)


def import_external(path: str) -> ExternalSpace:
    """Load a word2vec-text vector file: header "N D", then "token v1 … vD" rows."""
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise VectorFormatError("empty vector file", file=str(path), line=1)
        parts = header.split()
        if len(parts) != 2:
            raise VectorFormatError(
                f"header must be 'N D', got {header.strip()!r}", file=str(path), line=1
            )
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise VectorFormatError(
                f"non-integer header fields: {header.strip()!r}", file=str(path), line=1
            ) from None
        if count < 0 or dim < 1:
            raise VectorFormatError(
                f"header must declare N >= 0 and D >= 1, got N={count} D={dim}",
                file=str(path), line=1,
            )
        for lineno, raw in enumerate(fh, start=2):
            row = raw.rstrip("\n").split()
            if not row:
                raise VectorFormatError("blank row", file=str(path), line=lineno)
            token, values = row[0], row[1:]
            if len(values) != dim:
                raise VectorFormatError(
                    f"expected {dim} values for token {token!r}, got {len(values)}",
                    file=str(path), line=lineno,
                )
            if token in vectors:
                raise VectorFormatError(
                    f"duplicate token {token!r}", file=str(path), line=lineno
                )
            try:
                vec = np.array([float(x) for x in values], dtype=np.float64)
            except ValueError:
                raise VectorFormatError(
                    f"non-numeric value for token {token!r}", file=str(path), line=lineno
                ) from None
            vectors[token] = vec
    if len(vectors) != count:
        raise VectorFormatError(
            f"header declared {count} vectors but file holds {len(vectors)}",
            file=str(path),
        )
    return ExternalSpace(dimension=dim, vectors=vectors)


def export_external(space: ExternalSpace, path: str) -> None:
    """Write a word2vec-text file atomically (tokens sorted for determinism)."""
    lines = [f"{len(space.vectors)} {space.dimension}"]
    for token in sorted(space.vectors):
        values = " ".join(repr(float(x)) for x in space.vectors[token])
        lines.append(f"{token} {values}")
    write_text_atomic(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Labeled vector JSONL format
# ---------------------------------------------------------------------------


def export_labeled(vectors: Mapping[str, LabeledVector], path: str) -> None:
    """Write labeled vectors as JSON Lines atomically, one object per concept.

    Dimensions are emitted sorted by (kind, name); floats round-trip exactly.
    """
    lines = []
    for concept, vec in vectors.items():
        dims = [
            {"kind": lab.kind.value, "name": lab.name, "score": score}
            for lab, score in sorted(
                vec.scores.items(), key=lambda kv: (kv[0].kind.value, kv[0].name)
            )
        ]
        lines.append(json.dumps({"concept": concept, "dims": dims}, ensure_ascii=False))
    write_text_atomic(path, "\n".join(lines) + ("\n" if lines else ""))


def import_labeled(path: str) -> dict[str, LabeledVector]:
    """Read labeled vectors from JSON Lines written by :func:`export_labeled`."""
    out: dict[str, LabeledVector] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise VectorFormatError(
                    f"invalid JSON: {exc.msg}", file=str(path), line=lineno
                ) from None
            if not isinstance(obj, dict) or "concept" not in obj or "dims" not in obj:
                raise VectorFormatError(
                    "each line must be an object with 'concept' and 'dims'",
                    file=str(path), line=lineno,
                )
            concept = obj["concept"]
            if not isinstance(concept, str):
                raise VectorFormatError("'concept' must be a string", file=str(path), line=lineno)
            if concept in out:
                raise VectorFormatError(
                    f"duplicate concept {concept!r}", file=str(path), line=lineno
                )
            scores: dict[DimensionLabel, float] = {}
            for dim in obj["dims"]:
                try:
                    kind = DimensionKind(dim["kind"])
                    label = DimensionLabel(kind, dim["name"])
                    score = float(dim["score"])
                except (KeyError, TypeError, ValueError):
                    raise VectorFormatError(
                        f"malformed dimension entry {dim!r}", file=str(path), line=lineno
                    ) from None
                if label in scores:
                    raise VectorFormatError(
                        f"duplicate dimension {label.render()!r} for {concept!r}",
                        file=str(path), line=lineno,
                    )
                scores[label] = score
            out[concept] = LabeledVector(scores)
    return out
