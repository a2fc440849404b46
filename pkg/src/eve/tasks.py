"""The three evaluation tasks and their metrics.

* Intruder detection: exhaustive query generation (4 coherent items from one
  category plus 1 intruder from another category of the same type), detection
  by minimum summed pairwise cosine, accuracy as the correct ratio.
* Ability to cluster: cosine similarity matrix turned into a distance matrix
  (1 - similarity normalized by the global off-diagonal maximum), then
  within / between scatter and the Calinski-Harabasz index over the matrix
  rows as points.
* Sorting relevant items first: items ranked by cosine against a category
  query vector, scored with precision-at-k and average precision.

Vectors may be labeled (sparse) or dense numpy arrays, never mixed.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

import numpy as np

from .dataset import TaskDataset, TopicalType
from .errors import (
    DegenerateClusteringError,
    MixedSpaceError,
    UndefinedMetricError,
)
from .vectors import LabeledVector, cosine, dense_cosine

logger = logging.getLogger(__name__)

Vector = Union[LabeledVector, np.ndarray]


def similarity(u: Vector, v: Vector) -> float:
    """Cosine over either vector representation; mixing them is an error."""
    if isinstance(u, LabeledVector) and isinstance(v, LabeledVector):
        return cosine(u, v)
    if isinstance(u, np.ndarray) and isinstance(v, np.ndarray):
        return dense_cosine(u, v)
    raise MixedSpaceError("cannot mix labeled and dense vectors in one computation")


# ---------------------------------------------------------------------------
# Experiment 1: intruder detection
# ---------------------------------------------------------------------------


class IntruderQuery(NamedTuple):
    type_name: str
    category: str
    items: tuple[str, str, str, str]
    intruder_category: str
    intruder: str


def count_intruder_queries(dataset: TaskDataset, type_name: str) -> int:
    """Closed-form size of the exhaustive query stream for one topical type."""
    tt = dataset.type(type_name)
    total_items = sum(len(c.items) for c in tt.categories)
    return sum(
        math.comb(len(c.items), 4) * (total_items - len(c.items)) for c in tt.categories
    )


def gen_intruder_queries(dataset: TaskDataset, type_name: str) -> Iterator[IntruderQuery]:
    """Exhaustive, streamed query generation for one topical type.

    For every category, every 4-combination of its items is paired with every
    item of every other category of the type. Deterministic order; never
    materialized.
    """
    tt = dataset.type(type_name)
    for cat in tt.categories:
        others = [c for c in tt.categories if c.name != cat.name]
        for combo in itertools.combinations(cat.items, 4):
            for other in others:
                for intruder in other.items:
                    yield IntruderQuery(tt.name, cat.name, combo, other.name, intruder)


def sample_stream(
    stream: Iterable[IntruderQuery], total: int, n: int, seed: int
) -> Iterator[IntruderQuery]:
    """Uniform without-replacement subsample of a stream of known length,
    deterministic for a given seed; stream order is preserved."""
    if n >= total:
        yield from stream
        return
    picks = iter(sorted(random.Random(seed).sample(range(total), n)))
    target = next(picks, None)
    for i, query in enumerate(stream):
        if target is None:
            break
        if i == target:
            yield query
            target = next(picks, None)


def detect_intruder(items: Sequence[tuple[str, Vector]]) -> tuple[int, list[float]]:
    """Find the least coherent item: argmin over summed pairwise cosines.

    Ties break toward the lexicographically smallest item name, which makes
    the detected *concept* independent of input order. Returns the detected
    index and the per-item scores.
    """
    if len(items) < 3:
        raise ValueError(f"intruder detection needs >= 3 items, got {len(items)}")
    n = len(items)
    sims = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            s = similarity(items[i][1], items[j][1])
            sims[i][j] = sims[j][i] = s
    scores = [sum(sims[k][i] for i in range(n) if i != k) for k in range(n)]
    detected = min(range(n), key=lambda k: (scores[k], items[k][0]))
    return detected, scores


def accuracy(results: Sequence[tuple[str, str]]) -> float:
    """Ratio of correct (detected, truth) pairs."""
    if not results:
        raise ValueError("accuracy of an empty result list is undefined")
    correct = sum(1 for detected, truth in results if detected == truth)
    return correct / len(results)


# ---------------------------------------------------------------------------
# Experiment 2: ability to cluster
# ---------------------------------------------------------------------------


def distance_matrix(vectors: Sequence[Vector]) -> np.ndarray:
    """Pairwise cosine matrix mapped to distances.

    Similarities are normalized by the global off-diagonal maximum before the
    1 - s transform, keeping the matrix symmetric with a zero diagonal. When
    every off-diagonal similarity is 0 all distances are 1.
    """
    n = len(vectors)
    if n < 2:
        raise ValueError(f"distance matrix needs >= 2 vectors, got {n}")
    sims = np.zeros((n, n))
    for i in range(n):
        sims[i, i] = 1.0
        for j in range(i + 1, n):
            sims[i, j] = sims[j, i] = similarity(vectors[i], vectors[j])
    off_max = float(np.max(sims[~np.eye(n, dtype=bool)]))
    dist = np.ones((n, n)) if off_max == 0.0 else 1.0 - sims / off_max
    np.fill_diagonal(dist, 0.0)
    return dist


@dataclass(frozen=True)
class ClusterAssignment:
    """Items with their ground-truth categories and the derived distance matrix."""

    items: tuple[str, ...]
    labels: tuple[str, ...]
    matrix: np.ndarray

    @classmethod
    def build(
        cls, items: Sequence[tuple[str, Vector]], labels: Sequence[str]
    ) -> "ClusterAssignment":
        if len(items) != len(labels):
            raise ValueError("items and labels must align")
        return cls(
            items=tuple(name for name, _ in items),
            labels=tuple(labels),
            matrix=distance_matrix([vec for _, vec in items]),
        )


def _cluster_scatter(
    matrix: np.ndarray, labels: Sequence[str]
) -> tuple[float, float, int, int]:
    """(within_sum, between_sum, k, n) with matrix rows as item coordinates."""
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError("distance matrix must be square")
    if len(labels) != n:
        raise ValueError(f"{n} items but {len(labels)} labels; every item needs a cluster")
    clusters: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        clusters.setdefault(lab, []).append(i)
    grand = matrix.mean(axis=0)
    within = 0.0
    between = 0.0
    for idxs in clusters.values():
        rows = matrix[idxs]
        centroid = rows.mean(axis=0)
        within += float(((rows - centroid) ** 2).sum())
        between += len(idxs) * float(((centroid - grand) ** 2).sum())
    return within, between, len(clusters), n


def _check_k(k: int, found: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k != found:
        raise ValueError(
            f"assignment has {found} nonempty clusters but k={k} was given "
            "(implies an empty cluster)"
        )


def within_cluster(matrix: np.ndarray, labels: Sequence[str], k: int) -> float:
    """Mean within-cluster scatter: total squared distance of each row to its
    cluster centroid, divided by the number of clusters."""
    within, _, found, _ = _cluster_scatter(matrix, labels)
    _check_k(k, found)
    return within / k


def between_cluster(matrix: np.ndarray, labels: Sequence[str], k: int) -> float:
    """Mean between-cluster scatter: size-weighted squared distance of each
    cluster centroid to the grand centroid, divided by the number of clusters."""
    _, between, found, _ = _cluster_scatter(matrix, labels)
    _check_k(k, found)
    return between / k


def ch_index(matrix: np.ndarray, labels: Sequence[str], k: int, n: int) -> float:
    """Calinski-Harabasz index (between/(k-1)) / (within/(n-k)) on the raw sums."""
    within, between, found, n_found = _cluster_scatter(matrix, labels)
    _check_k(k, found)
    if n != n_found:
        raise ValueError(f"matrix holds {n_found} items but n={n} was given")
    if k <= 1 or k >= n:
        raise DegenerateClusteringError(f"CH-Index needs 1 < k < n, got k={k}, n={n}")
    if within == 0.0:
        raise DegenerateClusteringError("CH-Index undefined: zero within-cluster scatter")
    return (between / (k - 1)) / (within / (n - k))


# ---------------------------------------------------------------------------
# Experiment 3: sorting relevant items first
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankingResult:
    """Items ordered by similarity to a category query, with relevance flags."""

    query: str
    ranked_items: tuple[str, ...]
    scores: tuple[float, ...]
    relevance: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.ranked_items)

    @property
    def n_relevant(self) -> int:
        return sum(self.relevance)


def rank_items(
    query: str,
    category_vector: Vector,
    items: Sequence[tuple[str, Vector]],
    relevant: Iterable[str],
) -> RankingResult:
    """Sort items by cosine to the category vector, descending; ties break
    lexicographically by item name."""
    relevant_set = set(relevant)
    scored = [(name, similarity(category_vector, vec)) for name, vec in items]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return RankingResult(
        query=query,
        ranked_items=tuple(name for name, _ in scored),
        scores=tuple(score for _, score in scored),
        relevance=tuple(int(name in relevant_set) for name, _ in scored),
    )


def precision_at_k(result: RankingResult, k: int) -> float:
    """Share of relevant items among the top k."""
    if not 1 <= k <= len(result):
        raise ValueError(f"k must be in [1, {len(result)}], got {k}")
    return sum(result.relevance[:k]) / k


def average_precision(result: RankingResult) -> float:
    """Mean of P@k taken at each relevant rank."""
    n_rel = result.n_relevant
    if n_rel == 0:
        raise UndefinedMetricError(
            f"average precision undefined for {result.query!r}: no relevant items"
        )
    hits = 0
    total = 0.0
    for rank, rel in enumerate(result.relevance, start=1):
        if rel:
            hits += 1
            total += hits / rank
    return total / n_rel


# ---------------------------------------------------------------------------
# Per-type evaluators used by the CLI
# ---------------------------------------------------------------------------


@dataclass
class IntruderTypeResult:
    type_name: str
    total_queries: int
    evaluated: int
    skipped: int
    correct: int

    @property
    def accuracy_value(self) -> float | None:
        return self.correct / self.evaluated if self.evaluated else None


def evaluate_intruder_type(
    tt: TopicalType,
    dataset: TaskDataset,
    vectors: Mapping[str, Vector],
    sample: int | None = None,
    seed: int | None = None,
    progress_every: int = 0,
) -> IntruderTypeResult:
    """Run the intruder task over one topical type.

    Pairwise similarities are precomputed once; queries touching an item with
    no vector are skipped and counted. Sampling (when given) draws uniformly
    from the exhaustive stream with a deterministic seed.
    """
    names = [name for name in tt.items() if name in vectors]
    idx = {name: i for i, name in enumerate(names)}
    n = len(names)
    sims = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sims[i, j] = sims[j, i] = similarity(vectors[names[i]], vectors[names[j]])

    total = count_intruder_queries(dataset, tt.name)
    stream: Iterable[IntruderQuery] = gen_intruder_queries(dataset, tt.name)
    if sample is not None:
        stream = sample_stream(stream, total, sample, seed if seed is not None else 0)

    evaluated = skipped = correct = 0
    sims_list = sims.tolist()  # plain floats are faster for 5x5 gathers
    for query in stream:
        members = (*query.items, query.intruder)
        rows = [idx.get(name) for name in members]
        if any(r is None for r in rows):
            skipped += 1
            continue
        scores = [
            sum(sims_list[rk][ri] for ri in rows if ri != rk) for rk in rows
        ]
        detected = min(range(5), key=lambda k: (scores[k], members[k]))
        evaluated += 1
        if members[detected] == query.intruder:
            correct += 1
        if progress_every and (evaluated % progress_every) == 0:
            logger.info("%s: %d queries evaluated", tt.name, evaluated)
    return IntruderTypeResult(
        type_name=tt.name,
        total_queries=total,
        evaluated=evaluated,
        skipped=skipped,
        correct=correct,
    )


@dataclass
class ClusterTypeResult:
    type_name: str
    n_items: int
    k: int
    within: float | None
    between: float | None
    ch: float | None
    skipped_items: tuple[str, ...] = ()
    note: str = ""


def evaluate_cluster_type(
    tt: TopicalType, vectors: Mapping[str, Vector]
) -> ClusterTypeResult:
    """Cluster-validity metrics for one topical type's ground-truth grouping."""
    pairs: list[tuple[str, Vector]] = []
    labels: list[str] = []
    skipped: list[str] = []
    for cat in tt.categories:
        for item in cat.items:
            if item in vectors:
                pairs.append((item, vectors[item]))
                labels.append(cat.name)
            else:
                skipped.append(item)
    k = len(set(labels))
    n = len(pairs)
    if n < 2 or k < 1:
        return ClusterTypeResult(tt.name, n, k, None, None, None, tuple(skipped),
                                 note="too few items with vectors")
    assignment = ClusterAssignment.build(pairs, labels)
    within = within_cluster(assignment.matrix, assignment.labels, k)
    between = between_cluster(assignment.matrix, assignment.labels, k)
    try:
        ch = ch_index(assignment.matrix, assignment.labels, k, n)
        note = ""
    except DegenerateClusteringError as exc:
        ch = None
        note = str(exc)
    return ClusterTypeResult(tt.name, n, k, within, between, ch, tuple(skipped), note)


@dataclass
class RankQueryRow:
    category: str
    k_used: int
    p_at_k: float
    ap: float


@dataclass
class RankTypeResult:
    type_name: str
    rows: list[RankQueryRow] = field(default_factory=list)
    skipped_categories: tuple[str, ...] = ()
    skipped_items: tuple[str, ...] = ()

    @property
    def mean_p_at_k(self) -> float | None:
        return sum(r.p_at_k for r in self.rows) / len(self.rows) if self.rows else None

    @property
    def mean_ap(self) -> float | None:
        return sum(r.ap for r in self.rows) / len(self.rows) if self.rows else None


def evaluate_rank_type(
    tt: TopicalType,
    item_vectors: Mapping[str, Vector],
    category_vectors: Mapping[str, Vector],
    k: int | None = None,
) -> RankTypeResult:
    """Run the ranking task: one query per category of the type.

    k=None scores precision at each category's own relevant count; a fixed k
    is clamped to the number of ranked items.
    """
    items = [(name, item_vectors[name]) for name in tt.items() if name in item_vectors]
    skipped_items = tuple(name for name in tt.items() if name not in item_vectors)
    result = RankTypeResult(type_name=tt.name, skipped_items=skipped_items)
    skipped_cats: list[str] = []
    for cat in tt.categories:
        query_vec = category_vectors.get(cat.name)
        relevant = [name for name in cat.items if name in item_vectors]
        if query_vec is None or not items or not relevant:
            skipped_cats.append(cat.name)
            continue
        ranking = rank_items(cat.name, query_vec, items, relevant)
        k_used = min(k, len(ranking)) if k else len(relevant)
        result.rows.append(
            RankQueryRow(
                category=cat.name,
                k_used=k_used,
                p_at_k=precision_at_k(ranking, k_used),
                ap=average_precision(ranking),
            )
        )
    result.skipped_categories = tuple(skipped_cats)
    return result
