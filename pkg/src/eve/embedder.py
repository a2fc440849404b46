"""Builds the labeled embedding vector for a concept.

A concept resolves to one or more articles. Each article contributes two
blocks of dimensions:

* article dimensions from its in/out link counts, with a synthetic self
  dimension worth twice the strongest neighbor, everything divided by that
  self score (so the self dimension is exactly 1.0 and neighbors are <= 0.5);
* category dimensions from mass propagation over the category hierarchy:
  the match score spreads uniformly over the article's direct (non-stopped)
  categories, then each category forwards a jump_prob fraction of its
  incoming mass uniformly to eligible neighbors, retaining the rest. A path
  keeps climbing (or keeps descending) after its first jump, never revisits
  a category, and stops at category_depth hops, where the full incoming mass
  is retained. Total retained mass always equals the match score.

The two blocks are L1-normalized, weighted by their bias factors, and the
concatenation is L1-normalized again so the final vector sums to 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import ConceptNotFoundError
from .graph import WikiGraph
from .search import SearchIndex, resolve_concept
from .vectors import DimensionLabel, LabeledVector, article_label, category_label

logger = logging.getLogger(__name__)

# Frontier entries carrying less than this are retained where they are
# instead of being split further; bounds work on dense hierarchies while
# preserving mass conservation.
MASS_FLOOR = 1e-12


@dataclass(frozen=True)
class EveParams:
    """Model hyperparameters.

    bias_article / bias_category weight the two dimension blocks (each in
    [0, 1], not both zero). jump_prob in (0, 1] is the fraction of incoming
    category mass forwarded to neighbors; category_depth >= 0 caps the hop
    count; resolution_top_k >= 1 bounds best-match resolution.
    """

    bias_article: float = 0.5
    bias_category: float = 0.5
    jump_prob: float = 0.5
    category_depth: int = 2
    resolution_top_k: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.bias_article <= 1.0:
            raise ValueError(f"bias_article must be in [0, 1], got {self.bias_article}")
        if not 0.0 <= self.bias_category <= 1.0:
            raise ValueError(f"bias_category must be in [0, 1], got {self.bias_category}")
        if self.bias_article + self.bias_category <= 0.0:
            raise ValueError("bias_article and bias_category must not both be zero")
        if not 0.0 < self.jump_prob <= 1.0:
            raise ValueError(f"jump_prob must be in (0, 1], got {self.jump_prob}")
        if self.category_depth < 0:
            raise ValueError(f"category_depth must be >= 0, got {self.category_depth}")
        if self.resolution_top_k < 1:
            raise ValueError(f"resolution_top_k must be >= 1, got {self.resolution_top_k}")


class _Direction(Enum):
    SEED = 0  # at a direct category; may jump either way
    UP = 1    # committed to super-categories
    DOWN = 2  # committed to sub-categories


def article_scores(graph: WikiGraph, article_id: int) -> LabeledVector:
    """Article-block dimensions for one article (max-normalized, not L1).

    Every linked article L scores count(L->A) + count(A->L); the article's
    own (self) dimension scores twice the best neighbor; all scores are then
    divided by the self score. An article with no links at all gets just its
    self dimension at 1.0.
    """
    ref = graph.article(article_id)
    combined: dict[int, int] = {}
    for nbr, count in graph.out_links(article_id).items():
        combined[nbr] = combined.get(nbr, 0) + count
    for nbr, count in graph.in_links(article_id).items():
        combined[nbr] = combined.get(nbr, 0) + count
    combined.pop(article_id, None)  # self-loops never stored, but stay safe

    if not combined:
        return LabeledVector({article_label(ref.title): 1.0})

    self_score = 2 * max(combined.values())
    scores = {
        article_label(graph.article(nbr).title): count / self_score
        for nbr, count in combined.items()
    }
    scores[article_label(ref.title)] = 1.0
    return LabeledVector(scores)


def category_scores(
    graph: WikiGraph, article_id: int, match_score: float, params: EveParams
) -> LabeledVector:
    """Category-block dimensions for one article (unnormalized).

    Retained masses over all categories always sum to match_score; an article
    with no non-stopped categories yields an empty vector.
    """
    graph.article(article_id)
    if match_score <= 0.0:
        raise ValueError(f"match_score must be > 0, got {match_score}")
    seeds = graph.article_categories(article_id)
    if not seeds:
        return LabeledVector({})

    retained: dict[int, float] = {}
    share = match_score / len(seeds)
    # (category, incoming mass, depth, direction, categories on this path)
    frontier: list[tuple[int, float, int, _Direction, frozenset[int]]] = [
        (cid, share, 0, _Direction.SEED, frozenset((cid,))) for cid in seeds
    ]
    while frontier:
        cid, mass, depth, direction, path = frontier.pop()
        if depth >= params.category_depth or mass < MASS_FLOOR:
            retained[cid] = retained.get(cid, 0.0) + mass
            continue
        neighbors = _eligible_neighbors(graph, cid, direction, path)
        if not neighbors:
            retained[cid] = retained.get(cid, 0.0) + mass
            continue
        retained[cid] = retained.get(cid, 0.0) + mass * (1.0 - params.jump_prob)
        forwarded = mass * params.jump_prob / len(neighbors)
        for nbr, nbr_direction in neighbors:
            frontier.append((nbr, forwarded, depth + 1, nbr_direction, path | {nbr}))

    return LabeledVector(
        {
            category_label(graph.category(cid).title): mass
            for cid, mass in retained.items()
            if mass > 0.0
        }
    )


def _eligible_neighbors(
    graph: WikiGraph, cid: int, direction: _Direction, path: frozenset[int]
) -> list[tuple[int, _Direction]]:
    """Neighbors a jump may reach: not stopped, not already on the path, and
    only continuing the committed vertical direction after the first jump."""
    out: list[tuple[int, _Direction]] = []
    if direction in (_Direction.SEED, _Direction.UP):
        for nbr in graph.supers_of(cid):
            if nbr not in path and not graph.is_stopped(nbr):
                out.append((nbr, _Direction.UP))
    if direction in (_Direction.SEED, _Direction.DOWN):
        for nbr in graph.subs_of(cid):
            if nbr not in path and not graph.is_stopped(nbr):
                out.append((nbr, _Direction.DOWN))
    return out


def _l1_normalized(acc: Mapping[DimensionLabel, float]) -> dict[DimensionLabel, float]:
    total = sum(acc.values())
    return {lab: v / total for lab, v in acc.items() if v != 0.0}


def embed_concept(
    graph: WikiGraph, index: SearchIndex, params: EveParams, concept: str
) -> LabeledVector:
    """The full labeled embedding of one concept.

    Resolution may map the concept to several articles; each contributes its
    article block scaled by its relevance and its category block seeded with
    that relevance. Blocks are summed across articles, L1-normalized, bias
    weighted, and the concatenation is L1-normalized to sum exactly 1. When
    one block is empty the other is returned normalized on its own (the final
    normalization absorbs its bias weight).
    """
    match = resolve_concept(index, graph, concept, params.resolution_top_k)
    if match.empty:
        raise ConceptNotFoundError(f"concept {concept!r} does not resolve to any article")

    art_acc: dict[DimensionLabel, float] = {}
    cat_acc: dict[DimensionLabel, float] = {}
    for article_id, relevance in match:
        for lab, score in article_scores(graph, article_id).items():
            art_acc[lab] = art_acc.get(lab, 0.0) + relevance * score
        for lab, score in category_scores(graph, article_id, relevance, params).items():
            cat_acc[lab] = cat_acc.get(lab, 0.0) + score

    if not cat_acc:
        return LabeledVector(_l1_normalized(art_acc))
    if not art_acc:  # unreachable: the article block always holds the self dim
        return LabeledVector(_l1_normalized(cat_acc))

    combined: dict[DimensionLabel, float] = {}
    for lab, v in _l1_normalized(art_acc).items():
        combined[lab] = v * params.bias_article
    for lab, v in _l1_normalized(cat_acc).items():
        combined[lab] = v * params.bias_category
    return LabeledVector(_l1_normalized(combined))


@dataclass(frozen=True)
class EmbedBatch:
    """Result of embedding many concepts: vectors keyed by concept, plus the
    concepts that failed to resolve."""

    vectors: dict[str, LabeledVector]
    skipped: tuple[str, ...]


def embed_batch(
    graph: WikiGraph, index: SearchIndex, params: EveParams, concepts: Iterable[str]
) -> EmbedBatch:
    """Embed each distinct concept; unresolvable ones are collected, not fatal."""
    vectors: dict[str, LabeledVector] = {}
    skipped: list[str] = []
    for concept in concepts:
        if concept in vectors:
            continue
        try:
            vectors[concept] = embed_concept(graph, index, params, concept)
        except ConceptNotFoundError:
            skipped.append(concept)
            logger.warning("concept %r did not resolve; skipped", concept)
    return EmbedBatch(vectors=vectors, skipped=tuple(skipped))
