"""Task-specific explanations built from labeled vector dimensions.

Three strategies, one per task:

* intruder: the mean of all vectors (intruder included) minus the intruder
  vector explains the coherent group, and the reverse difference explains
  the intruder;
* clustering: the mean of the whole space explains the space, each
  category's mean explains that category;
* ranking: every vector is weighted by its similarity to the category query,
  the weighted mean is taken, and each item is explained by its per-dimension
  product with that mean.

Explanations list only strictly positive dimensions, ordered by the shared
top-N tie rule, and render articles with an "α:" marker.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .vectors import DimensionLabel, LabeledVector, hadamard, mean, scale, subtract, top_n

SIM_HEAD_TOLERANCE = 1e-9  # the query's self-similarity must be 1.0 within this


class ExplanationContext(str, Enum):
    INTRUDER_COHERENT = "intruder-coherent"
    INTRUDER_OUTLIER = "intruder-outlier"
    SPACE_OVERALL = "space-overall"
    CATEGORY_PROFILE = "category-profile"
    ITEM_PROJECTION = "item-projection"


@dataclass(frozen=True)
class Explanation:
    """Ranked list of (dimension label, score) entries for one context."""

    context: ExplanationContext
    entries: tuple[tuple[DimensionLabel, float], ...]
    subject: str | None = None

    def labels(self) -> tuple[str, ...]:
        return tuple(lab.render() for lab, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _positive_top(v: LabeledVector, n: int) -> tuple[tuple[DimensionLabel, float], ...]:
    positive = LabeledVector({lab: s for lab, s in v.scores.items() if s > 0.0})
    return tuple(top_n(positive, n)) if positive else ()


def explain_intruder(
    space: Sequence[LabeledVector], intruder: LabeledVector, top: int = 10
) -> tuple[Explanation, Explanation]:
    """Explanations for a detected intruder: (coherent group, intruder)."""
    if len(space) < 2:
        raise ValueError("intruder explanation needs a space of >= 2 vectors")
    if not any(v == intruder for v in space):
        raise ValueError("the intruder vector must be one of the space vectors")
    space_mean = mean(space)
    coherent_leftover = subtract(space_mean, intruder)
    intruder_leftover = subtract(intruder, space_mean)
    return (
        Explanation(ExplanationContext.INTRUDER_COHERENT, _positive_top(coherent_leftover, top)),
        Explanation(ExplanationContext.INTRUDER_OUTLIER, _positive_top(intruder_leftover, top)),
    )


def explain_clusters(
    space: Sequence[LabeledVector],
    categories: Sequence[str],
    category_spaces: Mapping[str, Sequence[LabeledVector]],
    top: int = 10,
) -> tuple[Explanation, dict[str, Explanation]]:
    """Explanations for the whole space and for each category's sub-space."""
    if not space:
        raise ValueError("cluster explanation needs a nonempty space")
    for name in categories:
        if not category_spaces.get(name):
            raise ValueError(f"category {name!r} has an empty vector list")
    overall = Explanation(
        ExplanationContext.SPACE_OVERALL, _positive_top(mean(space), top)
    )
    per_category = {
        name: Explanation(
            ExplanationContext.CATEGORY_PROFILE,
            _positive_top(mean(category_spaces[name]), top),
            subject=name,
        )
        for name in categories
    }
    return overall, per_category


def ranking_projections(
    space: Sequence[LabeledVector], sims: Sequence[float], items: Sequence[str]
) -> dict[str, LabeledVector]:
    """Core of the ranking explanation: similarity-weighted mean of the space,
    then each item's per-dimension product with it. space[0] is the query
    vector; items name space[1:]."""
    if len(sims) != len(space):
        raise ValueError(f"{len(space)} vectors but {len(sims)} similarity entries")
    if len(items) != len(space) - 1:
        raise ValueError(f"{len(space) - 1} item vectors but {len(items)} item names")
    biased_mean = mean([scale(v, s) for v, s in zip(space, sims)])
    return {
        name: hadamard(biased_mean, vec) for name, vec in zip(items, space[1:])
    }


def explain_ranking(
    space: Sequence[LabeledVector],
    sims: Sequence[float],
    items: Sequence[str],
    top: int = 10,
) -> dict[str, Explanation]:
    """Per-item explanations for the ranking task.

    sims[0] is the query's similarity with itself and must be 1.0 (within
    1e-9); the rest are the item similarities used as weights.
    """
    if not space:
        raise ValueError("ranking explanation needs a nonempty space")
    if not sims or abs(sims[0] - 1.0) > SIM_HEAD_TOLERANCE:
        head = sims[0] if sims else None
        raise ValueError(f"first similarity entry must be 1.0 (query vs itself), got {head}")
    projections = ranking_projections(space, sims, items)
    return {
        name: Explanation(
            ExplanationContext.ITEM_PROJECTION, _positive_top(proj, top), subject=name
        )
        for name, proj in projections.items()
    }
