"""Shared test utilities: random generators and independent brute-force oracles.

The oracles deliberately reimplement the math from the definitions (plain
loops, recursion, no shared code with the package) so the package paths are
checked against something independent.
"""

from __future__ import annotations

import math
import random

from eve import LabeledVector, WikiGraph, article_label, build_graph, category_label

# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------


def random_labeled_vector(
    rng: random.Random, pool: int = 12, max_dims: int = 6, nonnegative: bool = True
) -> LabeledVector:
    n = rng.randint(1, max_dims)
    labels = rng.sample(range(pool), min(n, pool))
    scores = {}
    for i in labels:
        value = rng.uniform(0.05, 1.0)
        if not nonnegative and rng.random() < 0.5:
            value = -value
        label = category_label(f"c{i}") if i % 2 == 0 else article_label(f"a{i}")
        scores[label] = value
    return LabeledVector(scores)


def random_graph(
    rng: random.Random,
    max_articles: int = 10,
    max_categories: int = 12,
    allow_self_loops: bool = False,
    stop_titles: frozenset[str] | None = frozenset(),
) -> WikiGraph:
    """A small random graph; the category hierarchy may contain cycles,
    mutual edges, and self-edges."""
    n_art = rng.randint(1, max_articles)
    n_cat = rng.randint(0, max_categories)
    articles = [f"Article {i}" for i in range(n_art)]
    categories = [f"Topic {i}" for i in range(n_cat)]

    links = []
    for _ in range(rng.randint(0, 3 * n_art)):
        src = rng.randrange(n_art)
        dst = rng.randrange(n_art)
        if src == dst and not allow_self_loops:
            continue
        links.append((src, dst, rng.randint(1, 5)))

    memberships = []
    for aid in range(n_art):
        for cid in rng.sample(range(n_cat), min(rng.randint(0, 4), n_cat)):
            memberships.append((aid, cid))

    edges = []
    if n_cat:
        for _ in range(rng.randint(0, 2 * n_cat)):
            edges.append((rng.randrange(n_cat), rng.randrange(n_cat)))

    return build_graph(
        articles=articles,
        links=links,
        categories=categories,
        memberships=memberships,
        category_edges=edges,
        stop_category_titles=stop_titles,
    )


# ---------------------------------------------------------------------------
# Category propagation oracle (recursive, independent of the package's stack)
# ---------------------------------------------------------------------------


def propagation_oracle(
    graph: WikiGraph, article_id: int, score: float, jump: float, depth_limit: int
) -> dict[str, float]:
    """Recursive reimplementation of the category mass propagation."""
    retained: dict[int, float] = {}

    def neighbors(cid: int, direction: str, path: frozenset[int]):
        out = []
        if direction in ("seed", "up"):
            out += [(n, "up") for n in graph.supers_of(cid)
                    if n not in path and not graph.is_stopped(n)]
        if direction in ("seed", "down"):
            out += [(n, "down") for n in graph.subs_of(cid)
                    if n not in path and not graph.is_stopped(n)]
        return out

    def walk(cid: int, mass: float, depth: int, direction: str, path: frozenset[int]):
        if depth >= depth_limit or mass < 1e-12:
            retained[cid] = retained.get(cid, 0.0) + mass
            return
        nbrs = neighbors(cid, direction, path)
        if not nbrs:
            retained[cid] = retained.get(cid, 0.0) + mass
            return
        retained[cid] = retained.get(cid, 0.0) + mass * (1.0 - jump)
        share = mass * jump / len(nbrs)
        for nbr, ndir in nbrs:
            walk(nbr, share, depth + 1, ndir, path | {nbr})

    seeds = graph.article_categories(article_id)
    for cid in seeds:
        walk(cid, score / len(seeds), 0, "seed", frozenset((cid,)))
    return {graph.category(cid).title: mass for cid, mass in retained.items() if mass > 0.0}


# ---------------------------------------------------------------------------
# BM25 reference (straight from the formula)
# ---------------------------------------------------------------------------


def bm25_reference(
    docs: dict[int, list[str]], query_tokens: list[str], k1: float = 1.2, b: float = 0.75
) -> dict[int, float]:
    n = len(docs)
    avgdl = sum(len(toks) for toks in docs.values()) / n if n else 0.0
    scores: dict[int, float] = {}
    for term in sorted(set(query_tokens)):
        df = sum(1 for toks in docs.values() if term in toks)
        if df == 0:
            continue
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        for doc_id, toks in docs.items():
            tf = toks.count(term)
            if tf == 0:
                continue
            denom = tf + k1 * (1 - b + b * len(toks) / avgdl)
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (k1 + 1) / denom
    return scores


# ---------------------------------------------------------------------------
# Cluster scatter / intruder / ranking oracles (naive loops, no numpy)
# ---------------------------------------------------------------------------


def brute_scatter(matrix: list[list[float]], labels: list[str]) -> tuple[float, float]:
    """(within_sum, between_sum) treating matrix rows as points."""
    n = len(matrix)
    dims = len(matrix[0])
    grand = [sum(matrix[i][d] for i in range(n)) / n for d in range(dims)]
    clusters: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        clusters.setdefault(lab, []).append(i)
    within = 0.0
    between = 0.0
    for members in clusters.values():
        centroid = [
            sum(matrix[i][d] for i in members) / len(members) for d in range(dims)
        ]
        for i in members:
            within += sum((matrix[i][d] - centroid[d]) ** 2 for d in range(dims))
        between += len(members) * sum((centroid[d] - grand[d]) ** 2 for d in range(dims))
    return within, between


def brute_ch(matrix: list[list[float]], labels: list[str]) -> float:
    within, between = brute_scatter(matrix, labels)
    k = len(set(labels))
    n = len(matrix)
    return (between / (k - 1)) / (within / (n - k))


def brute_cosine(u: dict, v: dict) -> float:
    dot = sum(u.get(key, 0.0) * v.get(key, 0.0) for key in set(u) | set(v))
    nu = math.sqrt(sum(x * x for x in u.values()))
    nv = math.sqrt(sum(x * x for x in v.values()))
    return dot / (nu * nv)


def brute_detect(items: list[tuple[str, dict]]) -> str:
    """Minimum summed pairwise cosine; ties to the smaller name."""
    scores = []
    for k, (name_k, vec_k) in enumerate(items):
        total = sum(
            brute_cosine(vec_k, vec_i)
            for i, (_, vec_i) in enumerate(items)
            if i != k
        )
        scores.append((total, name_k))
    return min(scores)[1]


def brute_p_at_k(flags: list[int], k: int) -> float:
    return sum(flags[:k]) / k


def brute_ap(flags: list[int]) -> float:
    total = 0.0
    hits = 0
    for rank, rel in enumerate(flags, start=1):
        if rel:
            hits += 1
            total += hits / rank
    return total / sum(flags)
