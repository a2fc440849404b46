"""Concept resolution: exact title/redirect matching with a BM25 fallback.

Each article contributes one bag-of-tokens document built from its title and
all redirect aliases pointing at it. Queries that match a canonical title or
alias (case-insensitive) resolve exactly with relevance 1.0; anything else
falls back to BM25 over the token documents.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidQueryError
from .graph import WikiGraph

# Conventional BM25 defaults; the scoring uses the positive (Lucene-style)
# idf variant log(1 + (N - df + 0.5)/(df + 0.5)) so every match scores > 0.
BM25_K1 = 1.2
BM25_B = 0.75

_TOKEN_SPLIT = re.compile(r"[\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric characters."""
    return [t for t in _TOKEN_SPLIT.split(text.lower()) if t]


@dataclass(frozen=True)
class ConceptMatch:
    """Resolved articles for a query, best first: (article_id, relevance > 0)."""

    entries: tuple[tuple[int, float], ...]

    @property
    def empty(self) -> bool:
        return not self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, float]]:
        return iter(self.entries)

    def best(self) -> tuple[int, float]:
        if not self.entries:
            raise ValueError("empty match has no best entry")
        return self.entries[0]


class SearchIndex:
    """BM25 index over per-article token documents (title + redirect aliases)."""

    def __init__(self, documents: dict[int, Sequence[str]], k1: float = BM25_K1, b: float = BM25_B):
        self.k1 = k1
        self.b = b
        self._tf: dict[int, Counter[str]] = {aid: Counter(toks) for aid, toks in documents.items()}
        self._doc_len = {aid: len(toks) for aid, toks in documents.items()}
        self._n_docs = len(documents)
        total = sum(self._doc_len.values())
        self._avgdl = total / self._n_docs if self._n_docs else 0.0
        self._postings: dict[str, tuple[int, ...]] = {}
        postings_acc: dict[str, list[int]] = {}
        for aid in sorted(self._tf):
            for token in self._tf[aid]:
                postings_acc.setdefault(token, []).append(aid)
        self._postings = {t: tuple(aids) for t, aids in postings_acc.items()}

    def __len__(self) -> int:
        return self._n_docs

    def document_frequency(self, token: str) -> int:
        return len(self._postings.get(token, ()))

    def document_tokens(self, article_id: int) -> frozenset[str]:
        return frozenset(self._tf.get(article_id, ()))

    def bm25_scores(self, query_tokens: Sequence[str]) -> dict[int, float]:
        """BM25 score per article for the unique query tokens; only articles
        sharing at least one token appear, and all scores are > 0."""
        scores: dict[int, float] = {}
        if not self._n_docs:
            return scores
        for token in sorted(set(query_tokens)):
            aids = self._postings.get(token)
            if not aids:
                continue
            df = len(aids)
            idf = math.log(1.0 + (self._n_docs - df + 0.5) / (df + 0.5))
            for aid in aids:
                tf = self._tf[aid][token]
                norm = self.k1 * (1.0 - self.b + self.b * self._doc_len[aid] / self._avgdl)
                gain = idf * tf * (self.k1 + 1.0) / (tf + norm)
                scores[aid] = scores.get(aid, 0.0) + gain
        return scores


def build_search_index(graph: WikiGraph, k1: float = BM25_K1, b: float = BM25_B) -> SearchIndex:
    """Index every article of the graph under its title plus redirect aliases."""
    documents: dict[int, list[str]] = {a.id: tokenize(a.title) for a in graph.articles}
    for alias in sorted(graph.redirects):
        target = graph.article_by_title(graph.redirects[alias])
        documents[target.id].extend(tokenize(alias))
    return SearchIndex(documents, k1=k1, b=b)


def resolve_concept(
    index: SearchIndex, graph: WikiGraph, query: str, top_k: int
) -> ConceptMatch:
    """Map a query string to articles.

    An exact (case-insensitive) title or redirect match returns that single
    article with relevance 1.0 regardless of top_k; otherwise the top_k
    BM25-scored articles are returned, and the match is empty when the query
    shares no token with any document.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    query = query.strip()
    if not query:
        raise InvalidQueryError("concept query is empty or whitespace-only")
    exact = graph.resolve_title(query)
    if exact is not None:
        return ConceptMatch(((exact.id, 1.0),))
    scores = index.bm25_scores(tokenize(query))
    ranked = sorted(
        scores.items(), key=lambda kv: (-kv[1], graph.article(kv[0]).title)
    )
    return ConceptMatch(tuple((aid, score) for aid, score in ranked[:top_k]))
