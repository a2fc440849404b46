"""Immutable article/category graph store with TSV ingestion and validation.

The store holds articles, weighted directed article links, category
memberships, the category hierarchy (which may be cyclic), and a redirect
map from alias titles to canonical titles. Categories whose full title
matches the stop list (case-insensitive) are marked stopped and are hidden
from everything the embedder sees.

File formats (UTF-8, tab-separated, no header):
    articles.tsv        id<TAB>title
    categories.tsv      id<TAB>title
    links.tsv           src_id<TAB>dst_id<TAB>count
    memberships.tsv     article_id<TAB>category_id
    category_edges.tsv  sub_id<TAB>super_id
    redirects.tsv       alias_title<TAB>canonical_title
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GraphLoadError

logger = logging.getLogger(__name__)

GRAPH_FILE_NAMES = (
    "articles.tsv",
    "links.tsv",
    "categories.tsv",
    "memberships.tsv",
    "category_edges.tsv",
    "redirects.tsv",
)


@dataclass(frozen=True)
class ArticleRef:
    id: int
    title: str


@dataclass(frozen=True)
class CategoryRef:
    id: int
    title: str
    stopped: bool = False


@dataclass
class LoadStats:
    """Bookkeeping from the last load; dropped_self_loops sums the dropped counts."""

    dropped_self_loops: int = 0
    stopped_categories: int = 0


def default_stop_categories() -> frozenset[str]:
    """The packaged default stop-category titles (lowercase)."""
    text = resources.files("eve").joinpath("data/stop_categories.txt").read_text("utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


def load_stop_categories(path: str) -> frozenset[str]:
    """Read a newline-delimited stop-category file (case-insensitive titles)."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().lower() for line in fh if line.strip())


class WikiGraph:
    """Validated graph snapshot. Immutable after construction; safe to share
    across threads. Build via :func:`load_graph`, :func:`load_graph_dir`, or
    :func:`build_graph` rather than calling the constructor directly."""

    def __init__(
        self,
        articles: tuple[ArticleRef, ...],
        categories: tuple[CategoryRef, ...],
        links: dict[int, dict[int, int]],
        memberships: dict[int, tuple[int, ...]],
        category_edges: frozenset[tuple[int, int]],
        redirects: dict[str, str],
        stats: LoadStats,
    ):
        self._articles = articles
        self._categories = categories
        self._out = links
        self._memberships = memberships
        self._category_edges = category_edges
        self._redirects = redirects
        self.stats = stats

        self._in: dict[int, dict[int, int]] = {}
        for src, dsts in links.items():
            for dst, count in dsts.items():
                self._in.setdefault(dst, {})[src] = count

        self._supers: dict[int, tuple[int, ...]] = {}
        self._subs: dict[int, tuple[int, ...]] = {}
        supers_acc: dict[int, list[int]] = {}
        subs_acc: dict[int, list[int]] = {}
        for sub, sup in sorted(category_edges):
            supers_acc.setdefault(sub, []).append(sup)
            subs_acc.setdefault(sup, []).append(sub)
        self._supers = {cid: tuple(sorted(v)) for cid, v in supers_acc.items()}
        self._subs = {cid: tuple(sorted(v)) for cid, v in subs_acc.items()}

        self._title_to_id = {a.title.lower(): a.id for a in articles}
        self._alias_to_id = {
            alias.lower(): self._title_to_id[target.lower()]
            for alias, target in redirects.items()
        }
        self._stopped_ids = frozenset(c.id for c in categories if c.stopped)
        self._visible_memberships = {
            aid: tuple(cid for cid in cids if cid not in self._stopped_ids)
            for aid, cids in memberships.items()
        }

    # -- articles ----------------------------------------------------------

    @property
    def articles(self) -> tuple[ArticleRef, ...]:
        return self._articles

    @property
    def n_articles(self) -> int:
        return len(self._articles)

    def article(self, article_id: int) -> ArticleRef:
        if not 0 <= article_id < len(self._articles):
            raise KeyError(f"unknown article id {article_id}")
        return self._articles[article_id]

    def article_by_title(self, title: str) -> ArticleRef | None:
        aid = self._title_to_id.get(title.lower())
        return self._articles[aid] if aid is not None else None

    def resolve_title(self, query: str) -> ArticleRef | None:
        """Case-insensitive exact match against canonical titles and redirect aliases."""
        key = query.lower()
        aid = self._title_to_id.get(key)
        if aid is None:
            aid = self._alias_to_id.get(key)
        return self._articles[aid] if aid is not None else None

    # -- categories ---------------------------------------------------------

    @property
    def categories(self) -> tuple[CategoryRef, ...]:
        return self._categories

    @property
    def n_categories(self) -> int:
        return len(self._categories)

    def category(self, category_id: int) -> CategoryRef:
        if not 0 <= category_id < len(self._categories):
            raise KeyError(f"unknown category id {category_id}")
        return self._categories[category_id]

    def is_stopped(self, category_id: int) -> bool:
        return category_id in self._stopped_ids

    def article_categories(self, article_id: int) -> tuple[int, ...]:
        """Non-stopped category ids of an article (what the embedder sees)."""
        self.article(article_id)
        return self._visible_memberships.get(article_id, ())

    def supers_of(self, category_id: int) -> tuple[int, ...]:
        return self._supers.get(category_id, ())

    def subs_of(self, category_id: int) -> tuple[int, ...]:
        return self._subs.get(category_id, ())

    # -- links ---------------------------------------------------------------

    def out_links(self, article_id: int) -> Mapping[int, int]:
        self.article(article_id)
        return self._out.get(article_id, {})

    def in_links(self, article_id: int) -> Mapping[int, int]:
        self.article(article_id)
        return self._in.get(article_id, {})

    def link_rows(self) -> Iterator[tuple[int, int, int]]:
        """All stored links as (src, dst, count), sorted."""
        for src in sorted(self._out):
            for dst in sorted(self._out[src]):
                yield src, dst, self._out[src][dst]

    def total_link_count(self) -> int:
        return sum(c for _, _, c in self.link_rows())

    # -- raw views (serialization, equality) ----------------------------------

    def membership_rows(self) -> Iterator[tuple[int, int]]:
        """All memberships as (article_id, category_id), sorted, including stopped."""
        for aid in sorted(self._memberships):
            for cid in self._memberships[aid]:
                yield aid, cid

    def category_edge_rows(self) -> Iterator[tuple[int, int]]:
        yield from sorted(self._category_edges)

    @property
    def redirects(self) -> Mapping[str, str]:
        return self._redirects

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WikiGraph):
            return NotImplemented
        return (
            self._articles == other._articles
            and self._categories == other._categories
            and self._out == other._out
            and self._memberships == other._memberships
            and self._category_edges == other._category_edges
            and self._redirects == other._redirects
        )

    def identity_hash(self) -> str:
        """Stable hex digest of the graph content (including stop markings)."""
        h = hashlib.sha256()
        for a in self._articles:
            h.update(f"A\t{a.id}\t{a.title}\n".encode())
        for c in self._categories:
            h.update(f"C\t{c.id}\t{c.title}\t{int(c.stopped)}\n".encode())
        for src, dst, count in self.link_rows():
            h.update(f"L\t{src}\t{dst}\t{count}\n".encode())
        for aid, cid in self.membership_rows():
            h.update(f"M\t{aid}\t{cid}\n".encode())
        for sub, sup in self.category_edge_rows():
            h.update(f"E\t{sub}\t{sup}\n".encode())
        for alias in sorted(self._redirects):
            h.update(f"R\t{alias}\t{self._redirects[alias]}\n".encode())
        return h.hexdigest()


# ---------------------------------------------------------------------------
# Loading and validation
# ---------------------------------------------------------------------------


def _read_rows(path: str, n_cols: int) -> Iterator[tuple[int, list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if line.endswith("\r"):  # tolerate CRLF input
                line = line[:-1]
            parts = line.split("\t")
            if len(parts) != n_cols:
                raise GraphLoadError(
                    f"expected {n_cols} tab-separated fields, got {len(parts)}",
                    file=path, line=lineno,
                )
            yield lineno, parts


def _parse_id(text: str, what: str, path: str, lineno: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise GraphLoadError(f"non-integer {what} {text!r}", file=path, line=lineno) from None
    if value < 0:
        raise GraphLoadError(f"negative {what} {value}", file=path, line=lineno)
    return value


def _load_entities(
    rows: Iterable[tuple[int, list[str]]], what: str, path: str
) -> list[str]:
    """Parse id<TAB>title rows into a dense title list indexed by id."""
    by_id: dict[int, str] = {}
    lines: dict[int, int] = {}
    seen_titles: dict[str, int] = {}
    for lineno, (id_text, title) in rows:
        eid = _parse_id(id_text, f"{what} id", path, lineno)
        if not title:
            raise GraphLoadError(f"empty {what} title", file=path, line=lineno)
        if eid in by_id:
            raise GraphLoadError(
                f"duplicate {what} id {eid} (first seen on line {lines[eid]})",
                file=path, line=lineno,
            )
        key = title.lower()
        if key in seen_titles:
            raise GraphLoadError(
                f"duplicate {what} title {title!r} (first seen on line {seen_titles[key]})",
                file=path, line=lineno,
            )
        by_id[eid] = title
        lines[eid] = lineno
        seen_titles[key] = lineno
    for expected, eid in enumerate(sorted(by_id)):
        if eid != expected:
            raise GraphLoadError(
                f"{what} ids are not contiguous from 0: missing id {expected}", file=path
            )
    return [by_id[i] for i in range(len(by_id))]


def load_graph(
    articles_path: str,
    links_path: str,
    categories_path: str,
    memberships_path: str,
    category_edges_path: str,
    redirects_path: str,
    stop_category_titles: Iterable[str] | None = None,
) -> WikiGraph:
    """Load and validate a graph from the six TSV files.

    stop_category_titles is matched case-insensitively on full titles; None
    selects the packaged default list (pass an empty set to disable filtering).
    Raw self-loop links are dropped (counted in stats) because the embedder
    synthesizes the self dimension itself.
    """
    article_titles = _load_entities(_read_rows(articles_path, 2), "article", articles_path)
    category_titles = _load_entities(_read_rows(categories_path, 2), "category", categories_path)
    n_articles, n_categories = len(article_titles), len(category_titles)

    def check_article(id_text: str, path: str, lineno: int) -> int:
        aid = _parse_id(id_text, "article id", path, lineno)
        if aid >= n_articles:
            raise GraphLoadError(
                f"reference to unknown article id {aid}", file=path, line=lineno
            )
        return aid

    def check_category(id_text: str, path: str, lineno: int) -> int:
        cid = _parse_id(id_text, "category id", path, lineno)
        if cid >= n_categories:
            raise GraphLoadError(
                f"reference to unknown category id {cid}", file=path, line=lineno
            )
        return cid

    stats = LoadStats()
    dropped_rows = 0

    links: dict[int, dict[int, int]] = {}
    for lineno, (src_text, dst_text, count_text) in _read_rows(links_path, 3):
        src = check_article(src_text, links_path, lineno)
        dst = check_article(dst_text, links_path, lineno)
        count = _parse_id(count_text, "link count", links_path, lineno)
        if count < 1:
            raise GraphLoadError(f"link count must be >= 1, got {count}",
                                 file=links_path, line=lineno)
        if src == dst:
            stats.dropped_self_loops += count
            dropped_rows += 1
            continue
        row = links.setdefault(src, {})
        row[dst] = row.get(dst, 0) + count
    if dropped_rows:
        logger.warning(
            "dropped %d self-loop link row(s) totalling count %d from %s",
            dropped_rows, stats.dropped_self_loops, links_path,
        )

    memberships_acc: dict[int, set[int]] = {}
    for lineno, (aid_text, cid_text) in _read_rows(memberships_path, 2):
        aid = check_article(aid_text, memberships_path, lineno)
        cid = check_category(cid_text, memberships_path, lineno)
        memberships_acc.setdefault(aid, set()).add(cid)
    memberships = {aid: tuple(sorted(cids)) for aid, cids in memberships_acc.items()}

    edges: set[tuple[int, int]] = set()
    for lineno, (sub_text, sup_text) in _read_rows(category_edges_path, 2):
        sub = check_category(sub_text, category_edges_path, lineno)
        sup = check_category(sup_text, category_edges_path, lineno)
        edges.add((sub, sup))

    title_keys = {t.lower() for t in article_titles}
    redirects: dict[str, str] = {}
    seen_aliases: dict[str, tuple[int, str]] = {}  # lower alias -> (line, lower target)
    for lineno, (alias, target) in _read_rows(redirects_path, 2):
        if not alias:
            raise GraphLoadError("empty redirect alias", file=redirects_path, line=lineno)
        key = alias.lower()
        if key in title_keys:
            raise GraphLoadError(
                f"redirect alias {alias!r} collides with a canonical article title",
                file=redirects_path, line=lineno,
            )
        if target.lower() not in title_keys:
            raise GraphLoadError(
                f"redirect target {target!r} is not a canonical article title",
                file=redirects_path, line=lineno,
            )
        if key in seen_aliases:
            first_line, first_target = seen_aliases[key]
            if first_target == target.lower():
                continue  # duplicate row, same mapping
            raise GraphLoadError(
                f"conflicting redirect for alias {alias!r} (first seen on line {first_line})",
                file=redirects_path, line=lineno,
            )
        redirects[alias] = target
        seen_aliases[key] = (lineno, target.lower())

    stops = (
        default_stop_categories()
        if stop_category_titles is None
        else frozenset(t.strip().lower() for t in stop_category_titles if t.strip())
    )
    categories = tuple(
        CategoryRef(cid, title, stopped=title.lower() in stops)
        for cid, title in enumerate(category_titles)
    )
    stats.stopped_categories = sum(1 for c in categories if c.stopped)
    articles = tuple(ArticleRef(aid, title) for aid, title in enumerate(article_titles))

    return WikiGraph(
        articles=articles,
        categories=categories,
        links=links,
        memberships=memberships,
        category_edges=frozenset(edges),
        redirects=redirects,
        stats=stats,
    )


def load_graph_dir(
    graph_dir: str, stop_category_titles: Iterable[str] | None = None
) -> WikiGraph:
    """Load a graph from a directory holding the six conventionally-named TSVs."""
    base = Path(graph_dir)
    for name in GRAPH_FILE_NAMES:
        if not (base / name).is_file():
            raise GraphLoadError(f"missing graph file {name}", file=str(base / name))
    return load_graph(
        str(base / "articles.tsv"),
        str(base / "links.tsv"),
        str(base / "categories.tsv"),
        str(base / "memberships.tsv"),
        str(base / "category_edges.tsv"),
        str(base / "redirects.tsv"),
        stop_category_titles=stop_category_titles,
    )


def save_graph(graph: WikiGraph, out_dir: str) -> None:
    """Serialize a graph back to the six TSV files (sorted, round-trip stable)."""
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)

    def write(name: str, rows: Iterable[tuple]) -> None:
        with open(base / name, "w", encoding="utf-8", newline="\n") as fh:
            for row in rows:
                fh.write("\t".join(str(x) for x in row) + "\n")

    write("articles.tsv", ((a.id, a.title) for a in graph.articles))
    write("categories.tsv", ((c.id, c.title) for c in graph.categories))
    write("links.tsv", graph.link_rows())
    write("memberships.tsv", graph.membership_rows())
    write("category_edges.tsv", graph.category_edge_rows())
    write("redirects.tsv", ((a, graph.redirects[a]) for a in sorted(graph.redirects)))


def build_graph(
    articles: Sequence[str],
    links: Iterable[tuple[int, int, int]] = (),
    categories: Sequence[str] = (),
    memberships: Iterable[tuple[int, int]] = (),
    category_edges: Iterable[tuple[int, int]] = (),
    redirects: Mapping[str, str] | Iterable[tuple[str, str]] = (),
    stop_category_titles: Iterable[str] | None = frozenset(),
) -> WikiGraph:
    """Build a validated graph in memory (tests, fixtures, programmatic use).

    Articles and categories are given as title sequences; ids are their
    positions. Validation matches :func:`load_graph`; by default no stop
    list is applied (pass None for the packaged default).
    """
    import tempfile

    redirect_items = redirects.items() if isinstance(redirects, Mapping) else redirects
    with tempfile.TemporaryDirectory(prefix="eve-graph-") as tmp:
        base = Path(tmp)

        def write(name: str, rows: Iterable[tuple]) -> str:
            path = base / name
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                for row in rows:
                    fh.write("\t".join(str(x) for x in row) + "\n")
            return str(path)

        return load_graph(
            write("articles.tsv", enumerate(articles)),
            write("links.tsv", links),
            write("categories.tsv", enumerate(categories)),
            write("memberships.tsv", memberships),
            write("category_edges.tsv", category_edges),
            write("redirects.tsv", redirect_items),
            stop_category_titles=stop_category_titles,
        )
