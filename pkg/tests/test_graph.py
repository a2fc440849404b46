from __future__ import annotations

import logging
from pathlib import Path

import pytest

from eve import GraphLoadError, build_graph, load_graph, load_graph_dir, save_graph
from eve.graph import default_stop_categories


def write_graph_files(
    tmp_path: Path,
    articles="",
    links="",
    categories="",
    memberships="",
    category_edges="",
    redirects="",
) -> dict[str, str]:
    paths = {}
    for name, body in [
        ("articles", articles),
        ("links", links),
        ("categories", categories),
        ("memberships", memberships),
        ("category_edges", category_edges),
        ("redirects", redirects),
    ]:
        p = tmp_path / f"{name}.tsv"
        p.write_text(body, encoding="utf-8")
        paths[name] = str(p)
    return paths


def load_from(paths, stops=frozenset()):
    return load_graph(
        paths["articles"],
        paths["links"],
        paths["categories"],
        paths["memberships"],
        paths["category_edges"],
        paths["redirects"],
        stop_category_titles=stops,
    )


def test_four_articles_ten_categories_topology(tmp_path):
    # Four articles, ten categories; A1 belongs to C1 and C9; C4 sits between
    # super-categories C2, C3 and sub-categories C5, C6, C7.
    paths = write_graph_files(
        tmp_path,
        articles="".join(f"{i}\tA{i + 1}\n" for i in range(4)),
        categories="".join(f"{i}\tC{i + 1}\n" for i in range(10)),
        links="3\t0\t1\n0\t1\t1\n",
        memberships="0\t0\n0\t8\n1\t4\n2\t5\n3\t6\n",
        category_edges="3\t1\n3\t2\n4\t3\n5\t3\n6\t3\n",
    )
    g = load_from(paths)
    assert g.n_articles == 4
    assert g.n_categories == 10
    a1 = g.article_by_title("A1")
    assert {g.category(c).title for c in g.article_categories(a1.id)} == {"C1", "C9"}
    c4 = 3
    assert {g.category(c).title for c in g.supers_of(c4)} == {"C2", "C3"}
    assert {g.category(c).title for c in g.subs_of(c4)} == {"C5", "C6", "C7"}


def test_empty_links_file_is_valid(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tSolo\n")
    g = load_from(paths)
    assert g.n_articles == 1
    assert list(g.link_rows()) == []


def test_dangling_link_reference_names_line(tmp_path):
    paths = write_graph_files(
        tmp_path,
        articles="0\tA\n1\tB\n2\tC\n3\tD\n",
        links="0\t1\t1\n0\t99\t1\n",
    )
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "99" in str(exc.value)
    assert "links.tsv:2" in str(exc.value)


def test_wrong_column_count(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tA\n", links="0\t0\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "links.tsv:1" in str(exc.value)


def test_non_integer_id(tmp_path):
    paths = write_graph_files(tmp_path, articles="zero\tA\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "non-integer" in str(exc.value)


def test_duplicate_article_id(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tA\n0\tB\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "duplicate article id 0" in str(exc.value)
    assert "articles.tsv:2" in str(exc.value)


def test_duplicate_title_case_insensitive(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tBerlin\n1\tBERLIN\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "duplicate article title" in str(exc.value)


def test_non_contiguous_ids(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tA\n2\tB\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "contiguous" in str(exc.value)


def test_self_loops_dropped_and_counts_preserved(tmp_path, caplog):
    paths = write_graph_files(
        tmp_path,
        articles="0\tA\n1\tB\n",
        links="0\t0\t3\n0\t1\t2\n1\t0\t4\n1\t1\t1\n",
    )
    with caplog.at_level(logging.WARNING):
        g = load_from(paths)
    assert g.stats.dropped_self_loops == 4
    assert g.total_link_count() == (3 + 2 + 4 + 1) - 4
    assert g.out_links(0) == {1: 2}
    assert any("self-loop" in rec.message for rec in caplog.records)


def test_duplicate_link_rows_accumulate(tmp_path):
    paths = write_graph_files(
        tmp_path, articles="0\tA\n1\tB\n", links="0\t1\t2\n0\t1\t3\n"
    )
    g = load_from(paths)
    assert g.out_links(0) == {1: 5}


def test_zero_link_count_rejected(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tA\n1\tB\n", links="0\t1\t0\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert ">= 1" in str(exc.value)


def test_stop_categories_case_insensitive(tmp_path):
    paths = write_graph_files(
        tmp_path,
        articles="0\tA\n",
        categories="0\tHidden Categories\n1\tReal topic\n",
        memberships="0\t0\n0\t1\n",
    )
    g = load_from(paths, stops={"hidden categories"})
    assert g.category(0).stopped
    assert not g.category(1).stopped
    assert g.article_categories(0) == (1,)
    assert g.stats.stopped_categories == 1


def test_default_stop_list_applied_when_none(tmp_path):
    paths = write_graph_files(
        tmp_path,
        articles="0\tA\n",
        categories="0\tUnprintworthy redirects\n",
        memberships="0\t0\n",
    )
    g = load_from(paths, stops=None)
    assert g.category(0).stopped
    assert g.article_categories(0) == ()


def test_packaged_stop_list_has_four_titles():
    assert len(default_stop_categories()) == 4


def test_redirect_alias_collides_with_title(tmp_path):
    paths = write_graph_files(
        tmp_path, articles="0\tEspresso\n1\tDrink\n", redirects="ESPRESSO\tDrink\n"
    )
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "collides" in str(exc.value)


def test_redirect_target_must_exist(tmp_path):
    paths = write_graph_files(tmp_path, articles="0\tA\n", redirects="Alias\tMissing\n")
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "redirects.tsv:1" in str(exc.value)


def test_conflicting_redirects_rejected(tmp_path):
    paths = write_graph_files(
        tmp_path,
        articles="0\tA\n1\tB\n",
        redirects="Alias\tA\nalias\tB\n",
    )
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "conflicting redirect" in str(exc.value)


def test_duplicate_identical_redirect_tolerated(tmp_path):
    paths = write_graph_files(
        tmp_path, articles="0\tA\n", redirects="Alias\tA\nAlias\tA\n"
    )
    g = load_from(paths)
    assert g.redirects == {"Alias": "A"}


def test_dangling_membership(tmp_path):
    paths = write_graph_files(
        tmp_path, articles="0\tA\n", categories="0\tC\n", memberships="0\t7\n"
    )
    with pytest.raises(GraphLoadError) as exc:
        load_from(paths)
    assert "memberships.tsv:1" in str(exc.value)


def test_round_trip_identical(mini_graph, tmp_path):
    out = tmp_path / "copy"
    save_graph(mini_graph, str(out))
    again = load_graph_dir(str(out))  # same (default) stop list on both sides
    assert again == mini_graph
    assert again.identity_hash() == mini_graph.identity_hash()


def test_round_trip_of_programmatic_graph(tmp_path):
    g = build_graph(
        articles=["A", "B"],
        links=[(0, 1, 2), (1, 0, 7)],
        categories=["c1", "c2"],
        memberships=[(0, 0), (1, 1)],
        category_edges=[(0, 1), (1, 0)],
        redirects={"Alias": "A"},
    )
    save_graph(g, str(tmp_path / "rt"))
    assert load_graph_dir(str(tmp_path / "rt"), stop_category_titles=()) == g


def test_load_graph_dir_missing_file(tmp_path):
    with pytest.raises(GraphLoadError) as exc:
        load_graph_dir(str(tmp_path))
    assert "missing graph file" in str(exc.value)


def test_unknown_article_lookup(mini_graph):
    with pytest.raises(KeyError):
        mini_graph.article(999)
    assert mini_graph.article_by_title("no such thing") is None
