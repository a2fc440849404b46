from __future__ import annotations

from pathlib import Path

import pytest

from eve import TaskDataset, WikiGraph, build_graph, load_dataset, load_graph_dir
from eve.search import SearchIndex, build_search_index

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def mini_graph() -> WikiGraph:
    """The committed three-group cuisine world, default stop list applied."""
    return load_graph_dir(str(FIXTURES / "mini"))


@pytest.fixture(scope="session")
def mini_index(mini_graph) -> SearchIndex:
    return build_search_index(mini_graph)


@pytest.fixture(scope="session")
def mini_dataset() -> TaskDataset:
    return load_dataset(str(FIXTURES / "mini_dataset.json"))


@pytest.fixture(scope="session")
def linkfan_graph() -> WikiGraph:
    """The committed link-count fan: one concept article with three neighbors
    at combined link counts 1, 2, and 4 (3 in + 1 out)."""
    return load_graph_dir(str(FIXTURES / "linkfan"))


@pytest.fixture()
def two_block_graph() -> WikiGraph:
    """Small graph with both link structure and a category tree, for
    embedding composition tests."""
    return build_graph(
        articles=["Espresso", "Drink", "Espresso machine"],
        links=[(1, 0, 3), (0, 2, 1)],
        categories=["coffee drinks", "italian cuisine", "cuisine by nationality"],
        memberships=[(0, 0), (0, 1)],
        category_edges=[(1, 2)],
        redirects={"Expresso": "Espresso"},
    )
