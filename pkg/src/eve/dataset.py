"""Ground-truth dataset: topical types -> categories -> item concept names.

The on-disk format is JSON:
    {"topical_types": [{"name": str,
                        "categories": [{"name": str, "items": [str, ...]}, ...]},
                       ...]}

Category names must be unique within a type, item strings unique within a
type (across all its categories), and every category needs at least two
items so that both intruder sampling and ranking relevance are well-defined.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import DatasetError


@dataclass(frozen=True)
class Category:
    name: str
    items: tuple[str, ...]


@dataclass(frozen=True)
class TopicalType:
    name: str
    categories: tuple[Category, ...]

    def items(self) -> tuple[str, ...]:
        """All items of the type, in category order."""
        return tuple(item for cat in self.categories for item in cat.items)

    def category(self, name: str) -> Category:
        for cat in self.categories:
            if cat.name == name:
                return cat
        raise DatasetError(f"unknown category {name!r} in topical type {self.name!r}")


@dataclass(frozen=True)
class TaskDataset:
    types: tuple[TopicalType, ...]
    source: str = "<memory>"

    def type_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.types)

    def type(self, name: str) -> TopicalType:
        for t in self.types:
            if t.name == name:
                return t
        raise DatasetError(f"unknown topical type {name!r}")

    def identity_hash(self) -> str:
        h = hashlib.sha256()
        for t in self.types:
            for cat in t.categories:
                for item in cat.items:
                    h.update(f"{t.name}\t{cat.name}\t{item}\n".encode())
        return h.hexdigest()


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DatasetError(message)


def dataset_from_obj(obj: object, source: str = "<memory>") -> TaskDataset:
    """Validate a parsed JSON object into a TaskDataset."""
    _require(isinstance(obj, dict), "dataset root must be a JSON object")
    raw_types = obj.get("topical_types")
    _require(isinstance(raw_types, list) and raw_types, "dataset needs a nonempty 'topical_types' list")

    types: list[TopicalType] = []
    seen_types: set[str] = set()
    for raw_type in raw_types:
        _require(isinstance(raw_type, dict), "each topical type must be an object")
        name = raw_type.get("name")
        _require(isinstance(name, str) and bool(name), "topical type 'name' must be a nonempty string")
        _require(name not in seen_types, f"duplicate topical type {name!r}")
        seen_types.add(name)

        raw_cats = raw_type.get("categories")
        _require(
            isinstance(raw_cats, list) and bool(raw_cats),
            f"topical type {name!r} needs a nonempty 'categories' list",
        )
        categories: list[Category] = []
        seen_cats: set[str] = set()
        seen_items: set[str] = set()
        for raw_cat in raw_cats:
            _require(isinstance(raw_cat, dict), f"categories of {name!r} must be objects")
            cat_name = raw_cat.get("name")
            _require(
                isinstance(cat_name, str) and bool(cat_name),
                f"category 'name' in {name!r} must be a nonempty string",
            )
            _require(cat_name not in seen_cats, f"duplicate category {cat_name!r} in type {name!r}")
            seen_cats.add(cat_name)

            raw_items = raw_cat.get("items")
            _require(
                isinstance(raw_items, list),
                f"category {cat_name!r} of {name!r} needs an 'items' list",
            )
            _require(
                len(raw_items) >= 2,
                f"category {cat_name!r} of {name!r} needs at least 2 items, has {len(raw_items)}",
            )
            items: list[str] = []
            for item in raw_items:
                _require(
                    isinstance(item, str) and bool(item),
                    f"items of category {cat_name!r} must be nonempty strings",
                )
                _require(
                    item not in seen_items,
                    f"duplicate item {item!r} in topical type {name!r}",
                )
                seen_items.add(item)
                items.append(item)
            categories.append(Category(name=cat_name, items=tuple(items)))
        types.append(TopicalType(name=name, categories=tuple(categories)))
    return TaskDataset(types=tuple(types), source=source)


def load_dataset(path: str) -> TaskDataset:
    """Load and validate a dataset JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON: {exc}") from None
    try:
        return dataset_from_obj(obj, source=str(path))
    except DatasetError as exc:
        raise DatasetError(f"{path}: {exc}") from None
