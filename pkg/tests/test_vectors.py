from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eve import (
    LabeledVector,
    MixedSpaceError,
    VectorFormatError,
    ZeroVectorError,
    article_label,
    category_label,
    cosine,
    dense_cosine,
    export_external,
    export_labeled,
    hadamard,
    import_external,
    import_labeled,
    mean,
    subtract,
    top_n,
)
from eve.vectors import ExternalSpace, add, scale

A = article_label
C = category_label


def lv(**kwargs) -> LabeledVector:
    return LabeledVector({C(k): v for k, v in kwargs.items()})


# Hypothesis strategy for sparse labeled vectors.
def labeled_vectors(nonnegative=False, min_dims=1):
    names = st.sampled_from([f"d{i}" for i in range(8)])
    value = (
        st.floats(min_value=0.001, max_value=100.0)
        if nonnegative
        else st.floats(min_value=-100.0, max_value=100.0).filter(lambda x: abs(x) > 1e-6)
    )
    return st.dictionaries(names, value, min_size=min_dims, max_size=6).map(
        lambda d: LabeledVector(
            {(C(k) if i % 2 == 0 else A(k)): v for i, (k, v) in enumerate(d.items())}
        )
    )


# -- cosine -----------------------------------------------------------------


def test_cosine_identity():
    v = lv(a=0.3, b=0.7)
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)


def test_cosine_disjoint_supports():
    assert cosine(lv(a=1.0), lv(b=1.0)) == 0.0


def test_cosine_hand_example():
    assert cosine(lv(a=1.0, b=1.0), lv(a=1.0)) == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_cosine_zero_vector_rejected():
    with pytest.raises(ZeroVectorError):
        cosine(lv(a=1.0), LabeledVector({}))
    with pytest.raises(ZeroVectorError):
        cosine(LabeledVector({C("a"): 0.0}), lv(a=1.0))


def test_article_and_category_dimensions_are_distinct():
    u = LabeledVector({A("rome"): 1.0})
    v = LabeledVector({C("rome"): 1.0})
    assert cosine(u, v) == 0.0


@given(labeled_vectors(), labeled_vectors())
@settings(max_examples=150)
def test_cosine_symmetry(u, v):
    assert cosine(u, v) == pytest.approx(cosine(v, u), abs=1e-12)


@given(labeled_vectors(), st.floats(min_value=0.01, max_value=50.0))
@settings(max_examples=150)
def test_cosine_scale_invariance(v, alpha):
    assert cosine(scale(v, alpha), v) == pytest.approx(cosine(v, v), abs=1e-9)


@given(labeled_vectors(nonnegative=True), labeled_vectors(nonnegative=True))
@settings(max_examples=150)
def test_cosine_of_nonnegative_vectors_in_unit_interval(u, v):
    s = cosine(u, v)
    assert -1e-12 <= s <= 1.0 + 1e-12


# -- mean ---------------------------------------------------------------------


def test_mean_union():
    assert mean([lv(a=1.0), lv(b=1.0)]).scores == {C("a"): 0.5, C("b"): 0.5}


def test_mean_single_vector_identity():
    v = lv(a=0.4, b=0.6)
    assert mean([v]).scores == v.scores


def test_mean_hand_example():
    got = mean([lv(a=0.2, b=0.8), lv(a=0.6)])
    assert got.get(C("a")) == pytest.approx(0.4, abs=1e-12)
    assert got.get(C("b")) == pytest.approx(0.4, abs=1e-12)


def test_mean_empty_rejected():
    with pytest.raises(ValueError):
        mean([])


@given(labeled_vectors(), st.integers(min_value=1, max_value=5))
@settings(max_examples=100)
def test_mean_idempotent_on_identical_inputs(v, n):
    got = mean([v] * n)
    assert set(got.scores) == set(v.scores)
    for lab, s in v.scores.items():
        assert got.get(lab) == pytest.approx(s, abs=1e-12)


# -- subtract ------------------------------------------------------------------


def test_subtract_self_is_zero():
    v = lv(a=1.0, b=2.0)
    assert subtract(v, v).is_zero()


def test_subtract_keeps_negative_entries():
    got = subtract(lv(a=1.0), lv(b=1.0))
    assert got.scores == {C("a"): 1.0, C("b"): -1.0}


@given(labeled_vectors(), labeled_vectors())
@settings(max_examples=150)
def test_subtract_antisymmetry_exact(u, v):
    total = add(subtract(u, v), subtract(v, u))
    assert all(x == 0.0 for x in total.scores.values())


# -- hadamard -------------------------------------------------------------------


def test_hadamard_with_empty_vector():
    assert hadamard(lv(a=1.0), LabeledVector({})).scores == {}


def test_hadamard_intersection_only():
    got = hadamard(lv(a=2.0, b=3.0), lv(a=0.5))
    assert got.scores == {C("a"): 1.0}


@given(labeled_vectors(), labeled_vectors())
@settings(max_examples=150)
def test_hadamard_commutative(u, v):
    assert hadamard(u, v).scores == hadamard(v, u).scores


# -- top_n -----------------------------------------------------------------------


def test_top_n_basic():
    assert top_n(lv(a=0.1, b=0.9), 1) == [(C("b"), 0.9)]


def test_top_n_larger_than_support():
    got = top_n(lv(a=0.1, b=0.9), 10)
    assert got == [(C("b"), 0.9), (C("a"), 0.1)]


def test_top_n_tie_breaks_lexicographically_within_kind():
    got = top_n(lv(y=0.5, x=0.5), 2)
    assert [lab.name for lab, _ in got] == ["x", "y"]


def test_top_n_tie_breaks_category_before_article():
    v = LabeledVector({A("same"): 0.5, C("same"): 0.5})
    got = top_n(v, 2)
    assert [lab.kind.value for lab, _ in got] == ["category", "article"]


def test_top_n_requires_positive_n():
    with pytest.raises(ValueError):
        top_n(lv(a=1.0), 0)


@given(labeled_vectors(), st.integers(min_value=1, max_value=8))
@settings(max_examples=100)
def test_top_n_deterministic(v, n):
    assert top_n(v, n) == top_n(v, n)
    assert len(top_n(v, n)) <= n


# -- external word2vec format ----------------------------------------------------


def test_import_external_basic(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("2 3\nalpha 1.0 2.0 3.0\nbeta 0.5 -1.0 0.0\n", encoding="utf-8")
    space = import_external(str(path))
    assert space.dimension == 3
    assert len(space) == 2
    assert np.allclose(space.get("beta"), [0.5, -1.0, 0.0])


def test_import_external_row_width_mismatch(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("1 3\nalpha 1.0 2.0\n", encoding="utf-8")
    with pytest.raises(VectorFormatError) as exc:
        import_external(str(path))
    assert ":2" in str(exc.value)


def test_import_external_non_numeric(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("1 2\nalpha 1.0 oops\n", encoding="utf-8")
    with pytest.raises(VectorFormatError):
        import_external(str(path))


def test_import_external_duplicate_token(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("2 1\nalpha 1.0\nalpha 2.0\n", encoding="utf-8")
    with pytest.raises(VectorFormatError):
        import_external(str(path))


def test_import_external_count_mismatch(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("3 1\nalpha 1.0\n", encoding="utf-8")
    with pytest.raises(VectorFormatError):
        import_external(str(path))


def test_external_round_trip(tmp_path):
    rng = random.Random(7)
    space = ExternalSpace(
        dimension=4,
        vectors={
            f"tok{i}": np.array([rng.uniform(-2, 2) for _ in range(4)])
            for i in range(5)
        },
    )
    path = tmp_path / "rt.txt"
    export_external(space, str(path))
    again = import_external(str(path))
    assert again.dimension == space.dimension
    assert set(again.vectors) == set(space.vectors)
    for tok, vec in space.vectors.items():
        assert np.array_equal(again.vectors[tok], vec)


def test_external_lookup_tolerates_naming_conventions():
    space = ExternalSpace(dimension=1, vectors={"alice_in_chains": np.array([1.0])})
    assert space.lookup("Alice in Chains") is not None
    assert space.lookup("missing token") is None


def test_dense_cosine_dim_mismatch():
    with pytest.raises(MixedSpaceError):
        dense_cosine(np.array([1.0]), np.array([1.0, 2.0]))


def test_dense_cosine_zero_vector():
    with pytest.raises(ZeroVectorError):
        dense_cosine(np.zeros(3), np.ones(3))


# -- labeled JSONL format -----------------------------------------------------------


def test_labeled_round_trip_exact(tmp_path):
    rng = random.Random(13)
    table = {}
    for i in range(6):
        scores = {}
        for j in range(rng.randint(1, 5)):
            lab = C(f"cat {j}") if j % 2 else A(f"art {j}")
            scores[lab] = rng.uniform(-1, 1)
        table[f"concept {i}"] = LabeledVector(scores)
    path = tmp_path / "vecs.jsonl"
    export_labeled(table, str(path))
    again = import_labeled(str(path))
    assert set(again) == set(table)
    for concept in table:
        assert again[concept].scores == table[concept].scores  # bit-exact


def test_labeled_import_rejects_duplicates(tmp_path):
    path = tmp_path / "dup.jsonl"
    line = '{"concept": "x", "dims": [{"kind": "article", "name": "a", "score": 1.0}]}'
    path.write_text(line + "\n" + line + "\n", encoding="utf-8")
    with pytest.raises(VectorFormatError) as exc:
        import_labeled(str(path))
    assert ":2" in str(exc.value)


def test_labeled_import_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("{not json\n", encoding="utf-8")
    with pytest.raises(VectorFormatError):
        import_labeled(str(path))


def test_labeled_import_rejects_bad_kind(tmp_path):
    path = tmp_path / "kind.jsonl"
    path.write_text(
        '{"concept": "x", "dims": [{"kind": "verb", "name": "a", "score": 1.0}]}\n',
        encoding="utf-8",
    )
    with pytest.raises(VectorFormatError):
        import_labeled(str(path))
