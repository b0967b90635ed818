from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morphcast.cluster import (
    Partition,
    agglomerate,
    agglomerate_vectors,
    compare_with_fixture,
    dendrogram_to_csv,
    dendrogram_to_text,
    distance,
    parse_partition,
    partition_after,
    partition_to_csv,
    partition_to_spec,
    partition_to_text,
    rand_index,
)
from morphcast.errors import FormatError
from morphcast.reference import PUBLISHED_OMEGA


def test_l1_examples(catalog):
    assert distance(catalog.estimates(9), catalog.estimates(10), "L1") == 1
    assert distance(catalog.estimates(6), catalog.estimates(8), "L1") == 1


@pytest.mark.parametrize("metric", ["L1", "L2", "Linf"])
def test_zero_iff_equal(metric):
    assert distance((1, 2, 3), (1, 2, 3), metric) == 0
    assert distance((1, 2, 3), (1, 2, 4), metric) > 0


def test_l2_and_linf():
    assert math.isclose(distance((0, 0), (3, 4), "L2"), 5.0)
    assert distance((0, 0), (3, 4), "Linf") == 4


def test_distance_errors():
    with pytest.raises(ValueError):
        distance((1,), (1, 2))
    with pytest.raises(ValueError):
        distance((1,), (2,), "cosine")


def test_builtin_dendrogram(catalog):
    d = agglomerate(catalog)
    assert len(d.merges) == 16
    assert d.merges[0].distance == 1
    assert min(m.distance for m in d.merges) == 1


def test_identical_vectors_merge_at_zero():
    d = agglomerate_vectors({1: (3, 3), 2: (3, 3), 3: (1, 5)})
    assert d.merges[0].distance == 0
    assert d.merges[0].a | d.merges[0].b == {1, 2}


def test_tie_break_smallest_ids():
    d = agglomerate_vectors({1: (0,), 2: (1,), 3: (2,), 4: (3,)})
    assert d.merges[0].a | d.merges[0].b == {1, 2}


def test_partition_after_nine(catalog):
    part = partition_after(agglomerate(catalog), 9)
    assert len(part) == 8


def test_partition_zero_steps(catalog):
    part = partition_after(agglomerate(catalog), 0)
    assert len(part) == 17 and all(len(c) == 1 for c in part.clusters)


@pytest.mark.parametrize("steps", [-1, 17])
def test_partition_out_of_range(catalog, steps):
    with pytest.raises(ValueError):
        partition_after(agglomerate(catalog), steps)


@pytest.mark.parametrize("metric", ["L1", "L2", "Linf"])
@pytest.mark.parametrize("linkage", ["single", "complete", "average"])
def test_refinement_chain(catalog, metric, linkage):
    d = agglomerate(catalog, metric, linkage)
    prev = partition_after(d, 0)
    for k in range(1, 17):
        cur = partition_after(d, k)
        assert len(cur) == 17 - k
        # exactly one merge: every new cluster is a union of old ones, one of them of two
        old = set(prev.clusters)
        new = set(cur.clusters)
        assert len(new - old) == 1 and len(old - new) == 2
        merged = (new - old).pop()
        assert merged == frozenset().union(*(old - new))
        prev = cur
    if linkage in ("single", "complete", "average"):
        dists = [m.distance for m in d.merges]
        assert dists == sorted(dists)


def test_rand_index_reported(catalog):
    part = partition_after(agglomerate(catalog), 9)
    ri = rand_index(part, PUBLISHED_OMEGA)
    assert 0.0 <= ri <= 1.0
    print(f"\nRand index (L1, single, 9 steps) vs published partition: {ri:.4f}")


def test_compare_with_fixture(catalog):
    rows = compare_with_fixture(catalog, PUBLISHED_OMEGA)
    assert len(rows) == 9
    assert rows == sorted(rows, key=lambda r: (-r[0], r[1], r[2]))
    best = rows[0]
    print(f"\nbest combination: {best[1]}/{best[2]} with Rand index {best[0]:.4f}")


def test_rand_index_identity_and_errors():
    p = Partition((frozenset({1, 2}), frozenset({3})))
    assert rand_index(p, p) == 1.0
    with pytest.raises(ValueError):
        rand_index(p, Partition((frozenset({1}),)))


@settings(max_examples=100)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=12), st.lists(st.integers(0, 3), min_size=12, max_size=12))
def test_rand_index_symmetric(a, b):
    b = b[: len(a)]
    pa = Partition(tuple(frozenset(i for i, x in enumerate(a) if x == k) for k in set(a)))
    pb = Partition(tuple(frozenset(i for i, x in enumerate(b) if x == k) for k in set(b)))
    assert rand_index(pa, pb) == rand_index(pb, pa)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(1, 30), st.lists(st.integers(1, 5), min_size=3, max_size=3),
                       min_size=1, max_size=10))
def test_merge_count_and_coverage(vecs):
    d = agglomerate_vectors(vecs)
    assert len(d.merges) == len(vecs) - 1
    for k in range(len(vecs)):
        part = partition_after(d, k)
        assert len(part) == len(vecs) - k
        assert sorted(i for c in part.clusters for i in c) == sorted(vecs)


def test_parse_partition_round_trip():
    assert parse_partition(partition_to_spec(PUBLISHED_OMEGA)) == PUBLISHED_OMEGA
    assert parse_partition("Φ1,Φ2; 3") == Partition((frozenset({1, 2}), frozenset({3})))


def test_parse_partition_errors():
    with pytest.raises(FormatError):
        parse_partition("1,2;2")
    with pytest.raises(FormatError):
        parse_partition(" ; ")


def test_outputs(catalog):
    d = agglomerate(catalog)
    assert len(dendrogram_to_text(d).splitlines()) == 16
    assert dendrogram_to_csv(d).splitlines()[0] == "step,cluster_a,cluster_b,distance"
    part = partition_after(d, 9)
    assert len(partition_to_text(part).splitlines()) == 8
    assert len(partition_to_csv(part).splitlines()) == 18
