"""Agglomerative clustering of operations by their criteria estimates."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .catalog import Catalog, op_name, parse_op_name
from .errors import FormatError

METRICS = ("L1", "L2", "Linf")
LINKAGES = ("single", "complete", "average")


def distance(a: Sequence[int], b: Sequence[int], metric: str = "L1"):
    """L1 and Linf return ints; L2 returns a float."""
    if len(a) != len(b):
        raise ValueError(f"vector lengths differ: {len(a)} vs {len(b)}")
    diffs = [abs(x - y) for x, y in zip(a, b)]
    if metric == "L1":
        return sum(diffs)
    if metric == "L2":
        return math.sqrt(sum(d * d for d in diffs))
    if metric == "Linf":
        return max(diffs, default=0)
    raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")


@dataclass(frozen=True)
class Merge:
    a: frozenset
    b: frozenset
    distance: float


@dataclass(frozen=True)
class Dendrogram:
    leaves: tuple
    merges: tuple[Merge, ...]


@dataclass(frozen=True)
class Partition:
    clusters: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "clusters", tuple(sorted((frozenset(c) for c in self.clusters), key=min))
        )

    def __len__(self):
        return len(self.clusters)

    def label_of(self) -> dict:
        return {i: k for k, c in enumerate(self.clusters) for i in c}


def _linkage_value(dists, linkage):
    if linkage == "single":
        return min(dists)
    if linkage == "complete":
        return max(dists)
    if linkage == "average":
        if all(isinstance(d, int) for d in dists):
            return Fraction(sum(dists), len(dists))
        return sum(dists) / len(dists)
    raise ValueError(f"unknown linkage {linkage!r}; choose from {LINKAGES}")


def agglomerate_vectors(vectors: Mapping, metric: str = "L1", linkage: str = "single") -> Dendrogram:
    """Merge the closest pair of clusters until one remains.

    Ties go to the pair whose (smaller, larger) cluster representatives are
    lexicographically smallest, a cluster being represented by its minimum id.
    """
    ids = sorted(vectors)
    pair = {
        (i, j): distance(vectors[i], vectors[j], metric)
        for i, j in itertools.combinations(ids, 2)
    }
    clusters = [frozenset([i]) for i in ids]
    merges = []
    while len(clusters) > 1:
        best = None
        for x, y in itertools.combinations(clusters, 2):
            d = _linkage_value([pair[min(i, j), max(i, j)] for i in x for j in y], linkage)
            rep = (min(min(x), min(y)), max(min(x), min(y)))
            key = (round(d, 12) if isinstance(d, float) else d, rep)
            if best is None or key < best[0]:
                best = (key, d, x, y)
        _, d, x, y = best
        if min(y) < min(x):
            x, y = y, x
        merges.append(Merge(x, y, float(d)))
        clusters = [c for c in clusters if c is not x and c is not y] + [x | y]
    return Dendrogram(tuple(ids), tuple(merges))


def agglomerate(catalog: Catalog, metric: str = "L1", linkage: str = "single") -> Dendrogram:
    return agglomerate_vectors({op.id: op.estimates for op in catalog}, metric, linkage)


def partition_after(dendrogram: Dendrogram, steps: int) -> Partition:
    """Clusters present after the first ``steps`` merges."""
    n = len(dendrogram.leaves)
    if not 0 <= steps <= max(n - 1, 0):
        raise ValueError(f"steps must lie in [0, {max(n - 1, 0)}], got {steps}")
    clusters = {frozenset([i]) for i in dendrogram.leaves}
    for m in dendrogram.merges[:steps]:
        clusters -= {m.a, m.b}
        clusters.add(m.a | m.b)
    return Partition(tuple(clusters))


def parse_partition(text: str) -> Partition:
    """Read ``"1,3,6;2;4,5"`` (clusters separated by ``;``, ids by ``,``).

    Ids may be written ``Φ7`` or ``7``; every id must appear once.
    """
    clusters, seen = [], set()
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        ids = [parse_op_name(tok) for tok in chunk.split(",") if tok.strip()]
        if seen & set(ids) or len(set(ids)) != len(ids):
            raise FormatError(f"partition lists an operation twice: {chunk.strip()!r}")
        seen.update(ids)
        clusters.append(frozenset(ids))
    if not clusters:
        raise FormatError("partition is empty")
    return Partition(tuple(clusters))


def partition_to_spec(partition: Partition) -> str:
    return ";".join(",".join(str(i) for i in sorted(c)) for c in partition.clusters)


def rand_index(p: Partition, q: Partition) -> float:
    """Share of item pairs on which two partitions agree (same vs different cluster)."""
    lp, lq = p.label_of(), q.label_of()
    if set(lp) != set(lq):
        raise ValueError("partitions cover different items")
    pairs = list(itertools.combinations(sorted(lp), 2))
    if not pairs:
        return 1.0
    agree = sum((lp[i] == lp[j]) == (lq[i] == lq[j]) for i, j in pairs)
    return agree / len(pairs)


def compare_with_fixture(catalog: Catalog, fixture: Partition, steps: int | None = None):
    """Rand index of every metric x linkage combination against ``fixture``.

    Returns ``[(rand_index, metric, linkage), ...]`` best first.
    """
    if steps is None:
        steps = len(catalog) - len(fixture)
    rows = []
    for metric, linkage in itertools.product(METRICS, LINKAGES):
        part = partition_after(agglomerate(catalog, metric, linkage), steps)
        rows.append((rand_index(part, fixture), metric, linkage))
    return sorted(rows, key=lambda r: (-r[0], r[1], r[2]))


def _members(cluster):
    return " ".join(op_name(i) for i in sorted(cluster))


def dendrogram_to_text(dendrogram: Dendrogram) -> str:
    lines = [
        f"{k:>3}  {{{_members(m.a)}}} + {{{_members(m.b)}}}  d={m.distance:g}"
        for k, m in enumerate(dendrogram.merges, start=1)
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def partition_to_text(partition: Partition) -> str:
    return "".join(
        f"cluster {k}: {_members(c)}\n" for k, c in enumerate(partition.clusters, start=1)
    )


def dendrogram_to_csv(dendrogram: Dendrogram) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "cluster_a", "cluster_b", "distance"])
    for k, m in enumerate(dendrogram.merges, start=1):
        w.writerow([k, _members(m.a), _members(m.b), f"{m.distance:g}"])
    return buf.getvalue()


def partition_to_csv(partition: Partition) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["operation", "cluster"])
    for op_id, k in sorted(partition.label_of().items()):
        w.writerow([op_name(op_id), k + 1])
    return buf.getvalue()
