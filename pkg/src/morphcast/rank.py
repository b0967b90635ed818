"""Ranking of operations into priority layers by Pareto dominance.

All criteria are maximised.  The fixture method simply reads the
stored priorities back as layers.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Mapping, Sequence

from .catalog import Catalog, op_name


class Verdict(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def dominance(a: Sequence[int], b: Sequence[int]) -> Verdict:
    """Compare two estimate vectors componentwise (higher is better)."""
    if len(a) != len(b):
        raise ValueError(f"vector lengths differ: {len(a)} vs {len(b)}")
    ge = all(x >= y for x, y in zip(a, b))
    le = all(x <= y for x, y in zip(a, b))
    if ge and le:
        return Verdict.EQUAL
    if ge:
        return Verdict.DOMINATES
    if le:
        return Verdict.DOMINATED
    return Verdict.INCOMPARABLE


@dataclass(frozen=True)
class RankedLayers:
    layers: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(frozenset(l) for l in self.layers))
        if any(not l for l in self.layers):
            raise ValueError("layers must be non-empty")

    def priority(self, op_id) -> int:
        for k, layer in enumerate(self.layers, start=1):
            if op_id in layer:
                return k
        raise KeyError(op_id)

    def as_mapping(self) -> dict:
        return {i: k for k, layer in enumerate(self.layers, start=1) for i in layer}

    def __len__(self):
        return len(self.layers)


def peel_layers(vectors: Mapping[object, Sequence[int]]) -> RankedLayers:
    """Repeated Pareto peeling: layer k holds the items not dominated once
    layers 1..k-1 are removed."""
    remaining = dict(vectors)
    layers = []
    while remaining:
        front = {
            i for i, v in remaining.items()
            if not any(dominance(w, v) is Verdict.DOMINATES for j, w in remaining.items() if j != i)
        }
        layers.append(front)
        for i in front:
            del remaining[i]
    return RankedLayers(tuple(layers))


def fixture_layers(priorities: Mapping[object, int]) -> RankedLayers:
    levels = sorted(set(priorities.values()))
    return RankedLayers(tuple(
        frozenset(i for i, r in priorities.items() if r == level) for level in levels
    ))


METHODS = ("peeling", "dominance-peeling", "fixture")


def rank_operations(catalog: Catalog, method: str = "peeling") -> RankedLayers:
    if method in ("peeling", "dominance-peeling"):
        return peel_layers({op.id: op.estimates for op in catalog})
    if method == "fixture":
        return fixture_layers({op.id: op.priority for op in catalog})
    raise ValueError(f"unknown ranking method {method!r}; choose from {METHODS}")


def dominance_inversions(catalog: Catalog, layers: RankedLayers) -> list[tuple[int, int]]:
    """Pairs ``(a, b)`` where ``a`` dominates ``b`` but sits in a later layer."""
    prio = layers.as_mapping()
    return [
        (a.id, b.id)
        for a in catalog for b in catalog
        if a.id != b.id
        and dominance(a.estimates, b.estimates) is Verdict.DOMINATES
        and prio[a.id] > prio[b.id]
    ]


def layer_disagreements(catalog: Catalog) -> dict[int, tuple[int, int]]:
    """Operations whose peeling layer differs from the stored priority."""
    peeled = rank_operations(catalog, "peeling").as_mapping()
    return {op.id: (op.priority, peeled[op.id]) for op in catalog if peeled[op.id] != op.priority}


def layers_to_text(layers: RankedLayers) -> str:
    lines = [
        f"layer {k}: {', '.join(op_name(i) for i in sorted(layer))}"
        for k, layer in enumerate(layers.layers, start=1)
    ]
    return "\n".join(lines) + "\n"


def layers_to_csv(layers: RankedLayers) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["operation", "layer"])
    for op_id, k in sorted(layers.as_mapping().items()):
        w.writerow([op_name(op_id), k])
    return buf.getvalue()
