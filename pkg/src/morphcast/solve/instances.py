"""Instance and selection types shared by the solvers, plus their JSON form."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from ..errors import FormatError, InvariantError

OPTIMAL = "optimal"
GREEDY = "greedy"
INFEASIBLE = "infeasible"

DEFAULT_CELL_CAP = 10**8


@dataclass(frozen=True)
class Item:
    id: object
    profit: int
    weight: int


@dataclass(frozen=True)
class CoverItem:
    id: object
    cost: int
    amount: int


def _check_ids(ids):
    if len(set(ids)) != len(ids):
        raise InvariantError("item ids must be unique")
    try:
        sorted(ids)
    except TypeError:
        raise InvariantError("item ids must be mutually comparable") from None


@dataclass(frozen=True)
class KnapsackInstance:
    """0/1 knapsack: maximise total profit subject to total weight <= budget.

    ``precedence`` lists ``(predecessor, successor)`` pairs; a successor may
    only be chosen together with its predecessor.
    """

    items: tuple[Item, ...]
    budget: int
    precedence: tuple[tuple[object, object], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "precedence", tuple(tuple(p) for p in self.precedence))
        _check_ids([it.id for it in self.items])
        if self.budget < 0:
            raise InvariantError("budget must be non-negative")
        for it in self.items:
            if it.weight < 1:
                raise InvariantError(f"item {it.id!r}: weight must be >= 1")
        known = {it.id for it in self.items}
        for pred, succ in self.precedence:
            if pred not in known or succ not in known:
                raise InvariantError(f"precedence ({pred!r}, {succ!r}) names an unknown item")


@dataclass(frozen=True)
class MckpInstance:
    """Multiple-choice knapsack: exactly one item per group (or at most one
    when ``skippable``), total weight <= budget, maximise profit."""

    groups: tuple[tuple[Item, ...], ...]
    budget: int
    skippable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))
        if self.budget < 0:
            raise InvariantError("budget must be non-negative")
        for g in self.groups:
            if not g:
                raise InvariantError("groups must be non-empty")
            for it in g:
                if it.weight < 1:
                    raise InvariantError(f"item {it.id!r}: weight must be >= 1")
        _check_ids([it.id for g in self.groups for it in g])


@dataclass(frozen=True)
class CoverInstance:
    """Min-cost cover: minimise total cost subject to total amount >= threshold."""

    items: tuple[CoverItem, ...]
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        _check_ids([it.id for it in self.items])
        if self.threshold < 0:
            raise InvariantError("threshold must be non-negative")
        for it in self.items:
            if it.amount < 1:
                raise InvariantError(f"item {it.id!r}: amount must be >= 1")


@dataclass(frozen=True)
class Selection:
    """Chosen ids (sorted) with their objective total and weight/amount total."""

    chosen: tuple
    value: int
    weight: int
    status: str

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def infeasible() -> Selection:
    return Selection((), 0, 0, INFEASIBLE)


def make_selection(items_by_id, chosen, status, value_attr, weight_attr) -> Selection:
    chosen = tuple(sorted(chosen))
    value = sum(getattr(items_by_id[i], value_attr) for i in chosen)
    weight = sum(getattr(items_by_id[i], weight_attr) for i in chosen)
    return Selection(chosen, value, weight, status)


# --- documents ----------------------------------------------------------------


def _item(d, keys, cls):
    try:
        return cls(d["id"], *(int(d[k]) for k in keys))
    except KeyError as exc:
        raise FormatError(f"item missing key {exc.args[0]!r}") from None


def instance_from_dict(obj):
    """Build the instance type implied by the keys present."""
    if not isinstance(obj, dict):
        raise FormatError("instance document must be an object")
    if "groups" in obj:
        groups = [[_item(d, ("profit", "weight"), Item) for d in g] for g in obj["groups"]]
        return MckpInstance(groups, int(obj.get("budget", 0)), bool(obj.get("skippable", False)))
    if "threshold" in obj:
        items = [_item(d, ("cost", "amount"), CoverItem) for d in obj.get("items", [])]
        return CoverInstance(items, int(obj["threshold"]))
    if "budget" in obj:
        items = [_item(d, ("profit", "weight"), Item) for d in obj.get("items", [])]
        prec = [tuple(p) for p in obj.get("precedence", [])]
        return KnapsackInstance(items, int(obj["budget"]), prec)
    raise FormatError("instance needs 'budget' (knapsack/mckp) or 'threshold' (cover)")


def instance_to_dict(instance) -> dict:
    if isinstance(instance, MckpInstance):
        return {
            "groups": [[{"id": i.id, "profit": i.profit, "weight": i.weight} for i in g]
                       for g in instance.groups],
            "budget": instance.budget,
            "skippable": instance.skippable,
        }
    if isinstance(instance, CoverInstance):
        return {
            "items": [{"id": i.id, "cost": i.cost, "amount": i.amount} for i in instance.items],
            "threshold": instance.threshold,
        }
    d = {
        "items": [{"id": i.id, "profit": i.profit, "weight": i.weight} for i in instance.items],
        "budget": instance.budget,
    }
    if instance.precedence:
        d["precedence"] = [list(p) for p in instance.precedence]
    return d


def load_instance(document: str):
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FormatError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    return instance_from_dict(obj)


def selection_to_dict(selection: Selection) -> dict:
    return {
        "chosen": list(selection.chosen),
        "value": selection.value,
        "weight": selection.weight,
        "status": selection.status,
    }


def selection_to_text(selection: Selection, name=str) -> str:
    if not selection.feasible:
        return "status: infeasible\n"
    return (
        f"chosen: {{{', '.join(name(i) for i in selection.chosen)}}}\n"
        f"value: {selection.value}\nweight: {selection.weight}\nstatus: {selection.status}\n"
    )


def selection_to_csv(instance, selection: Selection, name=str) -> str:
    """One row per chosen item with its value and weight columns, then a total row."""
    if isinstance(instance, MckpInstance):
        by_id = {it.id: it for g in instance.groups for it in g}
    else:
        by_id = {it.id: it for it in instance.items}
    value_attr, weight_attr = (
        ("cost", "amount") if isinstance(instance, CoverInstance) else ("profit", "weight")
    )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", value_attr, weight_attr])
    for i in selection.chosen:
        it = by_id[i]
        w.writerow([name(i), getattr(it, value_attr), getattr(it, weight_attr)])
    w.writerow(["total", selection.value, selection.weight])
    return buf.getvalue()
