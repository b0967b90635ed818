"""Forecasts: named operation sets, how to compute them, how to apply them.

A forecast is a set of improvement operations.  Its totals always come from
the catalog.  :func:`apply_operations` turns a forecast into a tree: by
default only the parts the selected edit scripts contribute, merged under
their shared parents; with ``overlay=True``, the complete base tree patched by
those edits.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .catalog import Catalog, op_name
from .errors import EditResolutionError, UnknownOperationError
from .model import (
    COMPOSITE,
    DesignAlternative,
    Node,
    SystemModel,
    builtin_generations,
    split_alternative_id,
)
from .solve import Item, KnapsackInstance, MckpInstance, solve

ORIGINS = ("expert", "knapsack", "mckp", "aggregated")


@dataclass(frozen=True)
class Forecast:
    """A named operation set with catalog-derived totals.

    Build instances through :meth:`from_catalog` so ``profit`` and
    ``resource`` always match the catalog.
    """

    id: str
    label: str
    operations: frozenset[int]
    origin: str
    profit: int
    resource: int

    @classmethod
    def from_catalog(cls, catalog: Catalog, operations, origin: str,
                     id: str | None = None, label: str | None = None) -> Forecast:
        if origin not in ORIGINS:
            raise ValueError(f"unknown origin {origin!r}; choose from {ORIGINS}")
        ops = frozenset(operations)
        unknown = sorted(i for i in ops if i not in catalog)
        if unknown:
            raise UnknownOperationError(
                "unknown operation(s): " + ", ".join(op_name(i) for i in unknown)
            )
        return cls(
            id=id or origin,
            label=label or id or origin,
            operations=ops,
            origin=origin,
            profit=sum(catalog.profit(i) for i in ops),
            resource=sum(catalog.resource(i) for i in ops),
        )

    @property
    def totals(self) -> tuple[int, int]:
        return self.profit, self.resource

    def sorted_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.operations))

    def names(self) -> str:
        return ", ".join(op_name(i) for i in self.sorted_ids())


def expert_forecast(ids, catalog: Catalog, label: str = "Φ̃") -> Forecast:
    """Forecast from an expert-given operation set; unknown ids raise."""
    return Forecast.from_catalog(catalog, ids, "expert", id="expert", label=label)


def _items(catalog, ids):
    return [Item(i, catalog.profit(i), catalog.resource(i)) for i in sorted(ids)]


def knapsack_instance(catalog: Catalog, budget: int,
                      enforce_precedence: bool = False) -> KnapsackInstance:
    """All catalog operations as knapsack items (profit c, weight a)."""
    prec = catalog.precedence_pairs() if enforce_precedence else ()
    return KnapsackInstance(_items(catalog, catalog.ids()), budget, prec)


def mckp_instance(catalog: Catalog, partition, budget: int,
                  skippable: bool = False) -> MckpInstance:
    """One MCKP group per partition cluster; the partition must cover the catalog."""
    groups = [sorted(g) for g in getattr(partition, "clusters", partition)]
    covered = [i for g in groups for i in g]
    if sorted(covered) != sorted(catalog.ids()):
        raise ValueError("partition must cover every catalog operation exactly once")
    return MckpInstance([_items(catalog, g) for g in groups], budget, skippable)


def compute_forecast(catalog: Catalog, method: str = "knapsack", budget: int = 16,
                     partition=None, mode: str = "exact",
                     enforce_precedence: bool = False, skippable: bool = False) -> Forecast:
    """Select operations with a knapsack-family solver.

    Parameters
    ----------
    catalog : Catalog
        Operations with profits ``c`` and resources ``a``.
    method : {"knapsack", "mckp"}
        Plain 0/1 knapsack, or multiple choice over ``partition``.
    budget : int
        Resource limit ``b``.
    partition : Partition or iterable of id sets, optional
        Groups for ``mckp``; must cover every catalog operation exactly once.
    mode : {"exact", "greedy", "bruteforce"}
        Solver mode.
    enforce_precedence : bool
        Knapsack only: honour the catalog's precedence relations.
    skippable : bool
        MCKP only: allow a group to contribute nothing.

    Returns
    -------
    Forecast
        ``origin`` is the method name.  An infeasible MCKP yields an empty
        forecast.
    """
    if method == "knapsack":
        inst = knapsack_instance(catalog, budget, enforce_precedence)
        sel = solve(inst, mode)
        return Forecast.from_catalog(catalog, sel.chosen, "knapsack", id="knapsack", label="Φ̂")
    if method == "mckp":
        if partition is None:
            raise ValueError("mckp needs a partition of the catalog")
        sel = solve(mckp_instance(catalog, partition, budget, skippable), mode)
        return Forecast.from_catalog(catalog, sel.chosen, "mckp", id="mckp", label="Φ̄")
    raise ValueError(f"unknown method {method!r}; choose 'knapsack' or 'mckp'")


# --- structure application ---------------------------------------------------------


class _Draft:
    """Mutable tree used while materializing; frozen into Nodes at the end."""

    def __init__(self, label, title, kind, alternatives=None):
        self.label = label
        self.title = title
        self.kind = kind
        self.children: dict[str, _Draft] = {}
        self.alternatives: dict[str, str] = dict(alternatives or {})
        self.contributed = False

    @classmethod
    def copy_of(cls, node: Node) -> _Draft:
        d = cls(node.label, node.title, node.kind,
                {a.id: a.description for a in node.alternatives})
        for child in node.children:
            d.children[child.base] = cls.copy_of(child)
        return d

    def freeze(self) -> Node | None:
        if self.kind == COMPOSITE:
            kids = [self.children[k].freeze() for k in sorted(self.children)]
            kids = [k for k in kids if k is not None]
            return Node(self.label, self.title, COMPOSITE, tuple(kids))
        if not self.alternatives:
            return None
        alts = tuple(DesignAlternative(i, self.alternatives[i])
                     for i in sorted(self.alternatives, key=_da_key))
        return Node(self.label, self.title, self.kind, (), alts)


def _da_key(da_id):
    return split_alternative_id(da_id)


def default_lexicon() -> dict[str, str]:
    """Titles of leaves and descriptions of DAs across the bundled generations."""
    lex: dict[str, str] = {}
    for system in builtin_generations():
        for path, node in system.nodes():
            if path:
                lex[node.base] = node.title
            for alt in node.alternatives:
                lex[alt.id] = alt.description
    return lex


def _base_index(base: SystemModel):
    return {path: node for path, node in base.nodes()}


def _ensure_path(draft, index, path, op):
    """Walk ``path`` from the draft root, creating composites copied from the base."""
    node = draft
    for depth in range(1, len(path) + 1):
        key = path[depth - 1]
        child = node.children.get(key)
        if child is None:
            src = index.get(path[:depth])
            if src is None:
                raise EditResolutionError(
                    f"{op_name(op)}: target {'/'.join(path)!r} is not in the base tree"
                )
            child = _Draft(src.label, src.title, COMPOSITE)
            node.children[key] = child
        elif child.kind != COMPOSITE:
            if child.contributed:
                raise EditResolutionError(
                    f"{op_name(op)}: {'/'.join(path[:depth])!r} receives both parts and alternatives"
                )
            # a base leaf grows parts; its own alternatives leave with the promotion
            child.kind = COMPOSITE
            child.alternatives.clear()
        node = child
    return node


def _ensure_leaf(parent, index, path, lexicon):
    key = path[-1]
    node = parent.children.get(key)
    if node is None:
        src = index.get(path)
        if src is not None:
            node = _Draft(src.label, src.title, "leaf")
        else:
            node = _Draft(key, lexicon.get(key, ""), "leaf")
        parent.children[key] = node
    elif node.kind == COMPOSITE:
        raise EditResolutionError(f"{'/'.join(path)!r} is a composite, not a leaf")
    return node


def _contribute(draft, index, op, edit, lexicon):
    if edit.action in ("ReplaceAlternative", "AddAlternative"):
        parent_path, leaf_path = edit.target[:-1], edit.target
        if leaf_path not in index and _lookup(draft, leaf_path) is None:
            raise EditResolutionError(
                f"{op_name(op)}: leaf {'/'.join(leaf_path)!r} is not in the base tree"
            )
    else:
        parent_path, leaf_path = edit.target, edit.target + (edit.leaf,)
    parent = _ensure_path(draft, index, parent_path, op)
    node = _ensure_leaf(parent, index, leaf_path, lexicon)
    node.contributed = True
    src = index.get(leaf_path)
    known = {a.id: a.description for a in src.alternatives} if src is not None else {}
    for da in edit.alternatives:
        node.alternatives[da] = known.get(da, lexicon.get(da, ""))


def _remove(draft, edit):
    if edit.action == "ReplaceAlternative":
        node = _lookup(draft, edit.target)
        if node is not None:
            node.alternatives.pop(edit.replaces, None)
    elif edit.action == "ReplaceLeaf":
        node = _lookup(draft, edit.target)
        if node is not None:
            node.children.pop(edit.replaces, None)


def _lookup(draft, path):
    node = draft
    for key in path:
        node = node.children.get(key)
        if node is None:
            return None
    return node


def apply_operations(base: SystemModel, forecast: Forecast, catalog: Catalog,
                     overlay: bool = False, lexicon: dict | None = None) -> SystemModel:
    """Materialize a forecast's edit scripts as a tree.

    Each edit target is resolved by base-label path against ``base``;
    composite parents keep their labels from ``base`` (so ``C'`` stays
    ``C'``) and appear once however many edits land under them.  Children are
    ordered by base label.

    By default the result holds exactly the contributed leaves and DAs.  With
    ``overlay=True`` it is ``(base - superseded) + contributed``; removals are
    collected from every edit before any addition, so operation order never
    matters.  An empty default-mode result is a root with no children, which
    is deliberately not a valid system document.

    Raises
    ------
    EditResolutionError
        If an edit's parent path is missing from ``base``.
    """
    lexicon = default_lexicon() if lexicon is None else lexicon
    index = _base_index(base)
    edits = [(op, e) for op in forecast.sorted_ids() for e in catalog.get(op).edits]
    if overlay:
        draft = _Draft.copy_of(base.root)
        for _, e in edits:
            _remove(draft, e)
    else:
        draft = _Draft(base.root.label, base.root.title, COMPOSITE)
    for op, e in edits:
        _contribute(draft, index, op, e, lexicon)
    root = draft.freeze()
    name = forecast.label if not overlay else f"{forecast.label} over {base.id}"
    return SystemModel(forecast.id, name, root)


# --- comparison ---------------------------------------------------------------


def dominates(p: Forecast, q: Forecast) -> bool:
    """``p`` has >= profit and <= resource than ``q``, one of them strictly."""
    return (p.profit >= q.profit and p.resource <= q.resource
            and (p.profit, p.resource) != (q.profit, q.resource))


def pareto_front(forecasts) -> list[Forecast]:
    """Non-dominated forecasts (profit up, resource down), in input order."""
    forecasts = list(forecasts)
    return [f for f in forecasts if not any(dominates(g, f) for g in forecasts)]


def forecast_to_csv(forecast: Forecast, catalog: Catalog) -> str:
    """One row per operation (operation,profit,resource) and a closing total row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["operation", "profit", "resource"])
    for i in forecast.sorted_ids():
        w.writerow([op_name(i), catalog.profit(i), catalog.resource(i)])
    w.writerow(["total", forecast.profit, forecast.resource])
    return buf.getvalue()


def forecast_to_text(forecast: Forecast) -> str:
    return (
        f"{forecast.label} ({forecast.origin})\n"
        f"operations: {{{forecast.names()}}}\n"
        f"totals: profit={forecast.profit} resource={forecast.resource}\n"
    )


def comparison_csv(forecasts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "profit", "resource"])
    for f in forecasts:
        w.writerow([f.label, f.profit, f.resource])
    return buf.getvalue()


def comparison_text(forecasts) -> str:
    front = {id(f) for f in pareto_front(forecasts)}
    lines = []
    for f in forecasts:
        mark = "pareto" if id(f) in front else "dominated"
        lines.append(f"{f.label:<4} profit={f.profit:<3} resource={f.resource:<3} {mark}  {{{f.names()}}}")
    return "\n".join(lines) + "\n"


def comparison_svg(forecasts, width: int = 480, height: int = 360) -> str:
    """Standalone SVG scatter: resource on x, profit on y, one labelled dot each."""
    forecasts = list(forecasts)
    left, right, top, bottom = 60, 20, 20, 50
    xs = [f.resource for f in forecasts] or [0]
    ys = [f.profit for f in forecasts] or [0]
    x_hi = max(max(xs), 1) * 1.1
    y_hi = max(max(ys), 1) * 1.1
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + pw * x / x_hi

    def py(y):
        return top + ph - ph * y / y_hi

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">required resource</text>',
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">total profit</text>',
    ]
    for tick in _ticks(x_hi):
        out.append(f'<text x="{px(tick):.1f}" y="{top + ph + 16}" text-anchor="middle">{tick}</text>')
    for tick in _ticks(y_hi):
        out.append(f'<text x="{left - 6}" y="{py(tick) + 4:.1f}" text-anchor="end">{tick}</text>')
    for f in forecasts:
        x, y = px(f.resource), py(f.profit)
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="black"/>')
        out.append(f'<text x="{x + 7:.1f}" y="{y - 7:.1f}">{escape(f.label)} ({f.profit}, {f.resource})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ticks(hi, count=5):
    step = max(1, int(hi // count) or 1)
    return list(range(0, int(hi) + 1, step))
