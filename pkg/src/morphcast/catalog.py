"""Catalog of improvement operations with ordinal criteria estimates.

Each operation carries an edit script (how it changes a system tree), eight
ordinal estimates on a 1..5 scale, a priority rank ``r`` (1 is best), and a
resource requirement ``a``.  Knapsack profits come from the rank through a
configurable transform, ``c = max_rank - r`` by default with ``max_rank=4``.
"""

from __future__ import annotations

import csv
import graphlib
import io
import json
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

from .errors import ConfigurationError, FormatError, InvariantError
from .model import split_alternative_id

DEFAULT_MAX_RANK = 4
SCALE = (1, 5)

EDIT_ACTIONS = ("ReplaceAlternative", "AddAlternative", "AddLeaf", "AddSubsystem", "ReplaceLeaf")
RELATION_KINDS = ("equivalence", "complementarity", "precedence")


def op_name(op_id: int) -> str:
    return f"Φ{op_id}"


def parse_op_name(token) -> int:
    """Accept ``7``, ``"7"``, ``"Φ7"`` or ``"F7"``."""
    if isinstance(token, int):
        return token
    text = str(token).strip()
    for prefix in ("Φ", "Phi", "phi", "F", "f"):
        if text.startswith(prefix):
            text = text[len(prefix):]
            break
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"not an operation id: {token!r}") from None


def profit_from_priority(r: int, max_rank: int = DEFAULT_MAX_RANK) -> int:
    """Profit units for a priority rank: ``max_rank - r``.

    With the default ``max_rank=4`` this is ``c = 4 - r``.  Ranks outside
    ``[1, max_rank]`` raise ConfigurationError, since the transform is tied
    to the rank range of one instance.
    """
    if not 1 <= r <= max_rank:
        raise ConfigurationError(f"priority {r} outside [1, {max_rank}] for the profit transform")
    return max_rank - r


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str


DEFAULT_CRITERIA = (
    Criterion("Υ1", "cost"),
    Criterion("Υ2", "required time for implementation"),
    Criterion("Υ3", "performance"),
    Criterion("Υ4", "decreasing a cost of maintenance"),
    Criterion("Υ5", "scalability"),
    Criterion("Υ6", "reliability"),
    Criterion("Υ7", "mobility"),
    Criterion("Υ8", "usability value"),
)


@dataclass(frozen=True)
class EditAction:
    """One structural edit.

    ``target`` is a base-label path: the leaf for ReplaceAlternative and
    AddAlternative, the parent composite for AddLeaf and ReplaceLeaf, and the
    root (empty path) for AddSubsystem.  ``replaces`` names the DA id or leaf
    label that a Replace* action supersedes.
    """

    action: str
    target: tuple[str, ...]
    alternatives: tuple[str, ...]
    leaf: str | None = None
    replaces: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if self.action not in EDIT_ACTIONS:
            raise InvariantError(f"unknown edit action {self.action!r}")
        if not self.alternatives:
            raise InvariantError(f"{self.action} carries no design alternatives")
        if self.action in ("ReplaceAlternative", "AddAlternative"):
            if not self.target:
                raise InvariantError(f"{self.action} needs a leaf target")
            owner = self.target[-1]
        else:
            if self.leaf is None:
                raise InvariantError(f"{self.action} needs a leaf label")
            owner = self.leaf
        for da in self.alternatives:
            if split_alternative_id(da)[0] != owner:
                raise InvariantError(f"{self.action}: {da!r} does not belong to leaf {owner!r}")
        if self.action in ("ReplaceAlternative", "ReplaceLeaf") and self.replaces is None:
            raise InvariantError(f"{self.action} needs 'replaces'")

    @property
    def leaf_label(self) -> str:
        """Base label of the leaf this action contributes to."""
        return self.leaf if self.leaf is not None else self.target[-1]


@dataclass(frozen=True)
class Relation:
    """A link to another operation; for precedence, ``other`` must come first."""

    kind: str
    other: int

    def __post_init__(self):
        if self.kind not in RELATION_KINDS:
            raise InvariantError(f"unknown relation kind {self.kind!r}")


@dataclass(frozen=True)
class ImprovementOperation:
    id: int
    summary: str
    edits: tuple[EditAction, ...]
    estimates: tuple[int, ...]
    priority: int
    resource: int
    relations: tuple[Relation, ...] = ()
    profit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "edits", tuple(self.edits))
        object.__setattr__(self, "estimates", tuple(int(v) for v in self.estimates))
        object.__setattr__(self, "relations", tuple(self.relations))
        lo, hi = SCALE
        for v in self.estimates:
            if not lo <= v <= hi:
                raise InvariantError(f"{op_name(self.id)}: estimate {v} outside scale [{lo},{hi}]")
        if self.priority < 1:
            raise InvariantError(f"{op_name(self.id)}: priority must be >= 1")
        if self.resource < 1:
            raise InvariantError(f"{op_name(self.id)}: resource must be >= 1")

    @property
    def name(self) -> str:
        return op_name(self.id)


@dataclass(frozen=True)
class Catalog:
    operations: tuple[ImprovementOperation, ...]
    criteria: tuple[Criterion, ...] = DEFAULT_CRITERIA
    max_rank: int = DEFAULT_MAX_RANK
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(sorted(self.operations, key=lambda o: o.id))
        object.__setattr__(self, "operations", ops)
        object.__setattr__(self, "criteria", tuple(self.criteria))
        by_id = {}
        for op in ops:
            if op.id in by_id:
                raise InvariantError(f"duplicate operation id {op.name}")
            if len(op.estimates) != len(self.criteria):
                raise InvariantError(
                    f"{op.name}: {len(op.estimates)} estimates for {len(self.criteria)} criteria"
                )
            by_id[op.id] = op
        object.__setattr__(self, "_by_id", by_id)
        for op in ops:
            for rel in op.relations:
                if rel.other not in by_id:
                    raise InvariantError(f"{op.name}: relation to unknown {op_name(rel.other)}")
        _check_precedence_acyclic(ops)
        for op in ops:
            self.profit(op.id)

    def __len__(self):
        return len(self.operations)

    def __iter__(self):
        return iter(self.operations)

    def __contains__(self, op_id):
        return op_id in self._by_id

    def ids(self) -> tuple[int, ...]:
        return tuple(self._by_id)

    def get(self, op_id: int) -> ImprovementOperation:
        try:
            return self._by_id[op_id]
        except KeyError:
            raise KeyError(f"unknown operation {op_name(op_id)}") from None

    def profit(self, op_id: int) -> int:
        op = self.get(op_id)
        if op.profit is not None:
            return op.profit
        return profit_from_priority(op.priority, self.max_rank)

    def resource(self, op_id: int) -> int:
        return self.get(op_id).resource

    def estimates(self, op_id: int) -> tuple[int, ...]:
        return self.get(op_id).estimates

    def estimates_matrix(self) -> np.ndarray:
        return np.array([op.estimates for op in self.operations], dtype=int)

    def precedence_pairs(self) -> list[tuple[int, int]]:
        """``(predecessor, successor)`` pairs from precedence relations."""
        return sorted(
            (rel.other, op.id)
            for op in self.operations
            for rel in op.relations
            if rel.kind == "precedence"
        )

    def with_max_rank(self, max_rank: int) -> Catalog:
        return replace(self, max_rank=max_rank)


def _check_precedence_acyclic(ops):
    sorter = graphlib.TopologicalSorter()
    for op in ops:
        sorter.add(op.id)
        for rel in op.relations:
            if rel.kind == "precedence":
                sorter.add(op.id, rel.other)
    try:
        sorter.prepare()
    except graphlib.CycleError as exc:
        cycle = " -> ".join(op_name(i) for i in exc.args[1])
        raise InvariantError(f"cyclic precedence: {cycle}") from None


# --- documents ----------------------------------------------------------------


def _edit_to_dict(e: EditAction) -> dict:
    d = {"action": e.action, "target": list(e.target)}
    if e.leaf is not None:
        d["leaf"] = e.leaf
    if e.replaces is not None:
        d["replaces"] = e.replaces
    d["alternatives"] = list(e.alternatives)
    return d


def catalog_to_dict(catalog: Catalog) -> dict:
    ops = []
    for op in catalog.operations:
        d = {
            "id": op.id,
            "summary": op.summary,
            "edits": [_edit_to_dict(e) for e in op.edits],
            "estimates": list(op.estimates),
            "priority": op.priority,
            "resource": op.resource,
            "relations": [{"kind": r.kind, "other": r.other} for r in op.relations],
        }
        if op.profit is not None:
            d["profit"] = op.profit
        ops.append(d)
    return {
        "criteria": [{"id": c.id, "name": c.name} for c in catalog.criteria],
        "scale": list(SCALE),
        "max_rank": catalog.max_rank,
        "operations": ops,
    }


def serialize_catalog(catalog: Catalog) -> str:
    return json.dumps(catalog_to_dict(catalog), indent=2, ensure_ascii=False) + "\n"


def catalog_from_dict(obj) -> Catalog:
    if not isinstance(obj, dict) or "operations" not in obj:
        raise FormatError("catalog document must be an object with 'operations'")
    scale = obj.get("scale", list(SCALE))
    if list(scale) != list(SCALE):
        raise InvariantError(f"only the ordinal scale {list(SCALE)} is supported, got {scale}")
    criteria = tuple(
        Criterion(c["id"], c.get("name", "")) for c in obj.get("criteria", [])
    ) or DEFAULT_CRITERIA
    ops = []
    for raw in obj["operations"]:
        try:
            ops.append(ImprovementOperation(
                id=parse_op_name(raw["id"]),
                summary=raw.get("summary", ""),
                edits=tuple(
                    EditAction(
                        e["action"], tuple(e.get("target", ())), tuple(e["alternatives"]),
                        e.get("leaf"), e.get("replaces"),
                    )
                    for e in raw.get("edits", ())
                ),
                estimates=tuple(raw["estimates"]),
                priority=int(raw["priority"]),
                resource=int(raw["resource"]),
                relations=tuple(
                    Relation(r["kind"], parse_op_name(r["other"])) for r in raw.get("relations", ())
                ),
                profit=raw.get("profit"),
            ))
        except KeyError as exc:
            raise FormatError(f"operation entry missing key {exc.args[0]!r}") from None
    return Catalog(tuple(ops), criteria, int(obj.get("max_rank", DEFAULT_MAX_RANK)))


def load_catalog(document: str) -> Catalog:
    """Parse a catalog document (JSON) and validate every operation."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FormatError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    return catalog_from_dict(obj)


def load_estimates_csv(text: str, max_rank: int = DEFAULT_MAX_RANK) -> Catalog:
    """Build a catalog from a CSV estimates matrix.

    Header: optional ``id`` column, the criterion ids (``Υ1``.. or ``Y1``..),
    then ``priority`` and ``resource``.  Rows without an id are numbered 1..n.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise FormatError("empty estimates CSV")
    header = [h.strip() for h in rows[0]]
    has_id = bool(header) and header[0].lower() == "id"
    body = header[1:] if has_id else header
    if len(body) < 3 or body[-2].lower() != "priority" or body[-1].lower() != "resource":
        raise FormatError("CSV header must end with 'priority,resource'")
    crit_ids = body[:-2]
    criteria = tuple(
        Criterion("Υ" + c[1:] if c[:1] in ("Y", "y") else c, "") for c in crit_ids
    )
    named = {c.id: c for c in DEFAULT_CRITERIA}
    criteria = tuple(named.get(c.id, c) for c in criteria)
    ops = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError(f"row has {len(row)} cells, header has {len(header)}", lineno, 1)
        cells = [c.strip() for c in row]
        op_id = parse_op_name(cells[0]) if has_id else lineno - 1
        values = cells[1:] if has_id else cells
        try:
            nums = [int(v) for v in values]
        except ValueError:
            raise FormatError("non-integer cell", lineno, 1) from None
        ops.append(ImprovementOperation(op_id, "", (), tuple(nums[:-2]), nums[-2], nums[-1]))
    return Catalog(tuple(ops), criteria, max_rank)


def catalog_to_csv(catalog: Catalog) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *(c.id for c in catalog.criteria), "priority", "resource"])
    for op in catalog.operations:
        w.writerow([op.name, *op.estimates, op.priority, op.resource])
    return buf.getvalue()


def builtin_catalog() -> Catalog:
    """The 17 ZigBee improvement operations with their expert estimates."""
    text = resources.files("morphcast").joinpath("data", "catalog.json").read_text(encoding="utf-8")
    return load_catalog(text)
