"""Morphological (and-or) tree model for system generations.

A generation is a tree whose composite nodes decompose into parts and whose
leaves carry one or more design alternatives (DAs).  Labels may carry prime
suffixes (``A'``, ``C''``) to mark a subsystem that evolved; the label with
primes removed is the node's identity across generations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator

from .errors import FormatError, InvariantError

COMPOSITE = "composite"
LEAF = "leaf"

_DA_ID = re.compile(r"^(?P<base>[A-Za-z_]+)(?P<index>\d+)$")

GENERATION_IDS = ("S1", "S2", "S3", "S4")


def strip_primes(label: str) -> str:
    """Return the base label, e.g. ``C''`` -> ``C``."""
    return label.rstrip("'")


def split_alternative_id(da_id: str) -> tuple[str, int]:
    """Split ``"B2"`` into ``("B", 2)``; raise InvariantError if malformed."""
    m = _DA_ID.match(da_id)
    if m is None:
        raise InvariantError(f"design alternative id {da_id!r} is not <label><index>")
    return m.group("base"), int(m.group("index"))


def is_alternative_id(token: str) -> bool:
    return _DA_ID.match(token) is not None


@dataclass(frozen=True)
class DesignAlternative:
    id: str
    description: str = ""

    @property
    def base(self) -> str:
        return split_alternative_id(self.id)[0]

    @property
    def index(self) -> int:
        return split_alternative_id(self.id)[1]


@dataclass(frozen=True, eq=False)
class Node:
    """A tree node; composite nodes own children, leaves own alternatives.

    Equality ignores the order of children and alternatives.
    """

    label: str
    title: str = ""
    kind: str = COMPOSITE
    children: tuple[Node, ...] = ()
    alternatives: tuple[DesignAlternative, ...] = ()

    def __post_init__(self):
        if self.kind not in (COMPOSITE, LEAF):
            raise InvariantError(f"node {self.label!r}: unknown kind {self.kind!r}")
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "alternatives", tuple(self.alternatives))

    @property
    def base(self) -> str:
        return strip_primes(self.label)

    @property
    def is_leaf(self) -> bool:
        return self.kind == LEAF

    def alternative_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.alternatives)

    def _key(self):
        return (
            self.label,
            self.title,
            self.kind,
            frozenset(c._key() for c in self.children),
            frozenset(self.alternatives),
        )

    def __eq__(self, other):
        if not isinstance(other, Node):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def composite(label: str, title: str, children) -> Node:
    return Node(label, title, COMPOSITE, tuple(children), ())


def leaf(label: str, title: str, alternatives) -> Node:
    alts = tuple(
        a if isinstance(a, DesignAlternative) else DesignAlternative(*a)
        for a in alternatives
    )
    return Node(label, title, LEAF, (), alts)


@dataclass(frozen=True)
class SystemModel:
    id: str
    name: str
    root: Node = field(compare=True)

    def nodes(self) -> Iterator[tuple[tuple[str, ...], Node]]:
        """Yield ``(base-label path, node)`` depth-first; the root has path ``()``."""
        yield from _walk(self.root, ())

    def leaves(self) -> list[tuple[tuple[str, ...], Node]]:
        return [(p, n) for p, n in self.nodes() if n.is_leaf]

    def find(self, base_label: str) -> Node | None:
        for path, node in self.nodes():
            if path and path[-1] == base_label:
                return node
        return None

    def path_of(self, base_label: str) -> tuple[str, ...] | None:
        for path, _ in self.nodes():
            if path and path[-1] == base_label:
                return path
        return None


def _walk(node, path):
    yield path, node
    for child in node.children:
        yield from _walk(child, path + (child.base,))


def validate_system(system: SystemModel) -> SystemModel:
    """Check every SystemModel invariant; return the system unchanged."""
    root = system.root
    if root.kind != COMPOSITE:
        raise InvariantError("root must be a composite node")
    seen: dict[str, str] = {}
    for path, node in system.nodes():
        where = "/".join(path) or "<root>"
        if node.kind == COMPOSITE:
            if not node.children:
                raise InvariantError(f"composite node {where!r} has no children")
            if node.alternatives:
                raise InvariantError(f"composite node {where!r} holds alternatives")
        else:
            if node.children:
                raise InvariantError(f"leaf {where!r} has children")
            if not node.alternatives:
                raise InvariantError(f"leaf {where!r} has no design alternatives")
            ids = set()
            for alt in node.alternatives:
                base, index = split_alternative_id(alt.id)
                if base != node.base:
                    raise InvariantError(
                        f"alternative {alt.id!r} does not belong to leaf {node.label!r}"
                    )
                if index < 1:
                    raise InvariantError(f"alternative {alt.id!r} has index < 1")
                if alt.id in ids:
                    raise InvariantError(f"duplicate alternative {alt.id!r} in {where!r}")
                ids.add(alt.id)
        if node.base in seen:
            raise InvariantError(
                f"duplicate label {node.base!r} ({seen[node.base]!r} and {node.label!r})"
            )
        seen[node.base] = node.label
    return system


def leaf_map(system: SystemModel) -> dict[str, frozenset[str]]:
    """Map each leaf's base label to the set of its DA ids."""
    return {n.base: frozenset(n.alternative_ids()) for _, n in system.leaves()}


def all_alternative_ids(system: SystemModel) -> frozenset[str]:
    return frozenset(a for ids in leaf_map(system).values() for a in ids)


def outline(system_or_node, base: bool = False) -> dict:
    """Nested-dict view: composite -> {label: ...}, leaf -> frozenset of DA ids.

    With ``base=True`` labels are reduced to base labels.  Dict equality makes
    the outline order-insensitive, which is what figure comparisons need.
    """
    node = system_or_node.root if isinstance(system_or_node, SystemModel) else system_or_node
    out = {}
    for child in node.children:
        key = child.base if base else child.label
        if child.is_leaf:
            out[key] = frozenset(child.alternative_ids())
        else:
            out[key] = outline(child, base=base)
    return out


# --- serialization -----------------------------------------------------------


def _node_to_dict(node: Node) -> dict:
    d = {"label": node.label, "title": node.title}
    if node.is_leaf:
        d["alternatives"] = [
            {"id": a.id, "description": a.description} for a in node.alternatives
        ]
    else:
        d["children"] = [_node_to_dict(c) for c in node.children]
    return d


def system_to_dict(system: SystemModel) -> dict:
    return {"id": system.id, "name": system.name, "root": _node_to_dict(system.root)}


def serialize_system(system: SystemModel) -> str:
    """Canonical document: two-space indent, fixed key order, stored array order."""
    return json.dumps(system_to_dict(system), indent=2, ensure_ascii=False) + "\n"


def _expect(obj, key, typ, where):
    if key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, typ):
        raise FormatError(f"{where}: {key!r} must be {typ.__name__}")
    return value


def _node_from_dict(obj, where) -> Node:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: node must be an object")
    extra = set(obj) - {"label", "title", "children", "alternatives"}
    if extra:
        raise FormatError(f"{where}: unknown keys {sorted(extra)}")
    label = _expect(obj, "label", str, where)
    title = obj.get("title", "")
    if not isinstance(title, str):
        raise FormatError(f"{where}: 'title' must be str")
    here = f"{where}/{label}"
    has_children = "children" in obj
    has_alts = "alternatives" in obj
    if has_children == has_alts:
        raise FormatError(f"{here}: node needs exactly one of 'children' or 'alternatives'")
    if has_children:
        children = _expect(obj, "children", list, here)
        return composite(label, title, [_node_from_dict(c, here) for c in children])
    alts = []
    for a in _expect(obj, "alternatives", list, here):
        if not isinstance(a, dict):
            raise FormatError(f"{here}: alternative must be an object")
        alts.append(DesignAlternative(_expect(a, "id", str, here), a.get("description", "")))
    return leaf(label, title, alts)


def system_from_dict(obj) -> SystemModel:
    if not isinstance(obj, dict):
        raise FormatError("system document must be a JSON object")
    system = SystemModel(
        _expect(obj, "id", str, "system"),
        _expect(obj, "name", str, "system"),
        _node_from_dict(_expect(obj, "root", dict, "system"), ""),
    )
    return validate_system(system)


def parse_system(document: str) -> SystemModel:
    """Parse a system document and validate it.

    Raises
    ------
    FormatError
        Malformed JSON (with line and column) or a wrong document shape.
    InvariantError
        The tree parses but breaks a model invariant.
    """
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FormatError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    return system_from_dict(obj)


def load_system(path) -> SystemModel:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# --- rendering ----------------------------------------------------------------


def _render_text(system: SystemModel) -> str:
    lines = [f"{system.id}: {system.name}"]

    def visit(node, depth):
        for child in node.children:
            pad = "  " * depth
            if child.is_leaf:
                lines.append(f"{pad}{child.label}: {', '.join(child.alternative_ids())}")
            else:
                lines.append(f"{pad}{child.label}")
                visit(child, depth + 1)

    visit(system.root, 1)
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _render_dot(system: SystemModel) -> str:
    lines = [f"digraph {_dot_quote(system.id)} {{", "  node [shape=box];"]
    ids = {}
    for path, node in system.nodes():
        nid = "n_" + "_".join(path) if path else "root"
        ids[path] = nid
        if node is system.root:
            text = f"{system.id}\\n{system.name}"
        elif node.is_leaf:
            text = f"{node.label}\\n{', '.join(node.alternative_ids())}"
        else:
            text = node.label
        lines.append(f"  {nid} [label={_dot_quote(text)}];")
    for path, _ in system.nodes():
        if path:
            lines.append(f"  {ids[path[:-1]]} -> {ids[path]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


RENDER_FORMATS = {"text": _render_text, "dot": _render_dot, "graph-description": _render_dot}


def render_tree(system: SystemModel, format: str = "text") -> str:
    """Render as indented text or as a DOT digraph (``dot``/``graph-description``)."""
    try:
        renderer = RENDER_FORMATS[format]
    except KeyError:
        raise ValueError(
            f"unsupported format {format!r}; choose from {sorted(RENDER_FORMATS)}"
        ) from None
    return renderer(system)


# --- bundled generations --------------------------------------------------------


def _data_text(name: str) -> str:
    return resources.files("morphcast").joinpath("data", name).read_text(encoding="utf-8")


def builtin_generations() -> list[SystemModel]:
    """Return the ZigBee lineage [S1, S2, S3, S4], S4 being the expert forecast."""
    return [parse_system(_data_text(f"{gid.lower()}.json")) for gid in GENERATION_IDS]


def builtin_generation(gid: str) -> SystemModel:
    key = gid.strip().upper().replace("~", "")
    if key not in GENERATION_IDS:
        raise KeyError(f"unknown generation {gid!r}; choose from {', '.join(GENERATION_IDS)}")
    return parse_system(_data_text(f"{key.lower()}.json"))
