"""Typed change records between two system generations.

Nodes are matched by base label, so ``A`` in one generation and ``A'`` in the
next are the same subsystem.  Descriptions never take part in matching.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

from .errors import InvariantError
from .model import Node, SystemModel, is_alternative_id, split_alternative_id


class ChangeKind(enum.Enum):
    ELEMENT_CHANGE = "ElementChange"
    ELEMENT_ADDITION = "ElementAddition"
    SUBSYSTEM_ADDITION = "SubsystemAddition"
    SUBSYSTEM_EXTENSION = "SubsystemExtension"
    SUBSYSTEM_CHANGE = "SubsystemChange"
    LEAF_REMOVAL = "LeafRemoval"

    @property
    def order(self) -> int:
        return list(ChangeKind).index(self)


TYPE_CODES = {
    ChangeKind.ELEMENT_CHANGE: "O1",
    ChangeKind.ELEMENT_ADDITION: "O3",
    ChangeKind.SUBSYSTEM_EXTENSION: "O5",
    ChangeKind.SUBSYSTEM_CHANGE: "O5",
    ChangeKind.SUBSYSTEM_ADDITION: "O7",
}


@dataclass(frozen=True)
class ChangeRecord:
    """One structural difference.

    ``path`` is the base-label path of the affected node (leaf for element
    changes, the new leaf for subsystem records).  ``before``/``after`` hold
    a DA id or a leaf label; the ``*_alternatives`` tuples list the DA ids
    that travel with a removed or added leaf.
    """

    kind: ChangeKind
    path: tuple[str, ...]
    before: str | None = None
    after: str | None = None
    before_alternatives: tuple[str, ...] = ()
    after_alternatives: tuple[str, ...] = ()

    @property
    def type_code(self) -> str | None:
        return TYPE_CODES.get(self.kind)

    def alternatives_mentioned(self) -> frozenset[str]:
        tokens = [self.before, self.after, *self.before_alternatives, *self.after_alternatives]
        return frozenset(t for t in tokens if t is not None and is_alternative_id(t))

    def sort_key(self):
        return (self.path, self.kind.order, self.before or "", self.after or "")

    def describe_before(self) -> str:
        return _describe(self.before, self.before_alternatives)

    def describe_after(self) -> str:
        return _describe(self.after, self.after_alternatives)


def _describe(token, alts):
    if token is None:
        return ""
    if alts:
        return f"{token}{{{','.join(alts)}}}"
    return token


def classify_change(record: ChangeRecord) -> str:
    """Operation type code (O1/O3/O5/O7) for a record; removals have none."""
    if record.kind is ChangeKind.LEAF_REMOVAL:
        raise InvariantError("LeafRemoval records carry no operation type code")
    return TYPE_CODES[record.kind]


def _leaves_under(node: Node, path):
    if node.is_leaf:
        yield path, node
        return
    for child in node.children:
        yield from _leaves_under(child, path + (child.base,))


def _diff_alternatives(path, old_ids, new_ids, out):
    removed = sorted(set(old_ids) - set(new_ids), key=_da_sort)
    added = sorted(set(new_ids) - set(old_ids), key=_da_sort)
    for before, after in zip(removed, added):
        out.append(ChangeRecord(ChangeKind.ELEMENT_CHANGE, path, before, after))
    for after in added[len(removed):]:
        out.append(ChangeRecord(ChangeKind.ELEMENT_ADDITION, path, after=after))
    for before in removed[len(added):]:
        out.append(ChangeRecord(ChangeKind.LEAF_REMOVAL, path, before=before))


def _da_sort(da_id):
    return split_alternative_id(da_id)


def _removal(path, node):
    return ChangeRecord(
        ChangeKind.LEAF_REMOVAL, path, before=node.base,
        before_alternatives=node.alternative_ids(),
    )


def _diff_nodes(old: Node, new: Node, path, at_root, out):
    if old.is_leaf and new.is_leaf:
        _diff_alternatives(path, old.alternative_ids(), new.alternative_ids(), out)
        return
    if old.is_leaf:
        # promotion: the leaf became a composite
        for lpath, lf in _leaves_under(new, path):
            out.append(ChangeRecord(
                ChangeKind.SUBSYSTEM_EXTENSION, lpath, after=lf.base,
                after_alternatives=lf.alternative_ids(),
            ))
        for da in old.alternative_ids():
            out.append(ChangeRecord(ChangeKind.LEAF_REMOVAL, path, before=da))
        return
    if new.is_leaf:
        # demotion: the composite collapsed into a leaf
        for lpath, lf in _leaves_under(old, path):
            out.append(_removal(lpath, lf))
        for da in new.alternative_ids():
            out.append(ChangeRecord(ChangeKind.ELEMENT_ADDITION, path, after=da))
        return

    old_children = {c.base: c for c in old.children}
    new_children = {c.base: c for c in new.children}
    for base in sorted(old_children.keys() & new_children.keys()):
        _diff_nodes(old_children[base], new_children[base], path + (base,), False, out)

    removed = [
        lf for base in sorted(old_children.keys() - new_children.keys())
        for lf in _leaves_under(old_children[base], path + (base,))
    ]
    added = [
        lf for base in sorted(new_children.keys() - old_children.keys())
        for lf in _leaves_under(new_children[base], path + (base,))
    ]
    if at_root:
        for lpath, lf in added:
            out.append(ChangeRecord(
                ChangeKind.SUBSYSTEM_ADDITION, lpath, after=lf.base,
                after_alternatives=lf.alternative_ids(),
            ))
        for lpath, lf in removed:
            out.append(_removal(lpath, lf))
        return

    kind = ChangeKind.SUBSYSTEM_CHANGE if removed else ChangeKind.SUBSYSTEM_EXTENSION
    for i, (lpath, lf) in enumerate(added):
        before, before_alts = None, ()
        if kind is ChangeKind.SUBSYSTEM_CHANGE and i < len(removed):
            before = removed[i][1].base
            before_alts = removed[i][1].alternative_ids()
        out.append(ChangeRecord(
            kind, lpath, before=before, after=lf.base,
            before_alternatives=before_alts, after_alternatives=lf.alternative_ids(),
        ))
    paired = len(added) if kind is ChangeKind.SUBSYSTEM_CHANGE else 0
    for lpath, lf in removed[paired:]:
        out.append(_removal(lpath, lf))


def diff_generations(old: SystemModel, new: SystemModel) -> list[ChangeRecord]:
    """Change records turning ``old`` into ``new``, sorted by (path, kind)."""
    out: list[ChangeRecord] = []
    _diff_nodes(old.root, new.root, (), True, out)
    return sorted(out, key=ChangeRecord.sort_key)


def replay_changes(old: SystemModel, records) -> dict:
    """Apply records to the base-label outline of ``old``.

    Returns the outline (see :func:`morphcast.model.outline` with
    ``base=True``) that the records describe.  Used to check that a diff
    reconstructs its target.
    """
    from .model import outline

    tree = _thaw(outline(old, base=True))
    for rec in records:
        parent_path, name = rec.path[:-1], rec.path[-1]
        if rec.kind in (ChangeKind.ELEMENT_CHANGE, ChangeKind.ELEMENT_ADDITION):
            parent = _ensure(tree, parent_path)
            alts = parent.get(name)
            if not isinstance(alts, set):
                alts = set()
            if rec.before:
                alts.discard(rec.before)
            alts.add(rec.after)
            parent[name] = alts
        elif rec.kind is ChangeKind.LEAF_REMOVAL:
            parent = _find(tree, parent_path)
            if parent is None:
                # the parent itself was replaced (e.g. demoted to a leaf)
                continue
            if rec.before_alternatives:
                parent.pop(name, None)
            else:
                alts = parent.get(name)
                if isinstance(alts, set):
                    alts.discard(rec.before)
                    if not alts:
                        # promoted leaf: placeholder until its new children arrive
                        parent[name] = {}
        else:
            parent = _ensure(tree, parent_path)
            if rec.kind is ChangeKind.SUBSYSTEM_CHANGE and rec.before:
                parent.pop(rec.before, None)
            parent[name] = set(rec.after_alternatives)
    _prune(tree)
    return _freeze(tree)


def _ensure(tree, path):
    node = tree
    for part in path:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    return node


def _find(tree, path):
    node = tree
    for part in path:
        node = node.get(part)
        if not isinstance(node, dict):
            return None
    return node


def _prune(tree):
    for key in list(tree):
        if isinstance(tree[key], dict):
            _prune(tree[key])
            if not tree[key]:
                del tree[key]


def _thaw(tree):
    return {k: (_thaw(v) if isinstance(v, dict) else set(v)) for k, v in tree.items()}


def _freeze(tree):
    return {k: (_freeze(v) if isinstance(v, dict) else frozenset(v)) for k, v in tree.items()}


# --- output -------------------------------------------------------------------

CSV_COLUMNS = ("path", "kind", "before", "after", "type_code")


def _row(rec):
    return (
        "/".join(rec.path), rec.kind.value, rec.describe_before(),
        rec.describe_after(), rec.type_code or "",
    )


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(_row(r) for r in records)
    return buf.getvalue()


def records_to_text(records) -> str:
    rows = [CSV_COLUMNS] + [_row(r) for r in records]
    widths = [max(len(r[i]) for r in rows) for i in range(len(CSV_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"
