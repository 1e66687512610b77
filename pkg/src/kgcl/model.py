"""Data model for knowledge-graph change descriptions.

A change is one of 14 concrete variants, grouped into node changes and edge
changes. All values are immutable after construction and safe to share
between threads. Well-formedness is checked by :func:`validate`, which
returns violations as data rather than raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

CURIE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*:[A-Za-z0-9_.\-]+\Z")
BARE_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

NODE_CHANGE = "NodeChange"
EDGE_CHANGE = "EdgeChange"


def is_curie(text: str) -> bool:
    """True if ``text`` has the prefix:local shape accepted as a CURIE."""
    return bool(CURIE_RE.match(text))


class SynonymScope(str, Enum):
    EXACT = "exact"
    NARROW = "narrow"
    BROAD = "broad"
    RELATED = "related"


@dataclass(frozen=True)
class NodeRef:
    """A node designator: either a CURIE or a label requiring resolution."""

    kind: str  # "curie" | "label"
    value: str

    @staticmethod
    def curie(value: str) -> "NodeRef":
        return NodeRef("curie", value)

    @staticmethod
    def label(value: str) -> "NodeRef":
        return NodeRef("label", value)


@dataclass(frozen=True)
class NodeRename:
    about_node: NodeRef
    new_value: str
    old_value: str | None = None
    id: str | None = None


@dataclass(frozen=True)
class NodeObsoletion:
    """Deprecates a node without deleting it, optionally naming a replacement."""

    about_node: NodeRef
    replacement: NodeRef | None = None
    id: str | None = None


@dataclass(frozen=True)
class NodeDeletion:
    about_node: NodeRef
    id: str | None = None


@dataclass(frozen=True)
class ClassCreation:
    """Creates a new class node; ``about_node`` optionally supplies the new id."""

    new_value: str
    about_node: NodeRef | None = None
    id: str | None = None


@dataclass(frozen=True)
class SynonymReplacement:
    """Rewrites the text of an existing synonym, preserving its scope."""

    about_node: NodeRef
    old_value: str
    new_value: str
    id: str | None = None


@dataclass(frozen=True)
class NewTextDefinition:
    about_node: NodeRef
    new_value: str
    id: str | None = None


@dataclass(frozen=True)
class RemoveTextDefinition:
    about_node: NodeRef
    id: str | None = None


@dataclass(frozen=True)
class NodeTextDefinitionChange:
    about_node: NodeRef
    new_value: str
    old_value: str | None = None
    id: str | None = None


@dataclass(frozen=True)
class NewSynonym:
    about_node: NodeRef
    new_value: str
    scope: SynonymScope | None = None
    id: str | None = None


@dataclass(frozen=True)
class RemoveSynonym:
    """Removes every synonym of the node whose text equals ``old_value``."""

    about_node: NodeRef
    old_value: str
    id: str | None = None


@dataclass(frozen=True)
class EdgeCreation:
    subject: NodeRef
    predicate: NodeRef
    object: NodeRef
    id: str | None = None


@dataclass(frozen=True)
class EdgeDeletion:
    subject: NodeRef
    predicate: NodeRef
    object: NodeRef
    id: str | None = None


@dataclass(frozen=True)
class NodeMove:
    """Relocates a child under a new parent: one parent edge deleted, one added.

    ``old_value`` and ``new_value`` are the old and new parent. When
    ``predicate`` is absent the apply engine infers it from the unique
    existing edge between child and old parent.
    """

    about_node: NodeRef
    old_value: NodeRef
    new_value: NodeRef
    predicate: NodeRef | None = None
    id: str | None = None


@dataclass(frozen=True)
class PredicateChange:
    """Rewrites the predicate of the edge between ``subject`` and ``object``."""

    subject: NodeRef
    object: NodeRef
    old_value: NodeRef
    new_value: NodeRef
    id: str | None = None


Change = Union[
    NodeRename,
    NodeObsoletion,
    NodeDeletion,
    ClassCreation,
    SynonymReplacement,
    NewTextDefinition,
    RemoveTextDefinition,
    NodeTextDefinitionChange,
    NewSynonym,
    RemoveSynonym,
    EdgeCreation,
    EdgeDeletion,
    NodeMove,
    PredicateChange,
]

CHANGE_TYPES: dict[str, type] = {
    cls.__name__: cls
    for cls in (
        NodeRename,
        NodeObsoletion,
        NodeDeletion,
        ClassCreation,
        SynonymReplacement,
        NewTextDefinition,
        RemoveTextDefinition,
        NodeTextDefinitionChange,
        NewSynonym,
        RemoveSynonym,
        EdgeCreation,
        EdgeDeletion,
        NodeMove,
        PredicateChange,
    )
}

EDGE_CHANGE_TYPES = frozenset({EdgeCreation, EdgeDeletion, NodeMove, PredicateChange})

# Field schema per variant: (name, kind, required) with kind in {ref, str, scope}.
# Shared by validation and the record serializers; ids are handled separately.
FIELD_SCHEMA: dict[type, tuple[tuple[str, str, bool], ...]] = {
    NodeRename: (("about_node", "ref", True), ("old_value", "str", False), ("new_value", "str", True)),
    NodeObsoletion: (("about_node", "ref", True), ("replacement", "ref", False)),
    NodeDeletion: (("about_node", "ref", True),),
    ClassCreation: (("about_node", "ref", False), ("new_value", "str", True)),
    SynonymReplacement: (("about_node", "ref", True), ("old_value", "str", True), ("new_value", "str", True)),
    NewTextDefinition: (("about_node", "ref", True), ("new_value", "str", True)),
    RemoveTextDefinition: (("about_node", "ref", True),),
    NodeTextDefinitionChange: (("about_node", "ref", True), ("old_value", "str", False), ("new_value", "str", True)),
    NewSynonym: (("about_node", "ref", True), ("new_value", "str", True), ("scope", "scope", False)),
    RemoveSynonym: (("about_node", "ref", True), ("old_value", "str", True)),
    EdgeCreation: (("subject", "ref", True), ("predicate", "ref", True), ("object", "ref", True)),
    EdgeDeletion: (("subject", "ref", True), ("predicate", "ref", True), ("object", "ref", True)),
    NodeMove: (
        ("about_node", "ref", True),
        ("old_value", "ref", True),
        ("new_value", "ref", True),
        ("predicate", "ref", False),
    ),
    PredicateChange: (
        ("subject", "ref", True),
        ("object", "ref", True),
        ("old_value", "ref", True),
        ("new_value", "ref", True),
    ),
}


@dataclass(frozen=True)
class ChangeSet:
    """An ordered list of changes; order is significant because apply is sequential."""

    changes: tuple[Change, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "changes", tuple(self.changes))

    def __len__(self) -> int:
        return len(self.changes)

    def __iter__(self) -> Iterator[Change]:
        return iter(self.changes)

    def __getitem__(self, index: int) -> Change:
        return self.changes[index]


def classify(change: Change) -> str:
    """Return the group of a change: ``NodeChange`` or ``EdgeChange``.

    Total over all variants; anything else is a TypeError.
    """
    if type(change) in EDGE_CHANGE_TYPES:
        return EDGE_CHANGE
    if type(change) in CHANGE_TYPES.values():
        return NODE_CHANGE
    raise TypeError(f"not a change object: {change!r}")


def _check_ref(name: str, ref: object, out: list[str]) -> None:
    if not isinstance(ref, NodeRef):
        out.append(f"{name} must be a NodeRef")
        return
    if ref.kind == "curie":
        if not is_curie(ref.value):
            out.append(f"{name} is not a well-formed CURIE: {ref.value!r}")
    elif ref.kind == "label":
        if not ref.value:
            out.append(f"{name} label must be non-empty")
    else:
        out.append(f"{name} has unknown ref kind {ref.kind!r}")


def validate(change: Change) -> list[str]:
    """Check variant invariants, returning violation messages (empty means valid)."""
    schema = FIELD_SCHEMA.get(type(change))
    if schema is None:
        return [f"unknown change type: {type(change).__name__}"]
    out: list[str] = []
    for name, kind, required in schema:
        value = getattr(change, name)
        if value is None:
            if required:
                out.append(f"{name} is required")
            continue
        if kind == "ref":
            _check_ref(name, value, out)
        elif kind == "str":
            if not isinstance(value, str) or not value:
                out.append(f"{name} must be a non-empty string")
        elif kind == "scope":
            if not isinstance(value, SynonymScope):
                out.append(f"{name} must be a synonym scope")
    if isinstance(change, (NodeMove, PredicateChange)):
        if change.old_value is not None and change.old_value == change.new_value:
            out.append("old_value and new_value must differ")
    if change.id is not None and not change.id:
        out.append("id must be non-empty when present")
    return out


def validate_changeset(changeset: ChangeSet) -> list[str]:
    """Per-change violations plus duplicate-id checks across the set."""
    out: list[str] = []
    seen: dict[str, int] = {}
    for i, change in enumerate(changeset):
        out.extend(f"change {i}: {msg}" for msg in validate(change))
        if change.id is not None:
            if change.id in seen:
                out.append(f"change {i}: duplicate id {change.id!r} (also change {seen[change.id]})")
            else:
                seen[change.id] = i
    return out
