"""Executes change sets against a graph, directly or provisionally.

Changes are applied strictly in order; later changes see earlier
mutations. A failed change leaves the graph exactly as it was before that
change (per-change atomicity; there is no whole-set rollback). In
provisional mode nothing is mutated: the serialized change is stored on
its target node as pending data, to be enacted later by
:func:`apply_pending`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from . import serialize
from .errors import KgclError
from .graph import Ambiguous, Edge, Graph, Node, NotFound, Synonym
from .model import (
    Change,
    ChangeSet,
    ClassCreation,
    EdgeCreation,
    EdgeDeletion,
    NewSynonym,
    NewTextDefinition,
    NodeDeletion,
    NodeMove,
    NodeObsoletion,
    NodeRef,
    NodeRename,
    NodeTextDefinitionChange,
    PredicateChange,
    RemoveSynonym,
    RemoveTextDefinition,
    SynonymReplacement,
    SynonymScope,
)

APPLIED = "applied"
STORED_PROVISIONAL = "stored_provisional"
FAILED = "failed"

DEFAULT_SYNONYM_SCOPE = SynonymScope.RELATED


class ApplyError(KgclError):
    kind = "ApplyError"


class MismatchError(ApplyError):
    """A stated old value disagrees with the graph."""

    kind = "MismatchError"


class AlreadyExists(ApplyError):
    kind = "AlreadyExists"


class MissingTarget(ApplyError):
    kind = "MissingTarget"


class AmbiguousTarget(ApplyError):
    """More than one synonym matches where exactly one is required."""

    kind = "Ambiguous"


class AmbiguousEdge(ApplyError):
    """Parent-edge inference for a move found more than one candidate."""

    kind = "AmbiguousEdge"


@dataclass(frozen=True)
class ApplyOptions:
    provisional: bool = False
    auto_id_prefix: str = "KGCL"
    auto_id_width: int = 7
    on_error: Literal["halt", "skip_and_report"] = "halt"
    # CURIE replacement/object targets may name terms from other
    # ontologies; label refs always require presence.
    allow_unresolved_curie_targets: bool = True

    def __post_init__(self) -> None:
        if self.auto_id_width < 1:
            raise ValueError("auto_id_width must be >= 1")
        if self.on_error not in ("halt", "skip_and_report"):
            raise ValueError(f"unknown on_error policy: {self.on_error!r}")


@dataclass
class ApplyOutcome:
    change: Change | None
    status: str
    message: str = ""
    resolved: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "message": self.message,
            "resolved_ids": dict(self.resolved),
            "change": None if self.change is None else serialize.change_to_record(self.change),
        }


@dataclass
class ApplyReport:
    entries: list[ApplyOutcome] = field(default_factory=list)
    halted: bool = False

    @property
    def halt_index(self) -> int | None:
        return len(self.entries) - 1 if self.halted else None

    def count(self, status: str) -> int:
        return sum(1 for e in self.entries if e.status == status)

    @property
    def failed(self) -> int:
        return self.count(FAILED)

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "halted": self.halted,
            "halt_index": self.halt_index,
            "counts": {
                APPLIED: self.count(APPLIED),
                STORED_PROVISIONAL: self.count(STORED_PROVISIONAL),
                FAILED: self.count(FAILED),
            },
        }


def apply_change(graph: Graph, change: Change, opts: ApplyOptions | None = None) -> ApplyOutcome:
    """Apply one change, mutating the graph; failures leave it untouched."""
    opts = opts or ApplyOptions()
    try:
        if opts.provisional:
            return _store_provisional(graph, change)
        resolved, message = _apply_direct(graph, change, opts)
        return ApplyOutcome(change=change, status=APPLIED, message=message, resolved=resolved)
    except (ApplyError, NotFound, Ambiguous, serialize.SerializationError) as err:
        return ApplyOutcome(change=change, status=FAILED, message=str(err))


def apply_changeset(graph: Graph, changeset: ChangeSet, opts: ApplyOptions | None = None) -> ApplyReport:
    """Apply changes in order; halt or skip-and-report on failure per options."""
    opts = opts or ApplyOptions()
    report = ApplyReport()
    for change in changeset:
        outcome = apply_change(graph, change, opts)
        report.entries.append(outcome)
        if outcome.status == FAILED and opts.on_error == "halt":
            report.halted = True
            break
    return report


def apply_pending(graph: Graph, selector: str = "all", opts: ApplyOptions | None = None) -> ApplyReport:
    """Enact the changes stored on nodes, in (node id, list position) order.

    Successfully applied payloads are removed from their node's pending
    list; failed ones stay put and are reported.
    """
    if selector != "all":
        raise ValueError(f"unknown pending selector: {selector!r}")
    opts = opts or ApplyOptions()
    direct = ApplyOptions(
        provisional=False,
        auto_id_prefix=opts.auto_id_prefix,
        auto_id_width=opts.auto_id_width,
        on_error="skip_and_report",
        allow_unresolved_curie_targets=opts.allow_unresolved_curie_targets,
    )
    schedule = [
        (node_id, payload)
        for node_id in sorted(graph.nodes)
        for payload in list(graph.nodes[node_id].pending)
    ]
    report = ApplyReport()
    for node_id, payload in schedule:
        host = graph.nodes.get(node_id)
        if host is None or payload not in host.pending:
            # the hosting node (or the payload itself) went away through an
            # earlier pending change in this same pass
            continue
        try:
            change = serialize.change_from_payload(payload)
        except serialize.SerializationError as err:
            report.entries.append(ApplyOutcome(change=None, status=FAILED, message=str(err)))
            continue
        outcome = apply_change(graph, change, direct)
        report.entries.append(outcome)
        if outcome.status == APPLIED:
            host = graph.nodes.get(node_id)
            if host is not None and payload in host.pending:
                host.pending.remove(payload)
    return report


def _store_provisional(graph: Graph, change: Change) -> ApplyOutcome:
    host_ref = _host_ref(change)
    if host_ref is None:
        raise MissingTarget(
            f"{type(change).__name__} has no target node to store a provisional change on"
        )
    host_id = graph.resolve(host_ref)
    graph.nodes[host_id].pending.append(serialize.pending_payload(change))
    return ApplyOutcome(change=change, status=STORED_PROVISIONAL, resolved={"host": host_id})


def _host_ref(change: Change) -> NodeRef | None:
    if isinstance(change, (EdgeCreation, EdgeDeletion, PredicateChange)):
        return change.subject
    return getattr(change, "about_node", None)


def _resolve_target(graph: Graph, ref: NodeRef, opts: ApplyOptions) -> str:
    """Resolution for replacement/object position refs."""
    return graph.resolve(ref, require_curie_presence=not opts.allow_unresolved_curie_targets)


def _predicate_key(ref: NodeRef) -> str:
    # predicates are stored by their token, CURIE or bare relation name
    return ref.value


def _mint_id(graph: Graph, opts: ApplyOptions) -> str:
    n = 1
    while True:
        candidate = f"{opts.auto_id_prefix}:{n:0{opts.auto_id_width}d}"
        if candidate not in graph.nodes:
            return candidate
        n += 1


def _apply_direct(graph: Graph, change: Change, opts: ApplyOptions) -> tuple[dict[str, str], str]:
    """Dispatch on variant; returns resolved ids per ref field and a note."""
    if isinstance(change, NodeRename):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        if change.old_value is not None and node.label != change.old_value:
            raise MismatchError(f"label of {node_id} is {node.label!r}, not {change.old_value!r}")
        graph.set_label(node_id, change.new_value)
        return {"about_node": node_id}, ""

    if isinstance(change, NodeObsoletion):
        node_id = graph.resolve(change.about_node)
        resolved = {"about_node": node_id}
        replacement_id = None
        if change.replacement is not None:
            replacement_id = _resolve_target(graph, change.replacement, opts)
            resolved["replacement"] = replacement_id
        node = graph.nodes[node_id]
        node.deprecated = True
        if replacement_id is not None:
            node.replaced_by = replacement_id
        return resolved, ""

    if isinstance(change, NodeDeletion):
        node_id = graph.resolve(change.about_node)
        for edge in graph.edges_about(node_id):
            graph.remove_edge(edge)
        graph.remove_node(node_id)
        return {"about_node": node_id}, ""

    if isinstance(change, ClassCreation):
        if change.about_node is not None:
            if change.about_node.kind != "curie":
                raise MismatchError("an explicit new node id must be a CURIE")
            node_id = change.about_node.value
            if node_id in graph.nodes:
                raise AlreadyExists(f"node {node_id} already exists")
        else:
            node_id = _mint_id(graph, opts)
        graph.add_node(Node(id=node_id, label=change.new_value, node_kind="class"))
        return {"about_node": node_id}, ""

    if isinstance(change, SynonymReplacement):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        matches = [s for s in node.synonyms if s.value == change.old_value]
        if not matches:
            raise MissingTarget(f"{node_id} has no synonym {change.old_value!r}")
        if len(matches) > 1:
            raise AmbiguousTarget(
                f"{node_id} has {len(matches)} synonyms with value {change.old_value!r}"
            )
        old = matches[0]
        replacement_syn = Synonym(value=change.new_value, scope=old.scope)
        if any(s == replacement_syn for s in node.synonyms if s is not old):
            raise AlreadyExists(
                f"{node_id} already has synonym {change.new_value!r} ({old.scope.value})"
            )
        node.synonyms[node.synonyms.index(old)] = replacement_syn
        return {"about_node": node_id}, ""

    if isinstance(change, NewTextDefinition):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        if node.definition is not None:
            raise AlreadyExists(f"{node_id} already has a definition")
        node.definition = change.new_value
        return {"about_node": node_id}, ""

    if isinstance(change, RemoveTextDefinition):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        if node.definition is None:
            raise MissingTarget(f"{node_id} has no definition")
        node.definition = None
        return {"about_node": node_id}, ""

    if isinstance(change, NodeTextDefinitionChange):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        if node.definition is None:
            raise MissingTarget(f"{node_id} has no definition to change")
        if change.old_value is not None and node.definition != change.old_value:
            raise MismatchError(f"definition of {node_id} does not match the stated old value")
        node.definition = change.new_value
        return {"about_node": node_id}, ""

    if isinstance(change, NewSynonym):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        scope = change.scope or DEFAULT_SYNONYM_SCOPE
        candidate = Synonym(value=change.new_value, scope=scope)
        if candidate in node.synonyms:
            raise AlreadyExists(
                f"{node_id} already has synonym {change.new_value!r} ({scope.value})"
            )
        node.synonyms.append(candidate)
        note = "" if change.scope is not None else f"scope defaulted to {scope.value}"
        return {"about_node": node_id}, note

    if isinstance(change, RemoveSynonym):
        node_id = graph.resolve(change.about_node)
        node = graph.nodes[node_id]
        kept = [s for s in node.synonyms if s.value != change.old_value]
        if len(kept) == len(node.synonyms):
            raise MissingTarget(f"{node_id} has no synonym {change.old_value!r}")
        node.synonyms[:] = kept
        return {"about_node": node_id}, ""

    if isinstance(change, EdgeCreation):
        subject_id = graph.resolve(change.subject)
        object_id = _resolve_target(graph, change.object, opts)
        edge = Edge(subject=subject_id, predicate=_predicate_key(change.predicate), object=object_id)
        if edge in graph.edges:
            raise AlreadyExists(f"edge {edge.key()} already exists")
        graph.add_edge(edge)
        return {"subject": subject_id, "object": object_id}, ""

    if isinstance(change, EdgeDeletion):
        subject_id = graph.resolve(change.subject)
        object_id = _resolve_target(graph, change.object, opts)
        edge = Edge(subject=subject_id, predicate=_predicate_key(change.predicate), object=object_id)
        if edge not in graph.edges:
            raise MissingTarget(f"edge {edge.key()} does not exist")
        graph.remove_edge(edge)
        return {"subject": subject_id, "object": object_id}, ""

    if isinstance(change, NodeMove):
        child_id = graph.resolve(change.about_node)
        old_parent = _resolve_target(graph, change.old_value, opts)
        new_parent = _resolve_target(graph, change.new_value, opts)
        if change.predicate is not None:
            old_edge = Edge(
                subject=child_id, predicate=_predicate_key(change.predicate), object=old_parent
            )
            if old_edge not in graph.edges:
                raise MissingTarget(f"edge {old_edge.key()} does not exist")
        else:
            candidates = sorted(
                (e for e in graph.edges if e.subject == child_id and e.object == old_parent),
                key=Edge.key,
            )
            if not candidates:
                raise MissingTarget(f"no edge from {child_id} to {old_parent}")
            if len(candidates) > 1:
                raise AmbiguousEdge(
                    f"{len(candidates)} edges from {child_id} to {old_parent}; "
                    "state the predicate explicitly"
                )
            old_edge = candidates[0]
        new_edge = Edge(subject=child_id, predicate=old_edge.predicate, object=new_parent)
        if new_edge in graph.edges:
            raise AlreadyExists(f"edge {new_edge.key()} already exists")
        graph.remove_edge(old_edge)
        graph.add_edge(new_edge)
        return {"about_node": child_id, "old_value": old_parent, "new_value": new_parent}, ""

    if isinstance(change, PredicateChange):
        subject_id = graph.resolve(change.subject)
        object_id = _resolve_target(graph, change.object, opts)
        old_edge = Edge(
            subject=subject_id, predicate=_predicate_key(change.old_value), object=object_id
        )
        new_edge = Edge(
            subject=subject_id, predicate=_predicate_key(change.new_value), object=object_id
        )
        if old_edge not in graph.edges:
            raise MissingTarget(f"edge {old_edge.key()} does not exist")
        if new_edge in graph.edges:
            raise AlreadyExists(f"edge {new_edge.key()} already exists")
        graph.remove_edge(old_edge)
        graph.add_edge(new_edge)
        return {"subject": subject_id, "object": object_id}, ""

    raise ApplyError(f"unknown change type: {type(change).__name__}")
