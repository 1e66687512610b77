"""Computes a parsimonious change set transforming one graph into another.

The diff is id-anchored: nodes are matched strictly by id, never by label
similarity. Low-level edge add/delete pairs are coalesced into the
higher-level changes curators think in (predicate changes, moves, synonym
replacements) wherever the pairing is unambiguous; when several pairings
are possible, raw add/delete changes are emitted instead of guessing.

Applying ``diff(left, right)`` to ``left`` yields a graph equal to
``right``; coalescing changes the presentation of a diff, never its
content. Output ordering is deterministic: node-phase changes grouped by
node id with removals sequenced before additions (a later addition may
re-add a value a removal swept away), then edge-phase changes sorted by
(subject, predicate, object).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnl import render_document
from .graph import Edge, Graph, Node
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
    is_curie,
)
from . import serialize


@dataclass(frozen=True)
class DiffOptions:
    coalesce_moves: bool = True
    coalesce_predicate_changes: bool = True
    coalesce_synonym_replacements: bool = True


def _pred_ref(token: str) -> NodeRef:
    return NodeRef.curie(token) if is_curie(token) else NodeRef.label(token)


def diff(left: Graph, right: Graph, opts: DiffOptions | None = None) -> ChangeSet:
    opts = opts or DiffOptions()
    changes: list[Change] = []
    left_ids = set(left.nodes)
    right_ids = set(right.nodes)
    left_only = left_ids - right_ids

    for node_id in sorted(left_ids | right_ids):
        if node_id in left_only:
            changes.append(NodeDeletion(about_node=NodeRef.curie(node_id)))
        elif node_id not in left_ids:
            changes.extend(_creation_block(right.nodes[node_id]))
        else:
            changes.extend(_meta_block(left.nodes[node_id], right.nodes[node_id], opts))

    changes.extend(_edge_phase(left, right, left_only, opts))
    return ChangeSet(tuple(changes))


def _creation_block(node: Node) -> list[Change]:
    """Reconstruct a node that exists only on the right."""
    about = NodeRef.curie(node.id)
    out: list[Change] = [ClassCreation(about_node=about, new_value=node.label)]
    if node.definition is not None:
        out.append(NewTextDefinition(about_node=about, new_value=node.definition))
    for syn in sorted(node.synonyms, key=lambda s: (s.value, s.scope.value)):
        out.append(NewSynonym(about_node=about, new_value=syn.value, scope=syn.scope))
    if node.deprecated:
        replacement = NodeRef.curie(node.replaced_by) if node.replaced_by else None
        out.append(NodeObsoletion(about_node=about, replacement=replacement))
    return out


def _meta_block(left: Node, right: Node, opts: DiffOptions) -> list[Change]:
    about = NodeRef.curie(left.id)
    out: list[Change] = []

    if left.label != right.label and right.label is not None:
        # a label that simply vanished has no change form and cannot occur
        # through apply; it is silently unrepresented
        out.append(NodeRename(about_node=about, old_value=left.label, new_value=right.label))

    if left.definition is None and right.definition is not None:
        out.append(NewTextDefinition(about_node=about, new_value=right.definition))
    elif left.definition is not None and right.definition is None:
        out.append(RemoveTextDefinition(about_node=about))
    elif left.definition != right.definition and right.definition is not None:
        out.append(
            NodeTextDefinitionChange(
                about_node=about, old_value=left.definition, new_value=right.definition
            )
        )

    newly_deprecated = right.deprecated and not left.deprecated
    replacement_changed = (
        right.deprecated
        and left.deprecated
        and right.replaced_by is not None
        and right.replaced_by != left.replaced_by
    )
    if newly_deprecated or replacement_changed:
        replacement = NodeRef.curie(right.replaced_by) if right.replaced_by else None
        out.append(NodeObsoletion(about_node=about, replacement=replacement))

    out.extend(_synonym_changes(about, left, right, opts))
    return out


def _synonym_changes(about: NodeRef, left: Node, right: Node, opts: DiffOptions) -> list[Change]:
    left_set = set(left.synonyms)
    right_set = set(right.synonyms)
    removals = left_set - right_set
    additions = right_set - left_set
    if not removals and not additions:
        return []

    if opts.coalesce_synonym_replacements and len(removals) == 1 and len(additions) == 1:
        removed = next(iter(removals))
        added = next(iter(additions))
        value_count = sum(1 for s in left.synonyms if s.value == removed.value)
        # replacement matches by value alone at apply time, so it is only
        # safe when the removed value is unique on the node
        if removed.scope == added.scope and value_count == 1:
            return [
                SynonymReplacement(about_node=about, old_value=removed.value, new_value=added.value)
            ]

    out: list[Change] = []
    readds: set = set()
    for value in sorted({s.value for s in removals}):
        out.append(RemoveSynonym(about_node=about, old_value=value))
        # removal sweeps every synonym with that value; re-add survivors
        readds.update(s for s in left_set & right_set if s.value == value)
    for syn in sorted(additions | readds, key=lambda s: (s.value, s.scope.value)):
        out.append(NewSynonym(about_node=about, new_value=syn.value, scope=syn.scope))
    return out


def _edge_phase(left: Graph, right: Graph, left_only: set[str], opts: DiffOptions) -> list[Change]:
    # edges swept away by a node deletion are covered by that deletion
    surviving = {
        e for e in left.edges if e.subject not in left_only and e.object not in left_only
    }
    removed = surviving - right.edges
    added = right.edges - surviving

    keyed: list[tuple[tuple[str, str, str], Change]] = []

    if opts.coalesce_predicate_changes:
        removed_by_so: dict[tuple[str, str], list[Edge]] = {}
        added_by_so: dict[tuple[str, str], list[Edge]] = {}
        for e in removed:
            removed_by_so.setdefault((e.subject, e.object), []).append(e)
        for e in added:
            added_by_so.setdefault((e.subject, e.object), []).append(e)
        for so, dels in removed_by_so.items():
            adds = added_by_so.get(so, [])
            if len(dels) == 1 and len(adds) == 1:
                old, new = dels[0], adds[0]
                keyed.append(
                    (
                        old.key(),
                        PredicateChange(
                            subject=NodeRef.curie(old.subject),
                            object=NodeRef.curie(old.object),
                            old_value=_pred_ref(old.predicate),
                            new_value=_pred_ref(new.predicate),
                        ),
                    )
                )
                removed.discard(old)
                added.discard(new)

    if opts.coalesce_moves:
        parallel_count: dict[tuple[str, str], int] = {}
        for e in left.edges:
            key = (e.subject, e.object)
            parallel_count[key] = parallel_count.get(key, 0) + 1
        removed_by_sp: dict[tuple[str, str], list[Edge]] = {}
        added_by_sp: dict[tuple[str, str], list[Edge]] = {}
        for e in removed:
            removed_by_sp.setdefault((e.subject, e.predicate), []).append(e)
        for e in added:
            added_by_sp.setdefault((e.subject, e.predicate), []).append(e)
        for sp, dels in removed_by_sp.items():
            adds = added_by_sp.get(sp, [])
            if len(dels) != 1 or len(adds) != 1:
                continue
            old, new = dels[0], adds[0]
            # the rendered move command omits the predicate, so only
            # coalesce when apply-time inference is unambiguous
            if parallel_count.get((old.subject, old.object), 0) != 1:
                continue
            keyed.append(
                (
                    old.key(),
                    NodeMove(
                        about_node=NodeRef.curie(old.subject),
                        old_value=NodeRef.curie(old.object),
                        new_value=NodeRef.curie(new.object),
                        predicate=_pred_ref(old.predicate),
                    ),
                )
            )
            removed.discard(old)
            added.discard(new)

    for e in removed:
        keyed.append(
            (
                e.key(),
                EdgeDeletion(
                    subject=NodeRef.curie(e.subject),
                    predicate=_pred_ref(e.predicate),
                    object=NodeRef.curie(e.object),
                ),
            )
        )
    for e in added:
        keyed.append(
            (
                e.key(),
                EdgeCreation(
                    subject=NodeRef.curie(e.subject),
                    predicate=_pred_ref(e.predicate),
                    object=NodeRef.curie(e.object),
                ),
            )
        )

    keyed.sort(key=lambda pair: (pair[0], type(pair[1]).__name__))
    return [change for _key, change in keyed]


def format_diff(changeset: ChangeSet, fmt: str) -> bytes:
    """Render a diff as cnl (one command per line), json, yaml, or tsv."""
    if fmt == "cnl":
        return render_document(changeset).encode("utf-8")
    return serialize.write_format(changeset, fmt)
