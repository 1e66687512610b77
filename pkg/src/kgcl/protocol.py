"""The curation-request text protocol.

Issue text addressed to the change agent carries a trigger line,
``Hey ontobot! apply:`` (possibly behind markdown heading markers),
followed by a bulleted list of commands. Extraction scans for the first
trigger, parses the bullets beneath it, and stops at the first line that
is neither a bullet nor blank. Proposal titles follow the portal template
style, e.g. ``Proposal: add synonym 'X' for Y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cnl import ParseError, parse_command, render_command
from .graph import Graph
from .model import (
    Change,
    ChangeSet,
    NewSynonym,
    NodeObsoletion,
    NodeRef,
    NodeRename,
    RemoveSynonym,
)

TRIGGER = "Hey ontobot! apply:"

_BULLET_RE = re.compile(r"^(\s*[-*] )(.*)$")


@dataclass
class ExtractionResult:
    changes: ChangeSet = field(default_factory=ChangeSet)
    command_lines: list[tuple[int, str]] = field(default_factory=list)
    errors: list[tuple[int, ParseError]] = field(default_factory=list)
    trigger_found: bool = False


def _is_trigger(line: str) -> bool:
    return line.strip().lstrip("#").strip() == TRIGGER


def extract(issue_text: str) -> ExtractionResult:
    """Pull commands out of issue text; only the first trigger block counts."""
    result = ExtractionResult()
    lines = issue_text.splitlines()
    start = None
    for i, line in enumerate(lines):
        if _is_trigger(line):
            start = i + 1
            break
    if start is None:
        return result

    result.trigger_found = True
    changes: list[Change] = []
    for offset, line in enumerate(lines[start:], start=start):
        if not line.strip():
            continue
        m = _BULLET_RE.match(line)
        if m is None:
            break  # prose after the block must not be parsed as commands
        lineno = offset + 1
        command = m.group(2)
        result.command_lines.append((lineno, command))
        try:
            changes.append(parse_command(command))
        except ParseError as err:
            result.errors.append((lineno, err.at_line(lineno, column_offset=len(m.group(1)))))
    result.changes = ChangeSet(tuple(changes))
    return result


def _concept(ref: NodeRef, resolver: Graph | None) -> str:
    if ref.kind == "label":
        return ref.value
    if resolver is not None:
        node = resolver.nodes.get(ref.value)
        if node is not None and node.label is not None:
            return node.label
    return ref.value


def render_title(change: Change, resolver: Graph | None = None) -> str:
    """A human-readable proposal title for a change.

    Dedicated templates cover synonym creation and removal, obsoletion,
    and renaming; everything else falls back to the canonical command.
    """
    if isinstance(change, NewSynonym):
        return f"Proposal: add synonym '{change.new_value}' for {_concept(change.about_node, resolver)}"
    if isinstance(change, RemoveSynonym):
        return f"Proposal: remove synonym '{change.old_value}' for {_concept(change.about_node, resolver)}"
    if isinstance(change, NodeObsoletion):
        return f"Proposal: obsolete {_concept(change.about_node, resolver)}"
    if isinstance(change, NodeRename):
        return f"Proposal: rename {_concept(change.about_node, resolver)} to '{change.new_value}'"
    return f"Proposal: {render_command(change)}"


def render_request_body(changeset: ChangeSet) -> str:
    """Trigger line plus one bullet per change; extract() recovers the set."""
    lines = [TRIGGER]
    lines.extend(f"- {render_command(change)}" for change in changeset)
    return "\n".join(lines) + "\n"
