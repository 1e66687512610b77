"""Engine for the knowledge-graph change language: parse and render the
controlled natural language, apply change sets to a graph (directly or
provisionally), compute parsimonious diffs between graph versions, and
extract commands from curation-request text."""

from .apply import ApplyOptions, ApplyOutcome, ApplyReport, apply_change, apply_changeset, apply_pending
from .cnl import ParseError, parse_command, parse_document, render_command, render_document
from .diff import DiffOptions, diff, format_diff
from .errors import KgclError
from .graph import Edge, Graph, Node, Synonym, graph_equal, load_json, load_obo, save_json
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
    classify,
    validate,
    validate_changeset,
)
from .protocol import ExtractionResult, extract, render_request_body, render_title
from .serialize import from_json, from_tsv, from_yaml, to_json, to_tsv, to_yaml

__version__ = "0.1.0"

__all__ = [
    "ApplyOptions",
    "ApplyOutcome",
    "ApplyReport",
    "Change",
    "ChangeSet",
    "ClassCreation",
    "DiffOptions",
    "Edge",
    "EdgeCreation",
    "EdgeDeletion",
    "ExtractionResult",
    "Graph",
    "KgclError",
    "NewSynonym",
    "NewTextDefinition",
    "Node",
    "NodeDeletion",
    "NodeMove",
    "NodeObsoletion",
    "NodeRef",
    "NodeRename",
    "NodeTextDefinitionChange",
    "ParseError",
    "PredicateChange",
    "RemoveSynonym",
    "RemoveTextDefinition",
    "Synonym",
    "SynonymReplacement",
    "SynonymScope",
    "apply_change",
    "apply_changeset",
    "apply_pending",
    "classify",
    "diff",
    "extract",
    "format_diff",
    "from_json",
    "from_tsv",
    "from_yaml",
    "graph_equal",
    "load_json",
    "load_obo",
    "parse_command",
    "parse_document",
    "render_command",
    "render_document",
    "render_request_body",
    "render_title",
    "save_json",
    "to_json",
    "to_tsv",
    "to_yaml",
    "validate",
    "validate_changeset",
]
