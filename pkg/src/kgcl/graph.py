"""In-memory knowledge graph with a graph-JSON interchange format.

The on-disk document is ``{"nodes": [...], "edges": [...]}``:

    node: {"id": CURIE, "lbl": label, "type": "CLASS"|"PROPERTY"|"INDIVIDUAL",
           "meta": {"definition": {"val": text},
                    "synonyms": [{"val": text, "pred": "hasExactSynonym" | ...}],
                    "deprecated": bool,
                    "basicPropertyValues": [{"pred": "term_replaced_by", "val": CURIE},
                                            {"pred": "pending_change", "val": serialized change}]}}
    edge: {"sub": CURIE, "pred": CURIE or bare relation name, "obj": CURIE}

All meta members are optional. Saving is deterministic: nodes sorted by id,
edges sorted by (subject, predicate, object), synonyms in insertion order.
Edge endpoints may reference nodes absent from the node table; that is
legal (staged references are common) and reported by :meth:`Graph.lint`.

A Graph instance supports concurrent readers or one writer, never both.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import KgclError
from .model import NodeRef, SynonymScope, is_curie

SCOPE_TO_PRED = {
    SynonymScope.EXACT: "hasExactSynonym",
    SynonymScope.NARROW: "hasNarrowSynonym",
    SynonymScope.BROAD: "hasBroadSynonym",
    SynonymScope.RELATED: "hasRelatedSynonym",
}
PRED_TO_SCOPE = {pred: scope for scope, pred in SCOPE_TO_PRED.items()}

_KIND_TO_TYPE = {"class": "CLASS", "property": "PROPERTY", "individual": "INDIVIDUAL"}
_TYPE_TO_KIND = {t: k for k, t in _KIND_TO_TYPE.items()}

REPLACED_BY_PRED = "term_replaced_by"
PENDING_PRED = "pending_change"


class GraphError(KgclError):
    pass


class FormatError(GraphError):
    """Malformed graph document; ``path`` points at the offending element."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class DuplicateNodeId(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NotFound(GraphError):
    """A node reference that resolves to nothing."""

    def __init__(self, ref: NodeRef):
        self.ref = ref
        shown = ref.value if ref.kind == "curie" else f"label {ref.value!r}"
        super().__init__(f"no node found for {shown}")


class Ambiguous(GraphError):
    """A label shared by several nodes; candidates are listed sorted."""

    def __init__(self, ref: NodeRef, candidates: list[str]):
        self.ref = ref
        self.candidates = sorted(candidates)
        super().__init__(f"label {ref.value!r} is ambiguous: {', '.join(self.candidates)}")


@dataclass(frozen=True)
class Synonym:
    value: str
    scope: SynonymScope


@dataclass
class Node:
    id: str
    label: str | None = None
    definition: str | None = None
    synonyms: list[Synonym] = field(default_factory=list)
    deprecated: bool = False
    replaced_by: str | None = None
    node_kind: str = "class"
    pending: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Edge:
    subject: str
    predicate: str
    object: str

    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, self.object)


class Graph:
    def __init__(self) -> None:
        self.nodes: dict[str, Node] = {}
        self.edges: set[Edge] = set()
        self._label_index: dict[str, set[str]] = {}

    def add_node(self, node: Node) -> None:
        if node.id in self.nodes:
            raise DuplicateNodeId(f"duplicate node id: {node.id}")
        self.nodes[node.id] = node
        if node.label is not None:
            self._label_index.setdefault(node.label, set()).add(node.id)

    def remove_node(self, node_id: str) -> None:
        node = self.nodes.pop(node_id)
        if node.label is not None:
            self._unindex(node.label, node_id)

    def set_label(self, node_id: str, label: str | None) -> None:
        node = self.nodes[node_id]
        if node.label is not None:
            self._unindex(node.label, node_id)
        node.label = label
        if label is not None:
            self._label_index.setdefault(label, set()).add(node_id)

    def _unindex(self, label: str, node_id: str) -> None:
        ids = self._label_index.get(label)
        if ids is not None:
            ids.discard(node_id)
            if not ids:
                del self._label_index[label]

    def nodes_with_label(self, label: str) -> set[str]:
        return set(self._label_index.get(label, ()))

    def add_edge(self, edge: Edge) -> None:
        if edge in self.edges:
            raise DuplicateEdge(f"duplicate edge: {edge.key()}")
        self.edges.add(edge)

    def remove_edge(self, edge: Edge) -> None:
        self.edges.remove(edge)

    def edges_about(self, node_id: str) -> list[Edge]:
        """Edges with the node as subject or object, in sorted order."""
        return sorted(
            (e for e in self.edges if e.subject == node_id or e.object == node_id),
            key=Edge.key,
        )

    def resolve(self, ref: NodeRef, *, require_curie_presence: bool = True) -> str:
        """Resolve a ref to a node id.

        CURIE refs return their value, requiring presence unless told
        otherwise. Label refs return the unique node with exactly that
        label (case-sensitive); NotFound and Ambiguous otherwise.
        """
        if ref.kind == "curie":
            if require_curie_presence and ref.value not in self.nodes:
                raise NotFound(ref)
            return ref.value
        ids = self._label_index.get(ref.value)
        if not ids:
            raise NotFound(ref)
        if len(ids) > 1:
            raise Ambiguous(ref, list(ids))
        return next(iter(ids))

    def copy(self) -> "Graph":
        out = Graph()
        for node in self.nodes.values():
            out.add_node(
                Node(
                    id=node.id,
                    label=node.label,
                    definition=node.definition,
                    synonyms=list(node.synonyms),
                    deprecated=node.deprecated,
                    replaced_by=node.replaced_by,
                    node_kind=node.node_kind,
                    pending=list(node.pending),
                )
            )
        out.edges = set(self.edges)
        return out

    def audit_label_index(self) -> list[str]:
        """Internal consistency check: the index must invert node labels exactly."""
        problems: list[str] = []
        expected: dict[str, set[str]] = {}
        for node in self.nodes.values():
            if node.label is not None:
                expected.setdefault(node.label, set()).add(node.id)
        if expected != self._label_index:
            only_index = set(self._label_index) - set(expected)
            only_nodes = set(expected) - set(self._label_index)
            problems.extend(f"stale index entry: {lbl!r}" for lbl in sorted(only_index))
            problems.extend(f"missing index entry: {lbl!r}" for lbl in sorted(only_nodes))
            for lbl in set(expected) & set(self._label_index):
                if expected[lbl] != self._label_index[lbl]:
                    problems.append(f"wrong ids for label {lbl!r}")
        return problems

    def lint(self) -> list[str]:
        """Non-fatal warnings: dangling edge endpoints, edges touching deprecated nodes."""
        warnings: list[str] = []
        for edge in sorted(self.edges, key=Edge.key):
            for role, endpoint in (("subject", edge.subject), ("object", edge.object)):
                if endpoint not in self.nodes:
                    warnings.append(f"edge {edge.key()} has dangling {role} {endpoint}")
                elif self.nodes[endpoint].deprecated:
                    warnings.append(f"edge {edge.key()} references deprecated node {endpoint}")
        return warnings


def graph_equal(a: Graph, b: Graph) -> bool:
    """Field-wise node equality (synonyms as multisets) plus edge-set equality."""
    if set(a.nodes) != set(b.nodes) or a.edges != b.edges:
        return False
    for node_id, left in a.nodes.items():
        right = b.nodes[node_id]
        if (
            left.label != right.label
            or left.definition != right.definition
            or left.deprecated != right.deprecated
            or left.replaced_by != right.replaced_by
            or left.node_kind != right.node_kind
            or sorted(left.synonyms, key=lambda s: (s.value, s.scope.value))
            != sorted(right.synonyms, key=lambda s: (s.value, s.scope.value))
            or left.pending != right.pending
        ):
            return False
    return True


def _as_text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def load_json(data: bytes | str) -> Graph:
    """Load a graph-JSON document; raises FormatError or DuplicateNodeId."""
    try:
        doc = json.loads(_as_text(data))
    except json.JSONDecodeError as err:
        raise FormatError("$", f"not valid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise FormatError("$", "document must be an object")
    graph = Graph()
    nodes = doc.get("nodes", [])
    if not isinstance(nodes, list):
        raise FormatError("nodes", "must be a list")
    for i, raw in enumerate(nodes):
        graph.add_node(_decode_node(raw, f"nodes[{i}]"))
    edges = doc.get("edges", [])
    if not isinstance(edges, list):
        raise FormatError("edges", "must be a list")
    for i, raw in enumerate(edges):
        path = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise FormatError(path, "must be an object")
        try:
            edge = Edge(subject=raw["sub"], predicate=raw["pred"], object=raw["obj"])
        except KeyError as err:
            raise FormatError(path, f"missing member {err.args[0]!r}") from None
        try:
            graph.add_edge(edge)
        except DuplicateEdge:
            raise FormatError(path, f"duplicate edge {edge.key()}") from None
    return graph


def _decode_node(raw: object, path: str) -> Node:
    if not isinstance(raw, dict):
        raise FormatError(path, "must be an object")
    if "id" not in raw or not isinstance(raw["id"], str):
        raise FormatError(path, "missing string member 'id'")
    if not is_curie(raw["id"]):
        raise FormatError(f"{path}.id", f"node id is not a CURIE: {raw['id']!r}")
    node = Node(id=raw["id"])
    label = raw.get("lbl")
    if label is not None:
        if not isinstance(label, str):
            raise FormatError(f"{path}.lbl", "must be a string")
        node.label = label
    kind = raw.get("type", "CLASS")
    if kind not in _TYPE_TO_KIND:
        raise FormatError(f"{path}.type", f"unknown node type {kind!r}")
    node.node_kind = _TYPE_TO_KIND[kind]
    meta = raw.get("meta")
    if meta is None:
        return node
    if not isinstance(meta, dict):
        raise FormatError(f"{path}.meta", "must be an object")
    definition = meta.get("definition")
    if definition is not None:
        if not isinstance(definition, dict) or not isinstance(definition.get("val"), str):
            raise FormatError(f"{path}.meta.definition", "must be an object with string 'val'")
        node.definition = definition["val"]
    for j, syn in enumerate(meta.get("synonyms", [])):
        spath = f"{path}.meta.synonyms[{j}]"
        if not isinstance(syn, dict) or not isinstance(syn.get("val"), str):
            raise FormatError(spath, "must be an object with string 'val'")
        pred = syn.get("pred", "hasRelatedSynonym")
        if pred not in PRED_TO_SCOPE:
            raise FormatError(f"{spath}.pred", f"unknown synonym scope {pred!r}")
        node.synonyms.append(Synonym(value=syn["val"], scope=PRED_TO_SCOPE[pred]))
    deprecated = meta.get("deprecated", False)
    if not isinstance(deprecated, bool):
        raise FormatError(f"{path}.meta.deprecated", "must be a boolean")
    node.deprecated = deprecated
    for j, bpv in enumerate(meta.get("basicPropertyValues", [])):
        bpath = f"{path}.meta.basicPropertyValues[{j}]"
        if not isinstance(bpv, dict) or not isinstance(bpv.get("val"), str):
            raise FormatError(bpath, "must be an object with string 'val'")
        pred = bpv.get("pred")
        if pred == REPLACED_BY_PRED:
            node.replaced_by = bpv["val"]
            node.deprecated = True  # replaced_by implies deprecation
        elif pred == PENDING_PRED:
            node.pending.append(bpv["val"])
        # other property values are not modeled and pass through unread
    return node


def save_json(graph: Graph) -> bytes:
    """Deterministic serialization; load(save(g)) is graph-equal to g."""
    nodes = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        out: dict = {"id": node.id}
        if node.label is not None:
            out["lbl"] = node.label
        out["type"] = _KIND_TO_TYPE[node.node_kind]
        meta: dict = {}
        if node.definition is not None:
            meta["definition"] = {"val": node.definition}
        if node.synonyms:
            meta["synonyms"] = [
                {"val": s.value, "pred": SCOPE_TO_PRED[s.scope]} for s in node.synonyms
            ]
        if node.deprecated:
            meta["deprecated"] = True
        bpvs = []
        if node.replaced_by is not None:
            bpvs.append({"pred": REPLACED_BY_PRED, "val": node.replaced_by})
        bpvs.extend({"pred": PENDING_PRED, "val": payload} for payload in node.pending)
        if bpvs:
            meta["basicPropertyValues"] = bpvs
        if meta:
            out["meta"] = meta
        nodes.append(out)
    edges = [
        {"sub": e.subject, "pred": e.predicate, "obj": e.object}
        for e in sorted(graph.edges, key=Edge.key)
    ]
    doc = {"nodes": nodes, "edges": edges}
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


_OBO_SCOPES = {"EXACT": SynonymScope.EXACT, "NARROW": SynonymScope.NARROW,
               "BROAD": SynonymScope.BROAD, "RELATED": SynonymScope.RELATED}


def load_obo(data: bytes | str) -> Graph:
    """Minimal reader for OBO flat files: Term stanzas only.

    Understood tags: id, name, def, synonym, is_a, relationship,
    is_obsolete, replaced_by. Everything else (including Typedef stanzas)
    is skipped. Writing OBO is deliberately unsupported.
    """
    graph = Graph()
    current: Node | None = None
    in_term = False
    edges: list[Edge] = []
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        line = raw.strip()
        if line.startswith("["):
            if current is not None:
                graph.add_node(current)
                current = None
            in_term = line == "[Term]"
            continue
        if not in_term or not line:
            continue
        if ":" not in line:
            raise FormatError(f"line {lineno}", f"not a tag-value pair: {line!r}")
        tag, value = line.split(":", 1)
        tag = tag.strip()
        value = value.strip()
        if tag == "id":
            if current is not None:
                graph.add_node(current)
            current = Node(id=value)
            continue
        if current is None:
            continue  # stanza content before its id tag
        if tag == "name":
            current.label = value
        elif tag == "def":
            text, _rest = _obo_quoted(value, f"line {lineno}")
            current.definition = text
        elif tag == "synonym":
            text, rest = _obo_quoted(value, f"line {lineno}")
            scope = SynonymScope.RELATED
            for word in rest.split():
                if word in _OBO_SCOPES:
                    scope = _OBO_SCOPES[word]
                    break
                if word.startswith("["):
                    break
            current.synonyms.append(Synonym(value=text, scope=scope))
        elif tag == "is_a":
            edges.append(Edge(subject=current.id, predicate="is_a", object=_obo_strip_comment(value)))
        elif tag == "relationship":
            parts = _obo_strip_comment(value).split()
            if len(parts) < 2:
                raise FormatError(f"line {lineno}", f"relationship needs predicate and target: {value!r}")
            edges.append(Edge(subject=current.id, predicate=parts[0], object=parts[1]))
        elif tag == "is_obsolete":
            current.deprecated = value.lower() == "true"
        elif tag == "replaced_by":
            current.replaced_by = _obo_strip_comment(value)
            current.deprecated = True
    if current is not None:
        graph.add_node(current)
    for edge in edges:
        graph.add_edge(edge)
    return graph


def _obo_strip_comment(value: str) -> str:
    return value.split(" !", 1)[0].strip()


def _obo_quoted(value: str, path: str) -> tuple[str, str]:
    """Split an OBO tag value into its leading quoted text and the remainder."""
    if not value.startswith('"'):
        raise FormatError(path, f"expected a double-quoted value: {value!r}")
    out: list[str] = []
    i = 1
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            out.append(value[i + 1])
            i += 2
            continue
        if ch == '"':
            return "".join(out), value[i + 1 :].strip()
        out.append(ch)
        i += 1
    raise FormatError(path, "unterminated quoted value")
