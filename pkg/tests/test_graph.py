from __future__ import annotations

from pathlib import Path

import pytest

from conftest import build_graph
from kgcl.graph import (
    Ambiguous,
    DuplicateEdge,
    DuplicateNodeId,
    Edge,
    FormatError,
    Graph,
    Node,
    NotFound,
    Synonym,
    graph_equal,
    load_json,
    load_obo,
    save_json,
)
from kgcl.model import NodeRef, SynonymScope

DATA = Path(__file__).parent / "data"


def golden_graph() -> Graph:
    return build_graph(
        [
            Node(id="EX:A", label="A"),
            Node(id="EX:B", label="B"),
            Node(
                id="EX:C",
                label="C",
                definition="third letter",
                synonyms=[Synonym("gamma", SynonymScope.EXACT)],
            ),
            Node(id="EX:E", label="E", deprecated=True, replaced_by="EX:B"),
        ],
        [("EX:B", "is_a", "EX:A"), ("EX:C", "is_a", "EX:A"), ("EX:E", "is_a", "EX:C")],
    )


class TestLoad:
    def test_minimal_document(self):
        g = load_json(b'{"nodes":[],"edges":[]}')
        assert g.nodes == {} and g.edges == set()

    def test_missing_sections_default_empty(self):
        assert load_json(b"{}").nodes == {}

    def test_field_mapping(self):
        g = load_json(
            b'{"nodes":[{"id":"EX:1","lbl":"one","type":"CLASS","meta":{'
            b'"definition":{"val":"the first"},'
            b'"synonyms":[{"val":"uno","pred":"hasNarrowSynonym"}],'
            b'"deprecated":true,'
            b'"basicPropertyValues":[{"pred":"term_replaced_by","val":"EX:2"}]}}],"edges":[]}'
        )
        node = g.nodes["EX:1"]
        assert node.label == "one"
        assert node.definition == "the first"
        assert node.synonyms == [Synonym("uno", SynonymScope.NARROW)]
        assert node.deprecated is True
        assert node.replaced_by == "EX:2"

    def test_replaced_by_implies_deprecated(self):
        g = load_json(
            b'{"nodes":[{"id":"EX:1","meta":{"basicPropertyValues":'
            b'[{"pred":"term_replaced_by","val":"EX:2"}]}}],"edges":[]}'
        )
        assert g.nodes["EX:1"].deprecated is True

    def test_pending_payloads_loaded_in_order(self):
        g = load_json(
            b'{"nodes":[{"id":"EX:1","meta":{"basicPropertyValues":['
            b'{"pred":"pending_change","val":"p1"},{"pred":"pending_change","val":"p2"}]}}]}'
        )
        assert g.nodes["EX:1"].pending == ["p1", "p2"]

    def test_move_fixture_shape(self, move_before):
        assert len(move_before.nodes) == 4
        assert len(move_before.edges) == 3

    def test_duplicate_node_id(self):
        with pytest.raises(DuplicateNodeId):
            load_json(b'{"nodes":[{"id":"EX:1"},{"id":"EX:1"}],"edges":[]}')

    def test_format_error_has_path(self):
        with pytest.raises(FormatError) as exc:
            load_json(b'{"nodes":[{"id":"EX:1","meta":{"synonyms":[{"val":"x","pred":"bogus"}]}}]}')
        assert "nodes[0].meta.synonyms[0].pred" in str(exc.value)

    def test_duplicate_edge_rejected(self):
        with pytest.raises(FormatError):
            load_json(
                b'{"nodes":[],"edges":[{"sub":"A:1","pred":"p","obj":"B:1"},'
                b'{"sub":"A:1","pred":"p","obj":"B:1"}]}'
            )


class TestSave:
    def test_golden(self):
        assert save_json(golden_graph()) == (DATA / "small_graph.golden.json").read_bytes()

    def test_empty_graph_canonical(self):
        assert save_json(Graph()) == b'{\n  "nodes": [],\n  "edges": []\n}\n'

    def test_load_save_identity(self):
        data = (DATA / "small_graph.golden.json").read_bytes()
        assert graph_equal(load_json(data), golden_graph())

    def test_save_load_save_byte_fixpoint(self):
        shuffled = (
            b'{"edges":[{"sub":"EX:E","pred":"is_a","obj":"EX:C"},'
            b'{"sub":"EX:B","pred":"is_a","obj":"EX:A"}],'
            b'"nodes":[{"id":"EX:E"},{"id":"EX:A","lbl":"A"}]}'
        )
        once = save_json(load_json(shuffled))
        assert save_json(load_json(once)) == once

    def test_pending_round_trip(self):
        g = Graph()
        g.add_node(Node(id="EX:1", pending=['{"type":"NodeObsoletion","about_node":"EX:1"}']))
        again = load_json(save_json(g))
        assert graph_equal(g, again)


class TestResolve:
    def test_label_resolution(self, anatomy_graph):
        assert anatomy_graph.resolve(NodeRef.label("heart")) == "UBERON:0000948"

    def test_curie_resolution(self, anatomy_graph):
        assert anatomy_graph.resolve(NodeRef.curie("UBERON:0002107")) == "UBERON:0002107"

    def test_curie_missing(self, anatomy_graph):
        with pytest.raises(NotFound):
            anatomy_graph.resolve(NodeRef.curie("UBERON:9999999"))

    def test_curie_missing_allowed_when_presence_not_required(self, anatomy_graph):
        assert (
            anatomy_graph.resolve(NodeRef.curie("UBERON:9999999"), require_curie_presence=False)
            == "UBERON:9999999"
        )

    def test_label_missing(self, anatomy_graph):
        with pytest.raises(NotFound):
            anatomy_graph.resolve(NodeRef.label("spleen"))

    def test_label_ambiguous_lists_candidates(self):
        g = build_graph([Node(id="EX:1", label="trachea"), Node(id="EX:2", label="trachea")])
        with pytest.raises(Ambiguous) as exc:
            g.resolve(NodeRef.label("trachea"))
        assert exc.value.candidates == ["EX:1", "EX:2"]

    def test_label_matching_is_exact(self, anatomy_graph):
        with pytest.raises(NotFound):
            anatomy_graph.resolve(NodeRef.label("Heart"))
        with pytest.raises(NotFound):
            anatomy_graph.resolve(NodeRef.label(" heart"))


class TestGraphEqual:
    def test_reflexive(self, anatomy_graph):
        assert graph_equal(anatomy_graph, anatomy_graph.copy())

    def test_synonym_scope_matters(self):
        a = build_graph([Node(id="EX:1", synonyms=[Synonym("x", SynonymScope.EXACT)])])
        b = build_graph([Node(id="EX:1", synonyms=[Synonym("x", SynonymScope.BROAD)])])
        assert not graph_equal(a, b)

    def test_synonym_order_does_not_matter(self):
        s1 = Synonym("x", SynonymScope.EXACT)
        s2 = Synonym("y", SynonymScope.BROAD)
        a = build_graph([Node(id="EX:1", synonyms=[s1, s2])])
        b = build_graph([Node(id="EX:1", synonyms=[s2, s1])])
        assert graph_equal(a, b)

    def test_source_order_does_not_matter(self):
        x = b'{"nodes":[{"id":"A:1"},{"id":"B:1"}],"edges":[{"sub":"A:1","pred":"p","obj":"B:1"}]}'
        y = b'{"nodes":[{"id":"B:1"},{"id":"A:1"}],"edges":[{"sub":"A:1","pred":"p","obj":"B:1"}]}'
        assert graph_equal(load_json(x), load_json(y))

    def test_pending_is_ordered(self):
        a = build_graph([Node(id="EX:1", pending=["p1", "p2"])])
        b = build_graph([Node(id="EX:1", pending=["p2", "p1"])])
        assert not graph_equal(a, b)


class TestInvariants:
    def test_duplicate_edge_insert_rejected(self, anatomy_graph):
        with pytest.raises(DuplicateEdge):
            anatomy_graph.add_edge(Edge("UBERON:0002107", "part_of", "UBERON:0000948"))

    def test_label_index_audit_after_mutations(self, anatomy_graph):
        anatomy_graph.set_label("UBERON:0000955", "encephalon")
        anatomy_graph.remove_node("UBERON:0002116")
        anatomy_graph.add_node(Node(id="EX:NEW", label="brain"))
        assert anatomy_graph.audit_label_index() == []

    def test_lint_dangling_and_deprecated(self):
        g = build_graph(
            [Node(id="EX:1", label="one"), Node(id="EX:2", label="two", deprecated=True)],
            [("EX:1", "is_a", "EX:2"), ("EX:1", "is_a", "EX:GONE")],
        )
        warnings = g.lint()
        assert any("dangling object EX:GONE" in w for w in warnings)
        assert any("deprecated node EX:2" in w for w in warnings)


class TestObo:
    OBO = """format-version: 1.2

[Term]
id: MONDO:0859190
name: neurodevelopmental-craniofacial syndrome with variable renal and cardiac abnormalities
def: "A disease." [PMID:1]
synonym: " ZMYM2-related neurodevelopmental disorder with multiple anomalies" EXACT []
xref: OMIM:619522

[Term]
id: MONDO:0000001
name: disease
is_a: MONDO:0859190 ! a comment
relationship: part_of MONDO:0859190 ! another

[Term]
id: MONDO:0000002
name: gone
is_obsolete: true
replaced_by: MONDO:0000001

[Typedef]
id: part_of
name: part of
"""

    def test_term_stanzas(self):
        g = load_obo(self.OBO)
        assert set(g.nodes) == {"MONDO:0859190", "MONDO:0000001", "MONDO:0000002"}
        node = g.nodes["MONDO:0859190"]
        assert node.definition == "A disease."
        assert node.synonyms == [
            Synonym(
                " ZMYM2-related neurodevelopmental disorder with multiple anomalies",
                SynonymScope.EXACT,
            )
        ]

    def test_edges_from_is_a_and_relationship(self):
        g = load_obo(self.OBO)
        assert Edge("MONDO:0000001", "is_a", "MONDO:0859190") in g.edges
        assert Edge("MONDO:0000001", "part_of", "MONDO:0859190") in g.edges

    def test_obsolete_and_replaced(self):
        g = load_obo(self.OBO)
        node = g.nodes["MONDO:0000002"]
        assert node.deprecated is True
        assert node.replaced_by == "MONDO:0000001"

    def test_typedef_skipped(self):
        assert "part_of" not in load_obo(self.OBO).nodes

    def test_escaped_quote_in_def(self):
        g = load_obo('[Term]\nid: X:1\ndef: "say \\"hi\\"" []\n')
        assert g.nodes["X:1"].definition == 'say "hi"'
