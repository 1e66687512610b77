from __future__ import annotations

import pytest

from kgcl.graph import Edge, Graph, Node, Synonym
from kgcl.model import SynonymScope


def build_graph(nodes: list[Node], edges: list[tuple[str, str, str]] | None = None) -> Graph:
    g = Graph()
    for node in nodes:
        g.add_node(node)
    for sub, pred, obj in edges or []:
        g.add_edge(Edge(subject=sub, predicate=pred, object=obj))
    return g


@pytest.fixture
def move_before() -> Graph:
    """Four nodes; E sits under C."""
    return build_graph(
        [
            Node(id="EX:A", label="A"),
            Node(id="EX:B", label="B"),
            Node(id="EX:C", label="C"),
            Node(id="EX:E", label="E"),
        ],
        [("EX:B", "is_a", "EX:A"), ("EX:C", "is_a", "EX:A"), ("EX:E", "is_a", "EX:C")],
    )


@pytest.fixture
def move_after() -> Graph:
    """The same graph after moving E under B."""
    return build_graph(
        [
            Node(id="EX:A", label="A"),
            Node(id="EX:B", label="B"),
            Node(id="EX:C", label="C"),
            Node(id="EX:E", label="E"),
        ],
        [("EX:B", "is_a", "EX:A"), ("EX:C", "is_a", "EX:A"), ("EX:E", "is_a", "EX:B")],
    )


@pytest.fixture
def mondo_graph() -> Graph:
    """A single disease term, as it would be loaded from the ontology file."""
    return build_graph(
        [
            Node(
                id="MONDO:0859190",
                label="neurodevelopmental-craniofacial syndrome with variable renal and cardiac abnormalities",
            )
        ]
    )


@pytest.fixture
def anatomy_graph() -> Graph:
    """A handful of labeled terms used by the apply tests."""
    return build_graph(
        [
            Node(id="UBERON:0000948", label="heart", definition="hollow muscular organ"),
            Node(id="UBERON:0002107", label="liver"),
            Node(id="UBERON:0002116", label="ileum", synonyms=[Synonym("intestine part", SynonymScope.RELATED)]),
            Node(id="UBERON:0000955", label="brain"),
        ],
        [("UBERON:0002107", "part_of", "UBERON:0000948")],
    )
