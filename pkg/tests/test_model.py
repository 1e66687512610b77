from __future__ import annotations

import pytest
from hypothesis import given

import strategies as sts
from kgcl.model import (
    CHANGE_TYPES,
    EDGE_CHANGE,
    NODE_CHANGE,
    ChangeSet,
    ClassCreation,
    EdgeCreation,
    NewSynonym,
    NodeMove,
    NodeObsoletion,
    NodeRef,
    NodeRename,
    PredicateChange,
    SynonymScope,
    classify,
    is_curie,
    validate,
    validate_changeset,
)


def test_classify_groups():
    rename = NodeRename(about_node=NodeRef.curie("EX:1"), new_value="x")
    assert classify(rename) == NODE_CHANGE
    edge = EdgeCreation(
        subject=NodeRef.curie("EX:1"), predicate=NodeRef.label("is_a"), object=NodeRef.curie("EX:2")
    )
    assert classify(edge) == EDGE_CHANGE
    move = NodeMove(
        about_node=NodeRef.curie("EX:1"),
        old_value=NodeRef.curie("EX:2"),
        new_value=NodeRef.curie("EX:3"),
    )
    assert classify(move) == EDGE_CHANGE


def test_classify_rejects_non_changes():
    with pytest.raises(TypeError):
        classify("rename EX:1 to 'x'")  # type: ignore[arg-type]


@given(sts.changes())
def test_classify_total_over_generated_changes(change):
    assert classify(change) in (NODE_CHANGE, EDGE_CHANGE)


def test_fourteen_variants():
    assert len(CHANGE_TYPES) == 14


def test_validate_accepts_well_formed_rename():
    change = NodeRename(
        about_node=NodeRef.curie("ENVO:01000575"), old_value="wax", new_value="oil"
    )
    assert validate(change) == []


def test_validate_rejects_equal_predicates():
    change = PredicateChange(
        subject=NodeRef.label("stomach"),
        object=NodeRef.label("digestive system"),
        old_value=NodeRef.label("is_a"),
        new_value=NodeRef.label("is_a"),
    )
    assert len(validate(change)) == 1


def test_validate_rejects_equal_move_parents():
    change = NodeMove(
        about_node=NodeRef.curie("EX:1"),
        old_value=NodeRef.curie("EX:2"),
        new_value=NodeRef.curie("EX:2"),
    )
    assert validate(change) != []


def test_validate_rejects_malformed_curie():
    change = NodeObsoletion(about_node=NodeRef.curie("no-colon"))
    assert len(validate(change)) == 1


def test_validate_rejects_empty_strings():
    assert validate(NodeRename(about_node=NodeRef.curie("EX:1"), new_value="")) != []
    assert validate(ClassCreation(new_value=None)) != []  # type: ignore[arg-type]
    assert validate(NewSynonym(about_node=NodeRef.label(""), new_value="x")) != []


def test_validate_scope_type():
    ok = NewSynonym(about_node=NodeRef.curie("EX:1"), new_value="x", scope=SynonymScope.EXACT)
    assert validate(ok) == []
    bad = NewSynonym(about_node=NodeRef.curie("EX:1"), new_value="x", scope="exact")  # type: ignore[arg-type]
    assert validate(bad) != []


def test_curie_shape():
    assert is_curie("UBERON:0002398")
    assert is_curie("RO:0002202")
    assert is_curie("obo.foo-1:bar.2-x")
    assert not is_curie("no-colon")
    assert not is_curie(":local")
    assert not is_curie("pre fix:x")
    assert not is_curie("prefix:")


def test_changeset_duplicate_ids_flagged():
    a = NodeObsoletion(about_node=NodeRef.curie("EX:1"), id="c1")
    b = NodeObsoletion(about_node=NodeRef.curie("EX:2"), id="c1")
    violations = validate_changeset(ChangeSet((a, b)))
    assert any("duplicate id" in v for v in violations)


def test_changeset_preserves_order():
    a = NodeObsoletion(about_node=NodeRef.curie("EX:1"))
    b = NodeObsoletion(about_node=NodeRef.curie("EX:2"))
    cs = ChangeSet((a, b))
    assert list(cs) == [a, b]
    assert cs[1] is b
    assert len(cs) == 2


@given(sts.changes())
def test_generated_changes_are_valid(change):
    assert validate(change) == []
