from __future__ import annotations

from kgcl.model import ChangeSet, NodeObsoletion, NodeRef, NodeRename
from kgcl.report import write_changeset_report


def test_report_writes_tsv_and_figure(tmp_path):
    cs = ChangeSet(
        (
            NodeRename(about_node=NodeRef.curie("EX:1"), old_value="a", new_value="b"),
            NodeObsoletion(about_node=NodeRef.curie("EX:2")),
            NodeObsoletion(about_node=NodeRef.curie("EX:3")),
        )
    )
    paths = write_changeset_report(cs, tmp_path / "report")
    tsv, png = paths
    assert tsv.name == "changes.tsv"
    lines = tsv.read_text().splitlines()
    assert len(lines) == 4  # header + three rows
    assert png.name == "changes_by_type.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_of_empty_changeset(tmp_path):
    tsv, png = write_changeset_report(ChangeSet(), tmp_path)
    assert tsv.read_text().count("\n") == 1
    assert png.exists()
