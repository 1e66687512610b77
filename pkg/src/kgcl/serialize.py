"""Change-set serialization: JSON, YAML, and a flat TSV form.

Every change becomes one flat record: an optional ``id``, a ``type`` tag
naming the variant, then the variant's own fields. Node refs are encoded
as bare CURIEs or single-quoted labels; keys are simply absent when a
field is absent. The tabular form is less expressive: values containing
tabs or newlines cannot be represented and are rejected.
"""

from __future__ import annotations

import json

import yaml

from .cnl import parse_ref_string, render_ref
from .errors import KgclError
from .model import (
    CHANGE_TYPES,
    FIELD_SCHEMA,
    Change,
    ChangeSet,
    NodeRef,
    SynonymScope,
)

# Accepted on input only; the canonical spelling is always emitted.
_TYPE_ALIASES = {"NodeObsolescence": "NodeObsoletion"}

TSV_COLUMNS = (
    "id",
    "type",
    "about_node",
    "old_value",
    "new_value",
    "subject",
    "predicate",
    "object",
    "replacement",
    "scope",
)


class SerializationError(KgclError):
    pass


class UnknownChangeType(SerializationError):
    def __init__(self, name: str, index: int | None = None):
        where = "" if index is None else f" (record {index})"
        super().__init__(f"unknown change type {name!r}{where}")


class MissingField(SerializationError):
    def __init__(self, name: str, index: int | None = None):
        where = "" if index is None else f" (record {index})"
        super().__init__(f"missing field {name!r}{where}")


class InvalidFieldValue(SerializationError):
    def __init__(self, name: str, message: str, index: int | None = None):
        where = "" if index is None else f" (record {index})"
        super().__init__(f"bad value for {name!r}: {message}{where}")


class TabularUnrepresentable(SerializationError):
    def __init__(self, name: str, value: str):
        super().__init__(
            f"value of {name!r} contains a tab or newline and cannot be written as TSV: {value!r}"
        )


class BadHeader(SerializationError):
    pass


def change_to_record(change: Change) -> dict:
    """Flatten a change to an ordered record; absent fields are omitted."""
    schema = FIELD_SCHEMA.get(type(change))
    if schema is None:
        raise UnknownChangeType(type(change).__name__)
    record: dict = {}
    if change.id is not None:
        record["id"] = change.id
    record["type"] = type(change).__name__
    for name, kind, _required in schema:
        value = getattr(change, name)
        if value is None:
            continue
        if kind == "ref":
            record[name] = render_ref(value)
        elif kind == "scope":
            record[name] = value.value
        else:
            record[name] = value
    return record


def record_to_change(record: dict, index: int | None = None) -> Change:
    if not isinstance(record, dict):
        raise InvalidFieldValue("record", "must be an object", index)
    type_name = record.get("type")
    if type_name is None:
        raise MissingField("type", index)
    type_name = _TYPE_ALIASES.get(type_name, type_name)
    cls = CHANGE_TYPES.get(type_name)
    if cls is None:
        raise UnknownChangeType(str(record.get("type")), index)
    kwargs: dict = {}
    for name, kind, required in FIELD_SCHEMA[cls]:
        value = record.get(name)
        if value is None or value == "":
            if required:
                raise MissingField(name, index)
            continue
        if not isinstance(value, str):
            raise InvalidFieldValue(name, "must be a string", index)
        if kind == "ref":
            kwargs[name] = parse_ref_string(value)
        elif kind == "scope":
            try:
                kwargs[name] = SynonymScope(value)
            except ValueError:
                raise InvalidFieldValue(name, f"not a synonym scope: {value!r}", index) from None
        else:
            kwargs[name] = value
    change_id = record.get("id")
    if change_id is not None:
        if not isinstance(change_id, str):
            raise InvalidFieldValue("id", "must be a string", index)
        kwargs["id"] = change_id
    return cls(**kwargs)


def changeset_to_records(changeset: ChangeSet) -> list[dict]:
    return [change_to_record(c) for c in changeset]


def records_to_changeset(records: object) -> ChangeSet:
    if not isinstance(records, list):
        raise InvalidFieldValue("document", "must be a list of records")
    return ChangeSet(tuple(record_to_change(r, i) for i, r in enumerate(records)))


def to_json(changeset: ChangeSet) -> bytes:
    text = json.dumps(changeset_to_records(changeset), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def from_json(data: bytes | str) -> ChangeSet:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise SerializationError(f"not valid JSON: {err}") from None
    return records_to_changeset(doc)


# characters YAML treats as line breaks; emitted raw they would be
# normalized to \n on reload, so such documents fall back to escaped output
_YAML_BREAK_CHARS = ("\x85", " ", " ")


def to_yaml(changeset: ChangeSet) -> bytes:
    records = changeset_to_records(changeset)
    allow_unicode = not any(
        ch in value for record in records for value in record.values() for ch in _YAML_BREAK_CHARS
    )
    text = yaml.safe_dump(
        records,
        sort_keys=False,
        allow_unicode=allow_unicode,
        default_flow_style=False,
    )
    if not records:
        text = "[]\n"
    return text.encode("utf-8")


def from_yaml(data: bytes | str) -> ChangeSet:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise SerializationError(f"not valid YAML: {err}") from None
    if doc is None:
        doc = []
    return records_to_changeset(doc)


def to_tsv(changeset: ChangeSet) -> bytes:
    lines = ["\t".join(TSV_COLUMNS)]
    for change in changeset:
        record = change_to_record(change)
        cells = []
        for column in TSV_COLUMNS:
            value = record.get(column, "")
            if any(ch in value for ch in ("\t", "\n", "\r")):
                raise TabularUnrepresentable(column, value)
            cells.append(value)
        lines.append("\t".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


def from_tsv(data: bytes | str) -> ChangeSet:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [line for line in text.split("\n") if line != ""]
    if not lines:
        raise BadHeader("empty document, expected a header row")
    header = tuple(lines[0].split("\t"))
    if header != TSV_COLUMNS:
        raise BadHeader(f"expected header {list(TSV_COLUMNS)}, found {list(header)}")
    changes = []
    for i, line in enumerate(lines[1:]):
        cells = line.split("\t")
        if len(cells) != len(TSV_COLUMNS):
            raise SerializationError(
                f"row {i} has {len(cells)} cells, expected {len(TSV_COLUMNS)}"
            )
        record = {col: cell for col, cell in zip(TSV_COLUMNS, cells) if cell != ""}
        changes.append(record_to_change(record, i))
    return ChangeSet(tuple(changes))


_WRITERS = {"json": to_json, "yaml": to_yaml, "tsv": to_tsv}
_READERS = {"json": from_json, "yaml": from_yaml, "tsv": from_tsv}


def write_format(changeset: ChangeSet, fmt: str) -> bytes:
    if fmt not in _WRITERS:
        raise SerializationError(f"unknown format {fmt!r}")
    return _WRITERS[fmt](changeset)


def read_format(data: bytes | str, fmt: str) -> ChangeSet:
    if fmt not in _READERS:
        raise SerializationError(f"unknown format {fmt!r}")
    return _READERS[fmt](data)


def pending_payload(change: Change) -> str:
    """Canonical compact encoding used when a change is stored on a node."""
    return json.dumps(change_to_record(change), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def change_from_payload(payload: str) -> Change:
    try:
        record = json.loads(payload)
    except json.JSONDecodeError as err:
        raise SerializationError(f"corrupt stored change: {err}") from None
    return record_to_change(record)
