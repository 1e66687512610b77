"""Controlled-natural-language parser and renderer for change commands.

One production per change variant, lowercase case-sensitive keywords:

    rename <ref> from <q> to <q>        rename <ref> to <q>
    obsolete <ref>                      obsolete <ref> with replacement <ref>
    delete node <ref>
    create <q>                          create node <ref> <q>
    replace synonym <q> with <q> for <ref>
    add definition <q> to <ref>
    remove definition for <ref>
    change definition of <ref> to <q>   change definition of <ref> from <q> to <q>
    create [exact|narrow|broad|related] synonym <q> for <ref>
    remove synonym <q> for <ref>
    create edge <ref> <ref> <ref>
    delete edge <ref> <ref> <ref>
    move <ref> from <ref> to <ref>
    change relationship between <ref> and <ref> from <ref> to <ref>

``<ref>`` is a bare CURIE, a single-quoted label, or a bare word of the
shape ``[A-Za-z_][A-Za-z0-9_]*`` (treated as a label). ``<q>`` is a
single-quoted string. Quoting uses ``\\'`` and ``\\\\`` escapes and captures
content verbatim: interior and leading whitespace is never trimmed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import KgclError
from .model import (
    BARE_WORD_RE,
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
    is_curie,
)

_SCOPE_WORDS = {s.value: s for s in SynonymScope}

_COMMAND_KEYWORDS = (
    "add",
    "change",
    "create",
    "delete",
    "move",
    "obsolete",
    "remove",
    "rename",
    "replace",
)


@dataclass(frozen=True)
class SourceSpan:
    line: int  # 1-based
    column: int  # 1-based
    length: int = 0


class ParseError(KgclError):
    """A command fragment that matches no production."""

    def __init__(self, span: SourceSpan, expected: list[str], found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(
            f"line {span.line}, column {span.column}: expected {' or '.join(expected)}, found {found}"
        )

    def at_line(self, line: int, column_offset: int = 0) -> "ParseError":
        """The same error re-anchored to a position inside a larger document."""
        column = self.span.column + (column_offset if self.span.line == 1 else 0)
        line = line + self.span.line - 1
        return ParseError(SourceSpan(line, column, self.span.length), self.expected, self.found)


class DocumentParseError(KgclError):
    """Aggregate of all per-line parse errors in a multi-command document."""

    def __init__(self, errors: list[ParseError], changes: ChangeSet):
        self.errors = errors
        self.changes = changes  # changes from the lines that did parse
        super().__init__("; ".join(str(e) for e in errors))


class UnrenderableChange(KgclError):
    """A change object missing a field the grammar cannot express without."""


def escape_label(text: str) -> str:
    return text.replace("\\", "\\\\").replace("'", "\\'")


def quote(text: str) -> str:
    return f"'{escape_label(text)}'"


def render_ref(ref: NodeRef) -> str:
    """Canonical form of a ref: CURIEs bare, labels single-quoted."""
    if ref.kind == "curie":
        return ref.value
    return quote(ref.value)


def parse_ref_string(text: str) -> NodeRef:
    """Decode a serialized ref: quoted means label, CURIE shape means CURIE.

    Unquoted non-CURIE text is accepted leniently as a label.
    """
    if text.startswith("'") and text.endswith("'") and len(text) >= 2:
        return NodeRef.label(_unescape(text[1:-1]))
    if is_curie(text):
        return NodeRef.curie(text)
    return NodeRef.label(text)


def _unescape(text: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text) and text[i + 1] in ("'", "\\"):
            out.append(text[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


@dataclass(frozen=True)
class _Token:
    kind: str  # "word" | "quoted"
    value: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in (" ", "\t"):
            i += 1
            col += 1
            continue
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        start_line, start_col = line, col
        if ch == "'":
            start_i = i
            i += 1
            col += 1
            value: list[str] = []
            closed = False
            while i < n:
                ch = text[i]
                if ch == "\\" and i + 1 < n and text[i + 1] in ("'", "\\"):
                    value.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                if ch == "'":
                    i += 1
                    col += 1
                    closed = True
                    break
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
                value.append(ch)
                i += 1
            if not closed:
                raise ParseError(
                    SourceSpan(start_line, start_col, i - start_i),
                    ["closing quote"],
                    "end of input",
                )
            tokens.append(
                _Token("quoted", "".join(value), SourceSpan(start_line, start_col, col - start_col))
            )
        else:
            j = i
            while j < n and text[j] not in (" ", "\t", "\n", "'"):
                j += 1
            word = text[i:j]
            tokens.append(_Token("word", word, SourceSpan(start_line, start_col, len(word))))
            col += j - i
            i = j
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self._end_span = SourceSpan(1, 1, 0)
        if self.tokens:
            last = self.tokens[-1].span
            self._end_span = SourceSpan(last.line, last.column + last.length, 0)

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _fail(self, expected: list[str]) -> ParseError:
        tok = self.peek()
        if tok is None:
            return ParseError(self._end_span, expected, "end of command")
        shown = quote(tok.value) if tok.kind == "quoted" else tok.value
        return ParseError(tok.span, expected, shown)

    def take_word(self, *keywords: str) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "word" or (keywords and tok.value not in keywords):
            raise self._fail(list(keywords) or ["a word"])
        self.pos += 1
        return tok.value

    def take_quoted(self) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "quoted":
            raise self._fail(["a quoted string"])
        self.pos += 1
        return tok.value

    def take_ref(self) -> NodeRef:
        tok = self.peek()
        if tok is None:
            raise self._fail(["a CURIE", "a quoted label"])
        if tok.kind == "quoted":
            self.pos += 1
            return NodeRef.label(tok.value)
        if is_curie(tok.value):
            self.pos += 1
            return NodeRef.curie(tok.value)
        if BARE_WORD_RE.match(tok.value):
            self.pos += 1
            return NodeRef.label(tok.value)
        raise self._fail(["a CURIE", "a quoted label"])

    def at_word(self, keyword: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "word" and tok.value == keyword

    def expect_end(self) -> None:
        if self.peek() is not None:
            raise self._fail(["end of command"])


def parse_command(text: str) -> Change:
    """Parse one command into a change object.

    Raises ParseError when the text matches no production or a quote is
    left unterminated.
    """
    p = _Parser(text)
    tok = p.peek()
    if tok is None:
        raise ParseError(SourceSpan(1, 1, 0), ["a command"], "end of command")
    if tok.kind != "word" or tok.value not in _COMMAND_KEYWORDS:
        raise p._fail(list(_COMMAND_KEYWORDS))

    head = p.take_word()
    change: Change
    if head == "rename":
        about = p.take_ref()
        if p.at_word("from"):
            p.take_word("from")
            old = p.take_quoted()
            p.take_word("to")
            new = p.take_quoted()
            change = NodeRename(about_node=about, old_value=old, new_value=new)
        else:
            p.take_word("to")
            change = NodeRename(about_node=about, new_value=p.take_quoted())
    elif head == "obsolete":
        about = p.take_ref()
        replacement = None
        if p.at_word("with"):
            p.take_word("with")
            p.take_word("replacement")
            replacement = p.take_ref()
        change = NodeObsoletion(about_node=about, replacement=replacement)
    elif head == "delete":
        what = p.take_word("node", "edge")
        if what == "node":
            change = NodeDeletion(about_node=p.take_ref())
        else:
            change = EdgeDeletion(subject=p.take_ref(), predicate=p.take_ref(), object=p.take_ref())
    elif head == "create":
        change = _parse_create(p)
    elif head == "replace":
        p.take_word("synonym")
        old = p.take_quoted()
        p.take_word("with")
        new = p.take_quoted()
        p.take_word("for")
        change = SynonymReplacement(about_node=p.take_ref(), old_value=old, new_value=new)
    elif head == "add":
        p.take_word("definition")
        value = p.take_quoted()
        p.take_word("to")
        change = NewTextDefinition(about_node=p.take_ref(), new_value=value)
    elif head == "remove":
        what = p.take_word("definition", "synonym")
        if what == "definition":
            p.take_word("for")
            change = RemoveTextDefinition(about_node=p.take_ref())
        else:
            value = p.take_quoted()
            p.take_word("for")
            change = RemoveSynonym(about_node=p.take_ref(), old_value=value)
    elif head == "change":
        change = _parse_change(p)
    else:  # move
        about = p.take_ref()
        p.take_word("from")
        old = p.take_ref()
        p.take_word("to")
        new = p.take_ref()
        change = NodeMove(about_node=about, old_value=old, new_value=new)
    p.expect_end()
    return change


def _parse_create(p: _Parser) -> Change:
    tok = p.peek()
    if tok is None:
        raise p._fail(["a quoted label", "node", "edge", "synonym"])
    if tok.kind == "quoted":
        return ClassCreation(new_value=p.take_quoted())
    if tok.value == "node":
        p.take_word("node")
        about = p.take_ref()
        return ClassCreation(about_node=about, new_value=p.take_quoted())
    if tok.value == "edge":
        p.take_word("edge")
        return EdgeCreation(subject=p.take_ref(), predicate=p.take_ref(), object=p.take_ref())
    scope: SynonymScope | None = None
    if tok.value in _SCOPE_WORDS:
        scope = _SCOPE_WORDS[p.take_word()]
    p.take_word("synonym")
    value = p.take_quoted()
    p.take_word("for")
    return NewSynonym(about_node=p.take_ref(), new_value=value, scope=scope)


def _parse_change(p: _Parser) -> Change:
    what = p.take_word("definition", "relationship")
    if what == "definition":
        p.take_word("of")
        about = p.take_ref()
        if p.at_word("from"):
            p.take_word("from")
            old = p.take_quoted()
            p.take_word("to")
            return NodeTextDefinitionChange(about_node=about, old_value=old, new_value=p.take_quoted())
        p.take_word("to")
        return NodeTextDefinitionChange(about_node=about, new_value=p.take_quoted())
    p.take_word("between")
    subject = p.take_ref()
    p.take_word("and")
    obj = p.take_ref()
    p.take_word("from")
    old = p.take_ref()
    p.take_word("to")
    new = p.take_ref()
    return PredicateChange(subject=subject, object=obj, old_value=old, new_value=new)


def parse_document(text: str) -> ChangeSet:
    """Parse a multi-line document, one command per line.

    Blank lines and lines whose first non-space character is ``#`` are
    ignored. Parsing continues past bad lines; if any line failed, a
    DocumentParseError carrying every error (and the changes that did
    parse) is raised.
    """
    changes: list[Change] = []
    errors: list[ParseError] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            changes.append(parse_command(line))
        except ParseError as err:
            errors.append(err.at_line(lineno))
    changeset = ChangeSet(tuple(changes))
    if errors:
        raise DocumentParseError(errors, changeset)
    return changeset


def _require(change: Change, name: str) -> object:
    value = getattr(change, name)
    if value is None or value == "":
        raise UnrenderableChange(f"{type(change).__name__} cannot be rendered without {name}")
    return value


def render_command(change: Change) -> str:
    """Render a change to its canonical command form.

    The canonical form uses single spaces, bare CURIEs, and quoted labels;
    parsing it back reconstructs an equal change (ids excepted). A
    NodeMove's explicit predicate has no slot in the move production and
    is omitted; apply-time inference recovers it when the old parent edge
    is unique.
    """
    if isinstance(change, NodeRename):
        about = render_ref(change.about_node)
        new = quote(str(_require(change, "new_value")))
        if change.old_value is None:
            return f"rename {about} to {new}"
        return f"rename {about} from {quote(change.old_value)} to {new}"
    if isinstance(change, NodeObsoletion):
        out = f"obsolete {render_ref(change.about_node)}"
        if change.replacement is not None:
            out += f" with replacement {render_ref(change.replacement)}"
        return out
    if isinstance(change, NodeDeletion):
        return f"delete node {render_ref(change.about_node)}"
    if isinstance(change, ClassCreation):
        label = quote(str(_require(change, "new_value")))
        if change.about_node is None:
            return f"create {label}"
        return f"create node {render_ref(change.about_node)} {label}"
    if isinstance(change, SynonymReplacement):
        return (
            f"replace synonym {quote(str(_require(change, 'old_value')))} "
            f"with {quote(str(_require(change, 'new_value')))} for {render_ref(change.about_node)}"
        )
    if isinstance(change, NewTextDefinition):
        return f"add definition {quote(str(_require(change, 'new_value')))} to {render_ref(change.about_node)}"
    if isinstance(change, RemoveTextDefinition):
        return f"remove definition for {render_ref(change.about_node)}"
    if isinstance(change, NodeTextDefinitionChange):
        about = render_ref(change.about_node)
        new = quote(str(_require(change, "new_value")))
        if change.old_value is None:
            return f"change definition of {about} to {new}"
        return f"change definition of {about} from {quote(change.old_value)} to {new}"
    if isinstance(change, NewSynonym):
        scope = f"{change.scope.value} " if change.scope is not None else ""
        return (
            f"create {scope}synonym {quote(str(_require(change, 'new_value')))} "
            f"for {render_ref(change.about_node)}"
        )
    if isinstance(change, RemoveSynonym):
        return f"remove synonym {quote(str(_require(change, 'old_value')))} for {render_ref(change.about_node)}"
    if isinstance(change, EdgeCreation):
        return f"create edge {render_ref(change.subject)} {render_ref(change.predicate)} {render_ref(change.object)}"
    if isinstance(change, EdgeDeletion):
        return f"delete edge {render_ref(change.subject)} {render_ref(change.predicate)} {render_ref(change.object)}"
    if isinstance(change, NodeMove):
        return (
            f"move {render_ref(change.about_node)} from {render_ref(change.old_value)} "
            f"to {render_ref(change.new_value)}"
        )
    if isinstance(change, PredicateChange):
        return (
            f"change relationship between {render_ref(change.subject)} and {render_ref(change.object)} "
            f"from {render_ref(change.old_value)} to {render_ref(change.new_value)}"
        )
    raise UnrenderableChange(f"unknown change type: {type(change).__name__}")


def render_document(changeset: ChangeSet) -> str:
    """One canonical command per line; empty set renders to an empty string."""
    if not len(changeset):
        return ""
    return "\n".join(render_command(c) for c in changeset) + "\n"
