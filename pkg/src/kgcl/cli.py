"""Command-line front end: parse, apply, diff, and extract.

Exit codes: 0 success, 1 when a change failed or the input had parse
errors, 2 for usage and I/O problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import apply as apply_engine
from . import serialize
from .cnl import DocumentParseError, ParseError, parse_command, parse_document, render_document
from .diff import DiffOptions, diff as compute_diff, format_diff
from .errors import KgclError
from .graph import Graph, GraphError, load_json, load_obo, save_json
from .model import Change, ChangeSet
from .protocol import extract as extract_changes

CHANGE_FORMATS = ("yaml", "json", "tsv", "cnl")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgcl",
        description="Work with knowledge-graph change commands: parse, apply, diff, extract.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", help="parse commands and print the change set")
    p_parse.add_argument("commands", nargs="*", help="command strings; stdin is read when absent")
    p_parse.add_argument("--kgcl-file", help="file of commands, one per line ('-' for stdin)")
    p_parse.add_argument("--format", choices=CHANGE_FORMATS, default="yaml")

    p_apply = sub.add_parser("apply", help="apply changes to a graph file")
    p_apply.add_argument("-i", "--input", required=True, help="input graph file")
    p_apply.add_argument("-o", "--output", required=True, help="output graph file")
    p_apply.add_argument(
        "-k", "--kgcl", action="append", default=[], metavar="COMMAND", help="a command to apply (repeatable)"
    )
    p_apply.add_argument("--kgcl-file", help="file of commands, one per line ('-' for stdin)")
    p_apply.add_argument("--changes", help="change-set file (.json/.yaml/.tsv)")
    p_apply.add_argument("--provisional", action="store_true", help="store changes as pending instead of applying")
    p_apply.add_argument("--pending", choices=["all"], help="apply the pending changes stored in the graph")
    p_apply.add_argument("--auto-id-prefix", default="KGCL")
    p_apply.add_argument("--auto-id-width", type=int, default=7)
    p_apply.add_argument("--on-error", choices=["halt", "skip"], default="halt")
    p_apply.add_argument("--report", help="write the apply report as JSON to this path")
    p_apply.add_argument("--input-format", choices=["json", "obo"], help="override extension sniffing")

    p_diff = sub.add_parser("diff", help="diff two graph files")
    p_diff.add_argument("--left", required=True)
    p_diff.add_argument("--right", required=True)
    p_diff.add_argument("--format", choices=("cnl", "json", "yaml", "tsv"), default="cnl")
    p_diff.add_argument("--no-coalesce-moves", action="store_true")
    p_diff.add_argument("--no-coalesce-predicate-changes", action="store_true")
    p_diff.add_argument("--no-coalesce-synonym-replacements", action="store_true")
    p_diff.add_argument("--fail-on-diff", action="store_true", help="exit 1 when the graphs differ")
    p_diff.add_argument("-o", "--output", help="write the diff here instead of stdout")
    p_diff.add_argument("--input-format", choices=["json", "obo"], help="override extension sniffing")
    p_diff.add_argument(
        "--report-dir",
        help="also write a report: the diff as TSV plus a change-count figure",
    )

    p_extract = sub.add_parser("extract", help="extract commands from curation-request text")
    p_extract.add_argument("file", nargs="?", help="issue text file; stdin is read when absent")
    p_extract.add_argument("--format", choices=CHANGE_FORMATS, default="yaml")
    p_extract.add_argument("--strict", action="store_true", help="any unparseable bullet is fatal")
    p_extract.add_argument("--require-trigger", action="store_true", help="exit 1 when no trigger line is present")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {
        "parse": cmd_parse,
        "apply": cmd_apply,
        "diff": cmd_diff,
        "extract": cmd_extract,
    }[args.command]
    try:
        return handler(args)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except KgclError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


def _emit(data: bytes, path: str | None) -> None:
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _write_changeset(changeset: ChangeSet, fmt: str, path: str | None = None) -> None:
    if fmt == "cnl":
        _emit(render_document(changeset).encode("utf-8"), path)
    else:
        _emit(serialize.write_format(changeset, fmt), path)


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_graph(path: str, fmt: str | None) -> Graph:
    data = Path(path).read_bytes()
    if fmt == "obo" or (fmt is None and path.endswith(".obo")):
        return load_obo(data)
    return load_json(data)


def _print_parse_errors(errors: list[ParseError]) -> None:
    for err in errors:
        print(f"error: {err}", file=sys.stderr)


def cmd_parse(args: argparse.Namespace) -> int:
    changes: list[Change] = []
    errors: list[ParseError] = []
    if args.commands:
        for text in args.commands:
            try:
                changes.append(parse_command(text))
            except ParseError as err:
                errors.append(err)
    else:
        text = _read_text(args.kgcl_file)
        try:
            changes.extend(parse_document(text))
        except DocumentParseError as err:
            errors.extend(err.errors)
            changes.extend(err.changes)
    if errors:
        _print_parse_errors(errors)
        return 1
    _write_changeset(ChangeSet(tuple(changes)), args.format)
    return 0


def _collect_changes(args: argparse.Namespace) -> ChangeSet:
    changes: list[Change] = []
    for text in args.kgcl:
        changes.append(parse_command(text))
    if args.kgcl_file:
        changes.extend(parse_document(_read_text(args.kgcl_file)))
    if args.changes:
        path = Path(args.changes)
        fmt = {"json": "json", "yaml": "yaml", "yml": "yaml", "tsv": "tsv"}.get(
            path.suffix.lstrip(".").lower()
        )
        if fmt is None:
            raise serialize.SerializationError(
                f"cannot tell the change format of {path.name!r}; use .json/.yaml/.tsv"
            )
        changes.extend(serialize.read_format(path.read_bytes(), fmt))
    return ChangeSet(tuple(changes))


def cmd_apply(args: argparse.Namespace) -> int:
    try:
        graph = _load_graph(args.input, args.input_format)
    except GraphError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    try:
        changeset = _collect_changes(args)
    except (ParseError, serialize.SerializationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except DocumentParseError as err:
        _print_parse_errors(err.errors)
        return 1

    opts = apply_engine.ApplyOptions(
        provisional=args.provisional,
        auto_id_prefix=args.auto_id_prefix,
        auto_id_width=args.auto_id_width,
        on_error="halt" if args.on_error == "halt" else "skip_and_report",
    )
    report = apply_engine.apply_changeset(graph, changeset, opts)
    if args.pending == "all":
        pending_report = apply_engine.apply_pending(graph, "all", opts)
        report.entries.extend(pending_report.entries)

    Path(args.output).write_bytes(save_json(graph))

    if args.report:
        Path(args.report).write_text(
            json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    else:
        for entry in report.entries:
            label = "" if entry.change is None else f" {serialize.change_to_record(entry.change)}"
            print(f"[{entry.status}]{label} {entry.message}".rstrip(), file=sys.stderr)
        print(
            f"applied={report.count(apply_engine.APPLIED)} "
            f"stored={report.count(apply_engine.STORED_PROVISIONAL)} "
            f"failed={report.failed}",
            file=sys.stderr,
        )
    if report.failed and args.on_error == "halt":
        return 1
    return 0


def cmd_diff(args: argparse.Namespace) -> int:
    try:
        left = _load_graph(args.left, args.input_format)
        right = _load_graph(args.right, args.input_format)
    except GraphError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    opts = DiffOptions(
        coalesce_moves=not args.no_coalesce_moves,
        coalesce_predicate_changes=not args.no_coalesce_predicate_changes,
        coalesce_synonym_replacements=not args.no_coalesce_synonym_replacements,
    )
    changeset = compute_diff(left, right, opts)
    _emit(format_diff(changeset, args.format), args.output)
    if args.report_dir:
        from .report import write_changeset_report

        write_changeset_report(changeset, args.report_dir)
    if args.fail_on_diff and len(changeset):
        return 1
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    result = extract_changes(_read_text(args.file))
    if args.require_trigger and not result.trigger_found:
        print("error: no trigger line found", file=sys.stderr)
        return 1
    if result.errors:
        _print_parse_errors([err for _line, err in result.errors])
        if args.strict:
            return 1
    _write_changeset(result.changes, args.format)
    return 0


if __name__ == "__main__":
    entrypoint()
