"""Command-line interface wiring all pipelines together.

Exit codes: 0 success, 1 input or domain error (diagnostics printed),
2 usage error. Diagnostics print one per line as
``severity code line:col message``. Output files are written atomically
(temp file + rename) and only when the run produced no errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import reader
from .docx import DocxOptions, emit_docx, extract_feedback, read_docx, report_to_json
from .locales import (
    Direction,
    LocaleBundle,
    inject_labels,
    invert_bundle,
    parse_bundle,
    translate_source,
    untranslate_source,
)
from .model import Diagnostic, OntologyDoc, Severity, SourceSpan, canonical_print, error
from .owl import EmitOptions, emit_functional
from .tabular import PatternTemplate, expand, parse_csv, render_expansion
from .weaver_html import WeaveOptions, emit_html

_TOP_SPAN = SourceSpan(1, 1, 1, 1)


def _use_color(stream) -> bool:
    if os.environ.get("ONTOWEAVE_NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


_COLORS = {Severity.ERROR: "\x1b[31m", Severity.WARNING: "\x1b[33m"}


def print_diagnostics(diagnostics: list[Diagnostic], stream=None) -> None:
    stream = stream or sys.stderr
    color = _use_color(stream)
    for diagnostic in diagnostics:
        line = diagnostic.render()
        if color:
            line = f"{_COLORS[diagnostic.severity]}{line}\x1b[0m"
        print(line, file=stream)


def _dedupe(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    seen: set[tuple] = set()
    out = []
    for d in diagnostics:
        key = (d.severity, d.code, d.message, d.span)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


class _CliError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("command failed")
        self.diagnostics = diagnostics


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _CliError([error("E080", f"cannot read {path}: {exc.strerror or exc}", _TOP_SPAN)])
    except UnicodeDecodeError:
        raise _CliError([error("E080", f"{path} is not valid UTF-8", _TOP_SPAN)])


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise _CliError([error("E080", f"cannot read {path}: {exc.strerror or exc}", _TOP_SPAN)])


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    descriptor, temp_path = tempfile.mkstemp(dir=directory, prefix=".ontoweave-")
    try:
        with os.fdopen(descriptor, "wb") as handle:
            handle.write(data)
        os.replace(temp_path, path)
    except BaseException:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise


def _load_doc(path: str, collected: list[Diagnostic]) -> OntologyDoc:
    doc, diagnostics = reader.load_document(_read_file(path))
    collected.extend(diagnostics)
    if doc is None:
        raise _CliError([])
    return doc


def _load_bundle(path: str, collected: list[Diagnostic]) -> LocaleBundle:
    bundle, diagnostics = parse_bundle(_read_file(path))
    collected.extend(diagnostics)
    if bundle is None:
        raise _CliError([])
    return bundle


def _bundle_direction(bundles: list[LocaleBundle]) -> Direction:
    if bundles and all(b.direction is Direction.RTL for b in bundles):
        return Direction.RTL
    return Direction.LTR


def _cmd_check(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    collected.extend(reader.lint(doc))
    return []


def _cmd_translate(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    bundle = _load_bundle(args.bundle, collected)
    if args.invert:
        text, diagnostics = untranslate_source(_read_file(args.src), invert_bundle(bundle))
        collected.extend(diagnostics)
        if text is None:
            raise _CliError([])
    else:
        doc = _load_doc(args.src, collected)
        text, diagnostics = translate_source(doc, bundle)
        collected.extend(diagnostics)
    return [(args.output, text.encode("utf-8"))]


def _cmd_label(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    bundles = [_load_bundle(path, collected) for path in args.bundle]
    labeled = inject_labels(doc, bundles)
    text, diagnostics = emit_functional(labeled, EmitOptions())
    collected.extend(diagnostics)
    if text is None:
        raise _CliError([])
    return [(args.output, text.encode("utf-8"))]


def _cmd_weave_html(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    bundles = [_load_bundle(path, collected) for path in args.bundle]
    options = WeaveOptions(
        bundles=tuple(bundles),
        direction=_bundle_direction(bundles),
        hide_source_default=args.hide_source,
    )
    text, diagnostics = emit_html(doc, options)
    collected.extend(diagnostics)
    return [(args.output, text.encode("utf-8"))]


def _cmd_emit_owl(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    try:
        options = EmitOptions(default_prefix_iri=args.iri) if args.iri else EmitOptions()
    except ValueError as exc:
        raise _CliError([error("E081", str(exc), _TOP_SPAN)])
    text, diagnostics = emit_functional(doc, options)
    collected.extend(diagnostics)
    if text is None:
        raise _CliError([])
    return [(args.output, text.encode("utf-8"))]


def _cmd_weave_docx(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    return [(args.output, emit_docx(doc, DocxOptions()))]


def _cmd_extract_feedback(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    edited, diagnostics = read_docx(_read_bytes(args.edited))
    collected.extend(diagnostics)
    if edited is None:
        raise _CliError([])
    report, warnings = extract_feedback(doc, edited)
    collected.extend(warnings)
    payload = json.dumps(report_to_json(report, args.src), indent=2, ensure_ascii=False) + "\n"
    return [(args.output, payload.encode("utf-8"))]


def _cmd_expand(args, collected: list[Diagnostic]) -> list[tuple[str, bytes]]:
    doc = _load_doc(args.src, collected)
    table, table_diags = parse_csv(_read_file(args.table))
    collected.extend(table_diags)
    if table is None:
        raise _CliError([])
    template = PatternTemplate(_read_file(args.template))
    generated, expand_diags = expand(table, template)
    collected.extend(expand_diags)
    combined = canonical_print(doc)
    if generated:
        combined += "\n" + render_expansion(generated)
    merged, merge_diags = reader.load_document(combined)
    collected.extend(merge_diags)
    if merged is None:
        raise _CliError([])
    return [(args.output, canonical_print(merged).encode("utf-8"))]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2; keep its behavior but use stderr
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ontoweave", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="parse and lint a source file")
    check.add_argument("src")
    check.set_defaults(run=_cmd_check)

    translate = commands.add_parser("translate", help="translate source through a locale bundle")
    translate.add_argument("src")
    translate.add_argument("--bundle", required=True)
    translate.add_argument("--invert", action="store_true", help="map translated source back to canonical")
    translate.add_argument("-o", "--output", required=True)
    translate.set_defaults(run=_cmd_translate)

    label = commands.add_parser("label", help="emit OWL with labels injected from bundles")
    label.add_argument("src")
    label.add_argument("--bundle", action="append", default=[], required=True)
    label.add_argument("-o", "--output", required=True)
    label.set_defaults(run=_cmd_label)

    weave_html = commands.add_parser("weave-html", help="weave a literate HTML page")
    weave_html.add_argument("src")
    weave_html.add_argument("--bundle", action="append", default=[])
    weave_html.add_argument("--hide-source", action="store_true")
    weave_html.add_argument("-o", "--output", required=True)
    weave_html.set_defaults(run=_cmd_weave_html)

    emit_owl = commands.add_parser("emit-owl", help="emit OWL functional syntax")
    emit_owl.add_argument("src")
    emit_owl.add_argument("--iri", help="prefix IRI used when the header has no :iri")
    emit_owl.add_argument("-o", "--output", required=True)
    emit_owl.set_defaults(run=_cmd_emit_owl)

    weave_docx = commands.add_parser("weave-docx", help="export an editable Word document")
    weave_docx.add_argument("src")
    weave_docx.add_argument("-o", "--output", required=True)
    weave_docx.set_defaults(run=_cmd_weave_docx)

    extract = commands.add_parser("extract-feedback", help="read edits and comments back from a docx")
    extract.add_argument("src")
    extract.add_argument("--edited", required=True)
    extract.add_argument("-o", "--output", required=True)
    extract.set_defaults(run=_cmd_extract_feedback)

    expand_cmd = commands.add_parser("expand", help="append chunks generated from a CSV table")
    expand_cmd.add_argument("src")
    expand_cmd.add_argument("--table", required=True)
    expand_cmd.add_argument("--template", required=True)
    expand_cmd.add_argument("-o", "--output", required=True)
    expand_cmd.set_defaults(run=_cmd_expand)

    return parser


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the process exit code.

    Exit 0 if and only if no error-severity diagnostics were produced. A
    failing run writes no output files.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    collected: list[Diagnostic] = []
    try:
        outputs = args.run(args, collected)
    except _CliError as failure:
        collected.extend(failure.diagnostics)
        print_diagnostics(_dedupe(collected))
        return 1
    deduped = _dedupe(collected)
    print_diagnostics(deduped)
    if any(d.severity is Severity.ERROR for d in deduped):
        return 1
    for path, data in outputs:
        _atomic_write(path, data)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
