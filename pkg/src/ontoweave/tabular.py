"""Tabular expansion: generate class frames from CSV rows and a pattern
template with `{column}` placeholders.

The CSV reader is hand-rolled so ragged rows and unterminated quotes get
line-numbered diagnostics instead of silent repair.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import reader
from .model import Diagnostic, Form, SourceSpan, error, format_form

_PLACEHOLDER_RE = re.compile(r"\{\{|\{([^{}]*)\}")


@dataclass(frozen=True)
class TableData:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class PatternTemplate:
    """A form skeleton; substituting any complete row must yield one form."""

    text: str

    def placeholders(self) -> list[str]:
        return [m.group(1) for m in _PLACEHOLDER_RE.finditer(self.text) if m.group(1) is not None]

    def substitute(self, values: dict[str, str]) -> str:
        def replace(match: re.Match) -> str:
            if match.group(0) == "{{":
                return "{"
            return values[match.group(1)]

        return _PLACEHOLDER_RE.sub(replace, self.text)


def parse_csv(text: str) -> tuple[TableData | None, list[Diagnostic]]:
    """Parse comma-separated text: quoted fields, `""` escapes, CRLF or LF,
    first record is the header."""
    records: list[tuple[int, list[str]]] = []  # (starting line, fields)
    field_chars: list[str] = []
    fields: list[str] = []
    line = 1
    record_line = 1
    in_quotes = False
    i = 0
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    n = len(text)

    def end_field() -> None:
        fields.append("".join(field_chars))
        field_chars.clear()

    def end_record() -> None:
        nonlocal record_line
        end_field()
        records.append((record_line, fields.copy()))
        fields.clear()

    while i < n:
        ch = text[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < n and text[i + 1] == '"':
                    field_chars.append('"')
                    i += 2
                    continue
                in_quotes = False
            else:
                if ch == "\n":
                    line += 1
                field_chars.append(ch)
        elif ch == '"':
            in_quotes = True
        elif ch == ",":
            end_field()
        elif ch == "\n":
            end_record()
            line += 1
            record_line = line
        else:
            field_chars.append(ch)
        i += 1

    if in_quotes:
        return None, [error("E071", "unterminated quoted field", SourceSpan(line, 1, line, 2))]
    if field_chars or fields:
        end_record()

    records = [(ln, fs) for ln, fs in records if fs != [""]]
    if not records:
        return None, [error("E070", "empty table: no header record", SourceSpan(1, 1, 1, 1))]

    header_line, header = records[0]
    diagnostics: list[Diagnostic] = []
    seen: set[str] = set()
    for column in header:
        if column in seen:
            diagnostics.append(
                error("E072", f"duplicate column name {column!r}", SourceSpan(header_line, 1, header_line, 2))
            )
        seen.add(column)
    for ln, fs in records[1:]:
        if len(fs) != len(header):
            diagnostics.append(
                error(
                    "E070",
                    f"row has {len(fs)} fields, header has {len(header)}",
                    SourceSpan(ln, 1, ln, 2),
                )
            )
    if diagnostics:
        return None, diagnostics
    return TableData(header=tuple(header), rows=tuple(tuple(fs) for _, fs in records[1:])), []


@dataclass(frozen=True)
class GeneratedChunk:
    row_number: int  # 1-based data row
    text: str  # substituted form source
    form: Form


def expand(
    table: TableData, template: PatternTemplate
) -> tuple[list[GeneratedChunk], list[Diagnostic]]:
    """Produce one code chunk per row, in row order.

    Parse problems are reported per row; duplicate generated names get the
    standard duplicate-definition error with the offending row named.
    """
    diagnostics: list[Diagnostic] = []
    for name in template.placeholders():
        if name not in table.header:
            diagnostics.append(
                error("E073", f"placeholder {{{name}}} names no column", SourceSpan(1, 1, 1, 2))
            )
    if diagnostics:
        return [], diagnostics

    generated: list[GeneratedChunk] = []
    names_seen: dict[str, int] = {}
    for row_number, row in enumerate(table.rows, start=1):
        values = dict(zip(table.header, row))
        text = template.substitute(values)
        tokens, token_diags = reader.tokenize(text)
        if token_diags:
            diagnostics.extend(
                error(d.code, f"row {row_number}: {d.message}", d.span) for d in token_diags
            )
            continue
        forms, parse_diags = reader.parse(tokens)
        if parse_diags:
            diagnostics.extend(
                error(d.code, f"row {row_number}: {d.message}", d.span) for d in parse_diags
            )
            continue
        if len(forms) != 1:
            diagnostics.append(
                error(
                    "E074",
                    f"row {row_number}: template must expand to exactly one form, got {len(forms)}",
                    SourceSpan(1, 1, 1, 2),
                )
            )
            continue
        form = forms[0]
        if form.name in names_seen:
            diagnostics.append(
                error(
                    "E021",
                    f"duplicate definition of '{form.name}': rows {names_seen[form.name]} and {row_number}",
                    form.span,
                )
            )
            continue
        names_seen[form.name] = row_number
        generated.append(GeneratedChunk(row_number=row_number, text=text, form=form))
    return generated, diagnostics


def render_expansion(generated: list[GeneratedChunk]) -> str:
    """Render generated chunks as canonical source text, each preceded by a
    provenance narrative line naming its row."""
    parts = []
    for chunk in generated:
        parts.append(f";; row {chunk.row_number}\n\n{format_form(chunk.form)}")
    return "\n\n".join(parts) + ("\n" if parts else "")
