"""Locale bundles: translating ontology source between languages and
injecting per-locale labels.

A bundle maps canonical keywords and identifiers to surface forms in one
locale. Translation works on the parsed model through the canonical
printer, never on raw text, so narrative and text literals cannot be
corrupted. Untranslation remaps the token stream with an inverted bundle
and reparses.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from . import reader
from .model import (
    Diagnostic,
    KEYWORD_SURFACE_FORMS,
    OntologyDoc,
    SourceSpan,
    SymbolKind,
    error,
    render_source,
    warning,
)
from .reader import Token, TokenKind, is_valid_symbol


class Direction(enum.Enum):
    LTR = "ltr"
    RTL = "rtl"


@dataclass(frozen=True)
class LocaleBundle:
    locale: str
    direction: Direction = Direction.LTR
    keywords: Mapping[str, str] = field(default_factory=dict)
    identifiers: Mapping[str, str] = field(default_factory=dict)


def _line_span(number: int, text: str) -> SourceSpan:
    return SourceSpan(number, 1, number, len(text) + 1)


def _parse_entry(text: str) -> tuple[str, str] | None:
    """Parse one `key = "value"` line; trailing # comments are allowed."""
    eq = text.find("=")
    if eq == -1:
        return None
    key = text[:eq].strip()
    rest = text[eq + 1 :].strip()
    if not key or not rest.startswith('"'):
        return None
    closing = rest.find('"', 1)
    if closing == -1:
        return None
    tail = rest[closing + 1 :].strip()
    if tail and not tail.startswith("#"):
        return None
    return key, rest[1:closing]


def parse_bundle(text: str) -> tuple[LocaleBundle | None, list[Diagnostic]]:
    """Parse the line-based `.lb` bundle format.

    Validity means: a locale tag is present, keys are unique per section,
    values are unique per section (so the bundle inverts), every value is a
    lexable symbol, and keyword keys belong to the fixed keyword set.
    """
    diagnostics: list[Diagnostic] = []
    locale: str | None = None
    direction = Direction.LTR
    sections: dict[str, dict[str, str]] = {"keywords": {}, "identifiers": {}}
    seen_values: dict[str, set[str]] = {"keywords": set(), "identifiers": set()}
    section: str | None = None

    for number, line in enumerate(reader.normalize_newlines(text).split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        span = _line_span(number, line)
        if stripped in ("[keywords]", "[identifiers]"):
            section = stripped[1:-1]
            continue
        entry = _parse_entry(stripped)
        if entry is None:
            diagnostics.append(error("E034", f"malformed bundle line: {stripped!r}", span))
            continue
        key, value = entry
        if section is None:
            if key == "locale":
                if locale is not None:
                    diagnostics.append(error("E030", "duplicate 'locale' entry", span))
                locale = value
            elif key == "direction":
                if value not in (Direction.LTR.value, Direction.RTL.value):
                    diagnostics.append(
                        error("E034", f"direction must be \"ltr\" or \"rtl\", not {value!r}", span)
                    )
                else:
                    direction = Direction(value)
            else:
                diagnostics.append(error("E034", f"unexpected entry {key!r} before a section", span))
            continue
        table = sections[section]
        if key in table:
            diagnostics.append(error("E030", f"duplicate key {key!r} in [{section}]", span))
            continue
        if section == "keywords" and key not in KEYWORD_SURFACE_FORMS:
            diagnostics.append(error("E034", f"{key!r} is not a translatable keyword", span))
            continue
        if value in seen_values[section]:
            diagnostics.append(
                error("E031", f"value {value!r} appears twice in [{section}]; bundle must invert", span)
            )
            continue
        if not is_valid_symbol(value):
            diagnostics.append(error("E032", f"{value!r} is not a valid symbol", span))
            continue
        table[key] = value
        seen_values[section].add(value)

    if locale is None:
        diagnostics.append(error("E033", "bundle has no 'locale' entry", SourceSpan(1, 1, 1, 1)))
    if any(d.severity.value == "error" for d in diagnostics):
        return None, diagnostics
    assert locale is not None
    return (
        LocaleBundle(
            locale=locale,
            direction=direction,
            keywords=sections["keywords"],
            identifiers=sections["identifiers"],
        ),
        diagnostics,
    )


def invert_bundle(bundle: LocaleBundle) -> LocaleBundle:
    """Swap both mappings; locale and direction are preserved."""
    return LocaleBundle(
        locale=bundle.locale,
        direction=bundle.direction,
        keywords={v: k for k, v in bundle.keywords.items()},
        identifiers={v: k for k, v in bundle.identifiers.items()},
    )


def translate_source(doc: OntologyDoc, bundle: LocaleBundle) -> tuple[str, list[Diagnostic]]:
    """Render the document with every surface form mapped through the bundle.

    Names without a translation pass through unchanged; each distinct
    missing name produces one W010 warning. Narrative chunks and text
    literals are never altered.
    """
    missing: dict[str, SourceSpan] = {}

    def on_missing(name: str, span: SourceSpan) -> None:
        missing.setdefault(name, span)

    text = render_source(
        doc, keywords=bundle.keywords, identifiers=bundle.identifiers, on_missing=on_missing
    )
    diagnostics = [
        warning("W010", f"no {bundle.locale!r} translation for '{name}'", span)
        for name, span in missing.items()
    ]
    return text, diagnostics


def _remap_tokens(tokens: list[Token], bundle: LocaleBundle) -> list[Token]:
    remapped: list[Token] = []
    previous_kind: TokenKind | None = None
    for token in tokens:
        if token.kind is TokenKind.OPTION_KEYWORD:
            name = token.lexeme[1:]
            translated = bundle.keywords.get(name, name)
            remapped.append(Token(token.kind, ":" + translated, token.span))
        elif token.kind is TokenKind.SYMBOL:
            # Head position: keywords take priority, then identifiers.
            if previous_kind is TokenKind.LPAREN and token.lexeme in bundle.keywords:
                lexeme = bundle.keywords[token.lexeme]
            else:
                lexeme = bundle.identifiers.get(token.lexeme, token.lexeme)
            remapped.append(Token(token.kind, lexeme, token.span))
        else:
            remapped.append(token)
        previous_kind = token.kind
    return remapped


def untranslate_source(source: str, inverted: LocaleBundle) -> tuple[str | None, list[Diagnostic]]:
    """Map translated source back to canonical form and reprint it.

    ``inverted`` must map translated surface forms to canonical ones (see
    ``invert_bundle``). Symbols absent from the bundle are assumed to be
    canonical already and pass through silently.
    """
    diagnostics: list[Diagnostic] = []
    chunks = []
    from .model import Chunk, ChunkKind  # local import to avoid clutter above

    for index, raw in enumerate(reader.segment(source)):
        span = raw.span()
        if raw.kind is ChunkKind.NARRATIVE:
            chunks.append(
                Chunk(id=index, kind=ChunkKind.NARRATIVE, span=span, narrative_text=raw.narrative_text())
            )
            continue
        code_text = raw.raw_text()
        tokens, token_diags = reader.tokenize(code_text, first_line=raw.lines[0][0])
        diagnostics.extend(token_diags)
        forms: tuple = ()
        if not token_diags:
            parsed, parse_diags = reader.parse(_remap_tokens(tokens, inverted))
            diagnostics.extend(parse_diags)
            if not parse_diags:
                forms = tuple(parsed)
        chunks.append(
            Chunk(id=index, kind=ChunkKind.CODE, span=span, code_text=code_text, forms=forms)
        )
    if any(d.severity.value == "error" for d in diagnostics):
        return None, diagnostics
    doc, build_diags = reader.build_model(chunks)
    diagnostics.extend(build_diags)
    if doc is None:
        return None, diagnostics
    return render_source(doc), diagnostics


def inject_labels(doc: OntologyDoc, bundles: list[LocaleBundle]) -> OntologyDoc:
    """Add one label per (entity, locale) from each bundle's identifier map.

    Existing labels are never touched; the ontology header is not an entity
    and gets no label. Returns a new document sharing everything but the
    symbol table.
    """
    extra: dict[tuple[str, str], str] = {}
    for bundle in bundles:
        for name, translated in bundle.identifiers.items():
            entry = doc.symbols.entries.get(name)
            if entry is None or entry.kind is SymbolKind.ONTOLOGY:
                continue
            key = (name, bundle.locale)
            if key not in doc.symbols.labels:
                extra.setdefault(key, translated)
    if not extra:
        return doc
    return OntologyDoc(
        header=doc.header, chunks=doc.chunks, symbols=doc.symbols.with_labels(extra)
    )
