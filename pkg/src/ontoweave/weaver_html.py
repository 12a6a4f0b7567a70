"""Literate HTML weaver.

Produces one self-contained HTML5 document: embedded stylesheet, embedded
viewer script, a sidebar table of contents built from narrative headings,
syntax-highlighted code chunks with per-chunk show/hide controls, entity
cross-links, and a JSON manifest block for client-side label switching.
"""
from __future__ import annotations

import html
import json
from dataclasses import dataclass, field
from importlib import resources

from .locales import Direction, LocaleBundle, inject_labels
from .markdown import Heading, parse_blocks, render_markdown
from .model import (
    Chunk,
    ChunkKind,
    Diagnostic,
    EXPRESSION_HEADS,
    FORM_HEADS,
    OntologyDoc,
    SourceSpan,
    SymbolTable,
    warning,
)
from .reader import Token, TokenKind, tokenize


@dataclass(frozen=True)
class TocEntry:
    level: int
    title: str
    anchor: str
    children: tuple["TocEntry", ...] = ()


#: Classification labels for syntax highlighting; every character of a code
#: chunk belongs to exactly one classified run.
TOKEN_CLASSES = (
    "keyword",
    "option",
    "entity-ref",
    "entity-def",
    "text-literal",
    "remark",
    "paren",
)


def anchor_text(name: str) -> str:
    """Lowercase, non-alphanumerics to '-', runs collapsed, ends trimmed."""
    out: list[str] = []
    for ch in name.lower():
        if ch.isalnum():
            out.append(ch)
        elif out and out[-1] != "-":
            out.append("-")
    return "".join(out).strip("-")


class _AnchorAllocator:
    """Hands out unique anchors, resolving collisions with -2, -3, ..."""

    def __init__(self) -> None:
        self.used: set[str] = set()

    def allocate(self, base: str) -> tuple[str, bool]:
        base = base or "section"
        if base not in self.used:
            self.used.add(base)
            return base, False
        n = 2
        while f"{base}-{n}" in self.used:
            n += 1
        candidate = f"{base}-{n}"
        self.used.add(candidate)
        return candidate, True


def classify_tokens(chunk: Chunk, symbols: SymbolTable) -> list[tuple[SourceSpan, str]]:
    """Assign a highlight class to every character of a code chunk.

    Runs are token-based, then stretched over the whitespace that follows
    them (and the first run back to the chunk start) so that concatenating
    the classified spans reproduces the chunk text exactly.
    """
    tokens, _ = tokenize(chunk.code_text, first_line=chunk.span.start_line, keep_remarks=True)
    runs: list[tuple[SourceSpan, str]] = []
    expect_head = False
    expect_name = False
    current_option: str | None = None
    depth = 0
    for token in tokens:
        if token.kind is TokenKind.LPAREN:
            cls = "paren"
            depth += 1
            expect_head = True
            expect_name = False
        elif token.kind is TokenKind.RPAREN:
            cls = "paren"
            depth -= 1
            if depth <= 0:
                current_option = None
        elif token.kind is TokenKind.OPTION_KEYWORD:
            cls = "option"
            current_option = token.lexeme[1:]
            expect_head = expect_name = False
        elif token.kind is TokenKind.TEXT:
            cls = "text-literal"
            expect_head = expect_name = False
        elif token.kind is TokenKind.REMARK:
            cls = "remark"
        elif token.kind is TokenKind.SYMBOL:
            if expect_head:
                expect_head = False
                if token.lexeme in FORM_HEADS:
                    cls = "keyword"
                    expect_name = True
                elif token.lexeme in EXPRESSION_HEADS:
                    cls = "keyword"
                else:
                    cls = "entity-ref"
            elif expect_name:
                cls = "entity-def"
                expect_name = False
            elif current_option == "characteristic":
                # Characteristic values are grammar symbols, not entities.
                cls = "keyword"
            else:
                cls = "entity-ref"
        else:  # INTEGER: cannot appear in a parsed chunk, classify defensively
            cls = "text-literal"
            expect_head = expect_name = False

        span = token.span
        if token.kind is TokenKind.TEXT:
            # Cover the quotes around the literal.
            span = SourceSpan(
                span.start_line, span.start_column - 1, span.end_line, span.end_column + 1
            )
        runs.append((span, cls))

    if not runs:
        return [(chunk.span, "remark")] if chunk.code_text else []

    # Stretch runs over inter-token whitespace so coverage is exact.
    chunk_start = (chunk.span.start_line, chunk.span.start_column)
    chunk_end = (chunk.span.end_line, chunk.span.end_column)
    stretched: list[tuple[SourceSpan, str]] = []
    for i, (span, cls) in enumerate(runs):
        start = chunk_start if i == 0 else (span.start_line, span.start_column)
        if i + 1 < len(runs):
            nxt = runs[i + 1][0]
            end = (nxt.start_line, nxt.start_column)
        else:
            end = chunk_end
        stretched.append((SourceSpan(start[0], start[1], end[0], end[1]), cls))
    return stretched


def _chunk_local_slices(chunk: Chunk, runs: list[tuple[SourceSpan, str]]) -> list[tuple[str, str]]:
    """Convert file-coordinate runs to (text, class) pairs over chunk text."""
    lines = chunk.code_text.split("\n")
    base_line = chunk.span.start_line

    def offset(line: int, column: int) -> int:
        local = line - base_line
        return sum(len(lines[i]) + 1 for i in range(local)) + (column - 1)

    out = []
    for span, cls in runs:
        start = offset(span.start_line, span.start_column)
        end = offset(span.end_line, span.end_column)
        out.append((chunk.code_text[start:end], cls))
    return out


@dataclass(frozen=True)
class WeaveOptions:
    bundles: tuple[LocaleBundle, ...] = ()
    direction: Direction = Direction.LTR
    hide_source_default: bool = False
    title: str | None = None


_STYLESHEET = """
:root { --ow-accent: #7a2048; --ow-border: #ddd; --ow-code-bg: #f7f5f2; }
* { box-sizing: border-box; }
body { margin: 0; font-family: Georgia, 'Times New Roman', serif; color: #222; }
.ow-layout { display: flex; min-height: 100vh; }
nav#ow-toc { width: 16rem; flex: none; border-inline-end: 1px solid var(--ow-border);
  padding: 1rem; position: sticky; top: 0; align-self: flex-start;
  max-height: 100vh; overflow-y: auto; font-family: system-ui, sans-serif; font-size: 0.9rem; }
nav#ow-toc ul { list-style: none; padding-inline-start: 1rem; margin: 0.25rem 0; }
nav#ow-toc > ul { padding-inline-start: 0; }
nav#ow-toc a { text-decoration: none; color: inherit; display: block; padding: 0.1rem 0.3rem; }
nav#ow-toc a.active { color: var(--ow-accent); font-weight: bold; }
.ow-controls { display: flex; flex-direction: column; gap: 0.5rem; margin-bottom: 1rem; }
.ow-controls button, .ow-controls select { font: inherit; padding: 0.2rem 0.5rem; }
main#ow-content { flex: 1; padding: 1.5rem 3rem; max-width: 50rem; }
section.source { border: 1px solid var(--ow-border); border-radius: 4px;
  margin: 1rem 0; background: var(--ow-code-bg); }
section.source > .ow-toggle { float: inline-end; margin: 0.3rem; font-size: 0.75rem; }
section.source pre { margin: 0; padding: 0.8rem 1rem; overflow-x: auto;
  font-family: 'DejaVu Sans Mono', Consolas, monospace; font-size: 0.85rem; direction: ltr; }
.tok-keyword { color: #7a2048; font-weight: bold; }
.tok-option { color: #1d5c87; }
.tok-entity-def { color: #205c20; font-weight: bold; }
a.tok-entity-ref { color: #205c20; text-decoration: none; border-bottom: 1px dotted #205c20; }
.tok-text-literal { color: #8a5a00; }
.tok-remark { color: #888; font-style: italic; }
.tok-paren { color: #999; }
h1, h2, h3, h4 { font-family: system-ui, sans-serif; }
""".strip()


def _toc_tree(headings: list[tuple[int, str, str]]) -> list[TocEntry]:
    """Nest (level, title, anchor) triples by heading level."""
    root: list[TocEntry] = []
    # Work with mutable scaffolding, freeze into TocEntry at the end.
    stack: list[dict] = []
    nodes: list[dict] = []
    for level, title, anchor in headings:
        node = {"level": level, "title": title, "anchor": anchor, "children": []}
        while stack and stack[-1]["level"] >= level:
            stack.pop()
        if stack:
            stack[-1]["children"].append(node)
        else:
            nodes.append(node)
        stack.append(node)

    def freeze(node: dict) -> TocEntry:
        return TocEntry(
            level=node["level"],
            title=node["title"],
            anchor=node["anchor"],
            children=tuple(freeze(c) for c in node["children"]),
        )

    root.extend(freeze(n) for n in nodes)
    return root


def _toc_html(entries: list[TocEntry]) -> str:
    if not entries:
        return ""
    items = []
    for entry in entries:
        link = (
            f'<a class="ow-toc-link" href="#{html.escape(entry.anchor, quote=True)}">'
            f"{html.escape(entry.title)}</a>"
        )
        items.append(f"<li>{link}{_toc_html(list(entry.children))}</li>")
    return "<ul>" + "".join(items) + "</ul>"


def _viewer_script() -> str:
    return resources.files("ontoweave").joinpath("assets/viewer.js").read_text("utf-8")


def emit_html(doc: OntologyDoc, options: WeaveOptions | None = None) -> tuple[str, list[Diagnostic]]:
    """Weave the document into a single self-contained HTML page.

    Anchor collisions never fail the build: later duplicates get a numeric
    suffix and a W011 warning.
    """
    options = options or WeaveOptions()
    diagnostics: list[Diagnostic] = []
    doc = inject_labels(doc, list(options.bundles))

    heading_anchors = _AnchorAllocator()
    entity_anchors = _AnchorAllocator()

    entity_anchor: dict[str, str] = {}
    for name, entry in doc.symbols.entries.items():
        anchor, collided = entity_anchors.allocate(anchor_text(name))
        entity_anchor[name] = anchor
        if collided:
            diagnostics.append(
                warning("W011", f"anchor collision for entity '{name}', using '{anchor}'", entry.span)
            )

    # Pre-allocate heading anchors in document order so the TOC and the
    # rendered headings agree.
    headings: list[tuple[int, str, str]] = []
    chunk_heading_anchors: dict[int, list[str]] = {}
    for chunk in doc.chunks:
        if chunk.kind is not ChunkKind.NARRATIVE:
            continue
        for block in parse_blocks(chunk.narrative_text):
            if isinstance(block, Heading):
                anchor, collided = heading_anchors.allocate(anchor_text(block.text))
                if collided:
                    diagnostics.append(
                        warning("W011", f"anchor collision for heading '{block.text}', using '{anchor}'", chunk.span)
                    )
                headings.append((block.level, block.text, anchor))
                chunk_heading_anchors.setdefault(chunk.id, []).append(anchor)

    body_parts: list[str] = []
    for chunk in doc.chunks:
        if chunk.kind is ChunkKind.NARRATIVE:
            anchors = iter(chunk_heading_anchors.get(chunk.id, []))
            body_parts.append(
                render_markdown(chunk.narrative_text, lambda block: next(anchors, None))
            )
        else:
            runs = classify_tokens(chunk, doc.symbols)
            pieces: list[str] = []
            for text, cls in _chunk_local_slices(chunk, runs):
                escaped = html.escape(text)
                if cls in ("entity-ref", "entity-def"):
                    name = text.rstrip()  # runs carry the whitespace after the token
                    trailing = html.escape(text[len(name):])
                    anchor = entity_anchor.get(name, anchor_text(name))
                    core = html.escape(name)
                    quoted_name = html.escape(name, quote=True)
                    if cls == "entity-def":
                        pieces.append(
                            f'<span class="tok-entity-def ow-entity" id="def-{anchor}" '
                            f'data-anchor="{anchor}" data-name="{quoted_name}">{core}</span>{trailing}'
                        )
                    else:
                        pieces.append(
                            f'<a class="tok-entity-ref ow-entity" href="#def-{anchor}" '
                            f'data-anchor="{anchor}" data-name="{quoted_name}">{core}</a>{trailing}'
                        )
                else:
                    pieces.append(f'<span class="tok-{cls}">{escaped}</span>')
            hidden = " hidden" if options.hide_source_default else ""
            toggle_label = "show source" if options.hide_source_default else "hide source"
            body_parts.append(
                f'<section class="source" id="chunk-{chunk.id}">'
                f'<button class="ow-toggle" type="button" data-chunk="{chunk.id}">{toggle_label}</button>'
                f'<pre{hidden}><code>' + "".join(pieces) + "</code></pre></section>"
            )

    locales = sorted({loc for (_n, loc) in doc.symbols.labels if loc})
    manifest = {
        "entities": [
            {
                "name": name,
                "kind": entry.kind.value,
                "anchor": entity_anchor[name],
                "labels": {
                    loc: text
                    for (n, loc), text in doc.symbols.labels.items()
                    if n == name and loc
                },
            }
            for name, entry in doc.symbols.entries.items()
        ],
        "direction": options.direction.value,
    }
    manifest_json = json.dumps(manifest, ensure_ascii=False, sort_keys=True).replace("</", "<\\/")

    title = options.title or doc.header.name
    dir_attr = ' dir="rtl"' if options.direction is Direction.RTL else ""
    locale_options = ['<option value="">original names</option>'] + [
        f'<option value="{html.escape(loc, quote=True)}">{html.escape(loc)}</option>'
        for loc in locales
    ]
    toc_entries = _toc_tree(headings)

    page = f"""<!DOCTYPE html>
<html lang=""{dir_attr}>
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>{html.escape(title)}</title>
<style>
{_STYLESHEET}
</style>
</head>
<body>
<script type="application/json" id="ow-manifest">{manifest_json}</script>
<div class="ow-layout">
<nav id="ow-toc" aria-label="contents">
<div class="ow-controls">
<button id="ow-toggle-all" type="button">{'show all source' if options.hide_source_default else 'hide all source'}</button>
<label>names <select id="ow-locale-select">{''.join(locale_options)}</select></label>
</div>
{_toc_html(toc_entries)}
</nav>
<main id="ow-content">
{chr(10).join(body_parts)}
</main>
</div>
<script>
{_viewer_script()}
</script>
</body>
</html>
"""
    return page, diagnostics
