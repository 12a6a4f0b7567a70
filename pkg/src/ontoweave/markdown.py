"""Small Markdown subset used in narrative chunks.

Supported: headings ``#``..``####``, paragraphs, ``*emphasis*``,
``**strong**``, `` `inline code` ``, ``[text](url)`` links, and ``- item``
lists. Everything else renders literally; raw HTML is always escaped.

The block and inline parsers return plain data so both the HTML weaver and
the docx writer can share them.
"""
from __future__ import annotations

import html
import re
from dataclasses import dataclass


@dataclass(frozen=True)
class Heading:
    level: int
    text: str


@dataclass(frozen=True)
class Paragraph:
    text: str


@dataclass(frozen=True)
class ListBlock:
    items: tuple[str, ...]


Block = Heading | Paragraph | ListBlock

_HEADING_RE = re.compile(r"^(#{1,4})\s+(.*)$")
_LIST_ITEM_RE = re.compile(r"^-\s+(.*)$")


def parse_blocks(narrative: str) -> list[Block]:
    """Split narrative text into blocks separated by blank lines."""
    blocks: list[Block] = []
    pending: list[str] = []

    def flush() -> None:
        if pending:
            blocks.append(Paragraph("\n".join(pending)))
            pending.clear()

    for line in narrative.split("\n"):
        if not line.strip():
            flush()
            continue
        heading = _HEADING_RE.match(line)
        if heading:
            flush()
            blocks.append(Heading(len(heading.group(1)), heading.group(2).strip()))
            continue
        item = _LIST_ITEM_RE.match(line)
        if item:
            flush()
            if blocks and isinstance(blocks[-1], ListBlock):
                blocks[-1] = ListBlock(blocks[-1].items + (item.group(1),))
            else:
                blocks.append(ListBlock((item.group(1),)))
            continue
        pending.append(line)
    flush()
    return blocks


@dataclass(frozen=True)
class InlineSegment:
    kind: str  # "text" | "emphasis" | "strong" | "code" | "link"
    text: str
    url: str = ""


_LINK_RE = re.compile(r"\[([^\]]*)\]\(([^)\s]*)\)")


def parse_inline(text: str) -> list[InlineSegment]:
    """Split text into styled segments; unmatched markers stay literal."""
    segments: list[InlineSegment] = []
    plain: list[str] = []

    def emit_plain() -> None:
        if plain:
            segments.append(InlineSegment("text", "".join(plain)))
            plain.clear()

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "`":
            close = text.find("`", i + 1)
            if close != -1:
                emit_plain()
                segments.append(InlineSegment("code", text[i + 1 : close]))
                i = close + 1
                continue
        elif ch == "*":
            if text.startswith("**", i):
                close = text.find("**", i + 2)
                if close != -1:
                    emit_plain()
                    segments.append(InlineSegment("strong", text[i + 2 : close]))
                    i = close + 2
                    continue
            else:
                close = text.find("*", i + 1)
                if close != -1:
                    emit_plain()
                    segments.append(InlineSegment("emphasis", text[i + 1 : close]))
                    i = close + 1
                    continue
        elif ch == "[":
            match = _LINK_RE.match(text, i)
            if match:
                emit_plain()
                segments.append(InlineSegment("link", match.group(1), match.group(2)))
                i = match.end()
                continue
        plain.append(ch)
        i += 1
    emit_plain()
    return segments


def malformed_inline_reason(narrative: str) -> str | None:
    """Report the first unclosed emphasis or inline-code marker, if any."""
    for block in parse_blocks(narrative):
        texts: tuple[str, ...]
        if isinstance(block, Heading):
            texts = (block.text,)
        elif isinstance(block, Paragraph):
            texts = (block.text,)
        else:
            texts = block.items
        for text in texts:
            for segment in parse_inline(text):
                if segment.kind != "text":
                    continue
                leftover = segment.text
                if leftover.count("`") % 2 == 1:
                    return "unclosed inline code"
                # Literal '*' only survives parse_inline when unmatched.
                if "*" in leftover.replace("**", ""):
                    return "unclosed emphasis"
                if leftover.count("**") % 2 == 1:
                    return "unclosed emphasis"
    return None


def _render_inline_html(text: str) -> str:
    out: list[str] = []
    for segment in parse_inline(text):
        escaped = html.escape(segment.text, quote=True)
        if segment.kind == "text":
            out.append(escaped)
        elif segment.kind == "emphasis":
            out.append(f"<em>{escaped}</em>")
        elif segment.kind == "strong":
            out.append(f"<strong>{escaped}</strong>")
        elif segment.kind == "code":
            out.append(f"<code>{escaped}</code>")
        else:
            url = html.escape(segment.url, quote=True)
            out.append(f'<a href="{url}">{escaped}</a>')
    return "".join(out)


def render_markdown(narrative: str, heading_anchor=None) -> str:
    """Render narrative text as an HTML fragment.

    ``heading_anchor`` maps heading text to an id; when it returns None the
    heading is emitted without an id attribute.
    """
    parts: list[str] = []
    for block in parse_blocks(narrative):
        if isinstance(block, Heading):
            anchor = heading_anchor(block) if heading_anchor else None
            attr = f' id="{html.escape(anchor, quote=True)}"' if anchor else ""
            parts.append(
                f"<h{block.level}{attr}>{_render_inline_html(block.text)}</h{block.level}>"
            )
        elif isinstance(block, Paragraph):
            parts.append(f"<p>{_render_inline_html(block.text)}</p>")
        else:
            items = "".join(f"<li>{_render_inline_html(item)}</li>" for item in block.items)
            parts.append(f"<ul>{items}</ul>")
    return "\n".join(parts)
