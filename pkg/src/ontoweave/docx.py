"""Word-compatible export and feedback import.

The writer produces a minimal four-part OOXML package (content types, package
rels, document, styles) that mainstream word processors open and edit. The
reader parses a possibly-edited package back, keeping tracked insertions and
deletions and anchored comments, and ``extract_feedback`` turns the
differences into chunk-addressed feedback items.
"""
from __future__ import annotations

import enum
import io
import zipfile
from dataclasses import dataclass, field
from xml.etree import ElementTree as ET
from xml.sax.saxutils import escape as xml_escape

from .markdown import Heading, ListBlock, Paragraph as MdParagraph, parse_blocks, parse_inline
from .model import (
    Chunk,
    ChunkKind,
    Diagnostic,
    OntologyDoc,
    SourceSpan,
    canonical_chunk_text,
    error,
    warning,
)

W_NS = "http://schemas.openxmlformats.org/wordprocessingml/2006/main"


def _w(tag: str) -> str:
    return f"{{{W_NS}}}{tag}"


class Change(enum.Enum):
    NONE = "none"
    INSERTED = "inserted"
    DELETED = "deleted"


@dataclass(frozen=True)
class Run:
    text: str
    change: Change = Change.NONE
    comment_ids: frozenset[str] = frozenset()


class ParagraphStyle(enum.Enum):
    NORMAL = "Normal"
    HEADING1 = "Heading1"
    HEADING2 = "Heading2"
    HEADING3 = "Heading3"
    HEADING4 = "Heading4"
    CODE = "Code"


@dataclass(frozen=True)
class Paragraph:
    style: ParagraphStyle
    runs: tuple[Run, ...]


@dataclass(frozen=True)
class DocxDoc:
    paragraphs: tuple[Paragraph, ...]
    comments: dict[str, tuple[str, str]]  # id -> (author, body)
    bookmarks: dict[str, tuple[int, int]]  # name -> (first, last) paragraph index


@dataclass(frozen=True)
class FeedbackItem:
    chunk_id: int
    span: SourceSpan
    kind: str  # "edit" | "comment"
    original: str = ""
    revised: str = ""
    comment_text: str = ""
    author: str = ""


@dataclass(frozen=True)
class FeedbackReport:
    items: tuple[FeedbackItem, ...]


# --- writer ---

_CONTENT_TYPES = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">
<Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/>
<Default Extension="xml" ContentType="application/xml"/>
<Override PartName="/word/document.xml" ContentType="application/vnd.openxmlformats-officedocument.wordprocessingml.document.main+xml"/>
<Override PartName="/word/styles.xml" ContentType="application/vnd.openxmlformats-officedocument.wordprocessingml.styles+xml"/>
</Types>
"""

_PACKAGE_RELS = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">
<Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument" Target="word/document.xml"/>
</Relationships>
"""


def _style_xml() -> str:
    heading_styles = "".join(
        f'<w:style w:type="paragraph" w:styleId="Heading{n}">'
        f'<w:name w:val="heading {n}"/><w:basedOn w:val="Normal"/>'
        f'<w:pPr><w:outlineLvl w:val="{n - 1}"/><w:spacing w:before="240" w:after="120"/></w:pPr>'
        f'<w:rPr><w:b/><w:sz w:val="{36 - 4 * n}"/></w:rPr></w:style>'
        for n in range(1, 5)
    )
    return (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<w:styles xmlns:w="{W_NS}">'
        '<w:style w:type="paragraph" w:default="1" w:styleId="Normal">'
        '<w:name w:val="Normal"/></w:style>'
        f"{heading_styles}"
        '<w:style w:type="paragraph" w:styleId="Code">'
        '<w:name w:val="Code"/><w:basedOn w:val="Normal"/>'
        '<w:pPr><w:spacing w:before="0" w:after="0"/></w:pPr>'
        '<w:rPr><w:rFonts w:ascii="Courier New" w:hAnsi="Courier New" w:cs="Courier New"/>'
        '<w:sz w:val="18"/></w:rPr></w:style>'
        "</w:styles>"
    )


def _run_xml(text: str, *, bold: bool = False, italic: bool = False, mono: bool = False) -> str:
    props = ""
    if bold or italic or mono:
        bits = []
        if mono:
            bits.append('<w:rFonts w:ascii="Courier New" w:hAnsi="Courier New" w:cs="Courier New"/>')
        if bold:
            bits.append("<w:b/>")
        if italic:
            bits.append("<w:i/>")
        props = "<w:rPr>" + "".join(bits) + "</w:rPr>"
    return f'<w:r>{props}<w:t xml:space="preserve">{xml_escape(text)}</w:t></w:r>'


def _inline_runs(text: str) -> str:
    runs = []
    for segment in parse_inline(text):
        if segment.kind == "text":
            runs.append(_run_xml(segment.text))
        elif segment.kind == "emphasis":
            runs.append(_run_xml(segment.text, italic=True))
        elif segment.kind == "strong":
            runs.append(_run_xml(segment.text, bold=True))
        elif segment.kind == "code":
            runs.append(_run_xml(segment.text, mono=True))
        else:  # link: plain text followed by the target in parentheses
            runs.append(_run_xml(f"{segment.text} ({segment.url})"))
    return "".join(runs)


def _paragraph_xml(style: str, inner: str, *, bidi: bool = False, extra_props: str = "") -> str:
    props = f'<w:pStyle w:val="{style}"/>' if style != "Normal" else ""
    if bidi:
        props += "<w:bidi/>"
    props += extra_props
    ppr = f"<w:pPr>{props}</w:pPr>" if props else ""
    return f"<w:p>{ppr}{inner}</w:p>"


@dataclass(frozen=True)
class DocxOptions:
    rtl: bool = False


def emit_docx(doc: OntologyDoc, options: DocxOptions | None = None) -> bytes:
    """Write the document as a .docx byte string.

    Narrative headings map to Heading1..4, other narrative blocks to Normal
    paragraphs; each code chunk becomes one Code paragraph per canonical
    source line, wrapped in a bookmark named ``chunk-<id>``. The writer
    never emits tracked changes or comments.
    """
    options = options or DocxOptions()
    body: list[str] = []
    for chunk in doc.chunks:
        if chunk.kind is ChunkKind.NARRATIVE:
            for block in parse_blocks(chunk.narrative_text):
                if isinstance(block, Heading):
                    body.append(
                        _paragraph_xml(
                            f"Heading{block.level}", _inline_runs(block.text), bidi=options.rtl
                        )
                    )
                elif isinstance(block, MdParagraph):
                    body.append(_paragraph_xml("Normal", _inline_runs(block.text), bidi=options.rtl))
                else:
                    assert isinstance(block, ListBlock)
                    for item in block.items:
                        body.append(
                            _paragraph_xml(
                                "Normal", _run_xml("- ") + _inline_runs(item), bidi=options.rtl
                            )
                        )
        else:
            lines = canonical_chunk_text(chunk).split("\n")
            for index, line in enumerate(lines):
                inner = ""
                if index == 0:
                    inner += f'<w:bookmarkStart w:id="{chunk.id}" w:name="chunk-{chunk.id}"/>'
                inner += _run_xml(line)
                if index == len(lines) - 1:
                    inner += f'<w:bookmarkEnd w:id="{chunk.id}"/>'
                body.append(_paragraph_xml("Code", inner))

    document = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<w:document xmlns:w="{W_NS}"><w:body>'
        + "".join(body)
        + "<w:sectPr/></w:body></w:document>"
    )

    buffer = io.BytesIO()
    # Fixed timestamps keep output bytes identical across runs.
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_STORED) as archive:
        for name, payload in (
            ("[Content_Types].xml", _CONTENT_TYPES),
            ("_rels/.rels", _PACKAGE_RELS),
            ("word/document.xml", document),
            ("word/styles.xml", _style_xml()),
        ):
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            archive.writestr(info, payload)
    return buffer.getvalue()


# --- reader ---


def _run_from_element(element: ET.Element, change: Change, comment_ids: frozenset[str]) -> Run:
    parts: list[str] = []
    for child in element:
        if child.tag in (_w("t"), _w("delText")):
            parts.append(child.text or "")
        elif child.tag == _w("tab"):
            parts.append("\t")
    return Run(text="".join(parts), change=change, comment_ids=comment_ids)


def _parse_comments(payload: bytes) -> dict[str, tuple[str, str]]:
    root = ET.fromstring(payload)
    comments: dict[str, tuple[str, str]] = {}
    for comment in root.iter(_w("comment")):
        cid = comment.get(_w("id"), "")
        author = comment.get(_w("author"), "")
        text = "".join(t.text or "" for t in comment.iter(_w("t")))
        comments[cid] = (author, text)
    return comments


def read_docx(data: bytes) -> tuple[DocxDoc | None, list[Diagnostic]]:
    """Decode a .docx package, tolerating unknown XML by skipping it."""
    top = SourceSpan(1, 1, 1, 1)
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile:
        return None, [error("E060", "not a ZIP package", top)]
    names = set(archive.namelist())
    if "word/document.xml" not in names:
        return None, [error("E060", "package has no word/document.xml part", top)]
    try:
        root = ET.fromstring(archive.read("word/document.xml"))
        comments = (
            _parse_comments(archive.read("word/comments.xml"))
            if "word/comments.xml" in names
            else {}
        )
    except ET.ParseError as exc:
        return None, [error("E061", f"malformed XML: {exc}", top)]

    body = root.find(_w("body"))
    if body is None:
        return None, [error("E061", "document.xml has no body", top)]

    paragraphs: list[Paragraph] = []
    bookmark_starts: dict[str, tuple[str, int]] = {}  # xml id -> (name, para index)
    bookmarks: dict[str, tuple[int, int]] = {}
    active_comments: set[str] = set()

    def handle_marker(element: ET.Element, paragraph_index: int) -> None:
        if element.tag == _w("bookmarkStart"):
            name = element.get(_w("name"), "")
            xml_id = element.get(_w("id"), "")
            bookmark_starts[xml_id] = (name, paragraph_index)
        elif element.tag == _w("bookmarkEnd"):
            xml_id = element.get(_w("id"), "")
            if xml_id in bookmark_starts:
                name, start = bookmark_starts.pop(xml_id)
                bookmarks[name] = (start, paragraph_index)
        elif element.tag == _w("commentRangeStart"):
            active_comments.add(element.get(_w("id"), ""))
        elif element.tag == _w("commentRangeEnd"):
            active_comments.discard(element.get(_w("id"), ""))

    def collect_runs(container: ET.Element, change: Change, runs: list[Run], paragraph_index: int) -> None:
        for child in container:
            if child.tag == _w("r"):
                ids = frozenset(active_comments)
                reference = child.find(_w("commentReference"))
                if reference is not None:
                    ids = ids | {reference.get(_w("id"), "")}
                runs.append(_run_from_element(child, change, ids))
            elif child.tag == _w("ins"):
                collect_runs(child, Change.INSERTED, runs, paragraph_index)
            elif child.tag == _w("del"):
                collect_runs(child, Change.DELETED, runs, paragraph_index)
            elif child.tag == _w("hyperlink"):
                collect_runs(child, change, runs, paragraph_index)
            else:
                handle_marker(child, paragraph_index)

    for element in body:
        if element.tag == _w("p"):
            index = len(paragraphs)
            style = ParagraphStyle.NORMAL
            props = element.find(_w("pPr"))
            if props is not None:
                style_el = props.find(_w("pStyle"))
                if style_el is not None:
                    try:
                        style = ParagraphStyle(style_el.get(_w("val"), "Normal"))
                    except ValueError:
                        style = ParagraphStyle.NORMAL
            runs: list[Run] = []
            collect_runs(element, Change.NONE, runs, index)
            paragraphs.append(Paragraph(style=style, runs=tuple(runs)))
        else:
            handle_marker(element, len(paragraphs))

    diagnostics: list[Diagnostic] = []
    for xml_id, (name, _start) in bookmark_starts.items():
        diagnostics.append(
            error("E062", f"bookmark '{name or xml_id}' starts but never ends", top)
        )
    if diagnostics:
        return None, diagnostics

    # Drop comment anchors that have no matching comment body.
    if comments:
        cleaned = [
            Paragraph(
                style=p.style,
                runs=tuple(
                    Run(r.text, r.change, frozenset(i for i in r.comment_ids if i in comments))
                    for r in p.runs
                ),
            )
            for p in paragraphs
        ]
    else:
        cleaned = [
            Paragraph(style=p.style, runs=tuple(Run(r.text, r.change) for r in p.runs))
            for p in paragraphs
        ]
    return DocxDoc(paragraphs=tuple(cleaned), comments=comments, bookmarks=bookmarks), []


# --- feedback extraction ---


def _range_text(paragraphs: list[Paragraph], exclude: Change) -> str:
    lines: list[str] = []
    for paragraph in paragraphs:
        kept = [r.text for r in paragraph.runs if r.change is not exclude]
        if paragraph.runs and not kept:
            continue  # the whole line exists only on the other side
        lines.append("".join(kept))
    return "\n".join(lines)


def extract_feedback(
    source: OntologyDoc, edited: DocxDoc
) -> tuple[FeedbackReport, list[Diagnostic]]:
    """Compare an edited package against the source document.

    Per bookmarked chunk: the revised text (insertions applied, deletions
    dropped) is compared against the chunk's canonical text; differences
    become Edit items, anchored comments become Comment items. Unmatched
    bookmarks warn W020; source code chunks without bookmarks warn W021.
    """
    diagnostics: list[Diagnostic] = []
    chunk_by_id = {c.id: c for c in source.chunks if c.kind is ChunkKind.CODE}
    matched: dict[int, tuple[int, int]] = {}
    for name, para_range in edited.bookmarks.items():
        if name.startswith("chunk-"):
            try:
                chunk_id = int(name[len("chunk-"):])
            except ValueError:
                chunk_id = -1
            if chunk_id in chunk_by_id:
                matched[chunk_id] = para_range
                continue
        diagnostics.append(
            warning("W020", f"bookmark '{name}' matches no source chunk", SourceSpan(1, 1, 1, 1))
        )
    for chunk_id, chunk in sorted(chunk_by_id.items()):
        if chunk_id not in matched:
            diagnostics.append(
                warning("W021", f"chunk {chunk_id} has no bookmark in the edited document", chunk.span)
            )

    items: list[FeedbackItem] = []
    for chunk_id in sorted(matched):
        chunk = chunk_by_id[chunk_id]
        first, last = matched[chunk_id]
        paragraphs = list(edited.paragraphs[first : last + 1])
        original = _range_text(paragraphs, exclude=Change.INSERTED)
        revised = _range_text(paragraphs, exclude=Change.DELETED)
        if revised != canonical_chunk_text(chunk):
            items.append(
                FeedbackItem(
                    chunk_id=chunk_id,
                    span=chunk.span,
                    kind="edit",
                    original=original,
                    revised=revised,
                )
            )
        seen: list[str] = []
        for paragraph in paragraphs:
            for run in paragraph.runs:
                for cid in sorted(run.comment_ids):
                    if cid not in seen:
                        seen.append(cid)
        for cid in seen:
            author, body = edited.comments.get(cid, ("", ""))
            items.append(
                FeedbackItem(
                    chunk_id=chunk_id,
                    span=chunk.span,
                    kind="comment",
                    comment_text=body,
                    author=author,
                )
            )
    return FeedbackReport(items=tuple(items)), diagnostics


def report_to_json(report: FeedbackReport, source_path: str) -> dict:
    """Shape the report for JSON serialization."""
    items = []
    for item in report.items:
        payload: dict = {
            "chunk": item.chunk_id,
            "kind": item.kind,
            "span": {
                "sl": item.span.start_line,
                "sc": item.span.start_column,
                "el": item.span.end_line,
                "ec": item.span.end_column,
            },
        }
        if item.kind == "edit":
            payload["original"] = item.original
            payload["revised"] = item.revised
        else:
            payload["comment"] = item.comment_text
            payload["author"] = item.author
        items.append(payload)
    return {"source": source_path, "items": items}
