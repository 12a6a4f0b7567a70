"""Core document model: spans, diagnostics, chunks, forms, symbols.

Everything here is immutable after construction and safe to share across
threads. The canonical printer renders a document back to source text in one
fixed layout, so translation and export round trips compare byte for byte.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Union


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """Half-open region of source text.

    Lines and columns are 1-based and count Unicode scalar values, not bytes.
    ``end_column`` points one past the last character, so an empty span has
    ``start == end``.
    """

    start_line: int
    start_column: int
    end_line: int
    end_column: int

    def __post_init__(self) -> None:
        if (self.end_line, self.end_column) < (self.start_line, self.start_column):
            raise ValueError(f"span end precedes start: {self}")

    def label(self) -> str:
        return f"{self.start_line}:{self.start_column}"


#: Placeholder span for documents assembled in memory rather than parsed.
DUMMY_SPAN = SourceSpan(1, 1, 1, 1)


def slice_span(source: str, span: SourceSpan) -> str:
    """Return the region of ``source`` covered by ``span``."""
    lines = source.split("\n")
    if span.start_line == span.end_line:
        return lines[span.start_line - 1][span.start_column - 1 : span.end_column - 1]
    first = lines[span.start_line - 1][span.start_column - 1 :]
    middle = lines[span.start_line : span.end_line - 1]
    last = lines[span.end_line - 1][: span.end_column - 1]
    return "\n".join([first, *middle, last])


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: SourceSpan

    def render(self) -> str:
        return f"{self.severity.value} {self.code} {self.span.label()} {self.message}"


def error(code: str, message: str, span: SourceSpan) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span)


def warning(code: str, message: str, span: SourceSpan) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span)


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


# --- class expressions and option values ---


class ClassExpression:
    """Base class for the class-expression tree."""

    __slots__ = ()


@dataclass(frozen=True)
class Named(ClassExpression):
    name: str


@dataclass(frozen=True)
class Some(ClassExpression):
    prop: str
    expr: ClassExpression


@dataclass(frozen=True)
class Only(ClassExpression):
    prop: str
    expr: ClassExpression


@dataclass(frozen=True)
class And(ClassExpression):
    exprs: tuple[ClassExpression, ...]

    def __post_init__(self) -> None:
        if len(self.exprs) < 2:
            raise ValueError("'and' needs at least two operands")


@dataclass(frozen=True)
class Or(ClassExpression):
    exprs: tuple[ClassExpression, ...]

    def __post_init__(self) -> None:
        if len(self.exprs) < 2:
            raise ValueError("'or' needs at least two operands")


@dataclass(frozen=True)
class Not(ClassExpression):
    expr: ClassExpression


def expression_names(expr: ClassExpression) -> Iterator[str]:
    """Yield every identifier occurring in ``expr``, in source order."""
    if isinstance(expr, Named):
        yield expr.name
    elif isinstance(expr, (Some, Only)):
        yield expr.prop
        yield from expression_names(expr.expr)
    elif isinstance(expr, (And, Or)):
        for sub in expr.exprs:
            yield from expression_names(sub)
    elif isinstance(expr, Not):
        yield from expression_names(expr.expr)
    else:  # pragma: no cover - defensive
        raise TypeError(f"not a class expression: {expr!r}")


@dataclass(frozen=True)
class TextValue:
    """A double-quoted text literal option value (escapes already decoded)."""

    text: str


@dataclass(frozen=True)
class Fact:
    """A ``(property individual)`` pair from a ``:fact`` option."""

    prop: str
    individual: str


OptionValue = Union[ClassExpression, TextValue, Fact]


# --- form grammar tables ---


class FormKind(enum.Enum):
    DEFONTOLOGY = "defontology"
    DEFCLASS = "defclass"
    DEFOPROPERTY = "defoproperty"
    DEFINDIVIDUAL = "defindividual"


class ValueKind(enum.Enum):
    EXPR = "class expression"
    NAME = "name"
    TEXT = "text literal"
    CHARACTERISTIC = "characteristic"
    FACT = "fact pair"


# Option keywords per form, in canonical print order. Mapping order matters.
FORM_OPTIONS: Mapping[FormKind, Mapping[str, ValueKind]] = {
    FormKind.DEFONTOLOGY: {
        "iri": ValueKind.TEXT,
        "comment": ValueKind.TEXT,
    },
    FormKind.DEFCLASS: {
        "super": ValueKind.EXPR,
        "equivalent": ValueKind.EXPR,
        "disjoint": ValueKind.EXPR,
        "label": ValueKind.TEXT,
        "comment": ValueKind.TEXT,
    },
    FormKind.DEFOPROPERTY: {
        "super": ValueKind.NAME,
        "domain": ValueKind.EXPR,
        "range": ValueKind.EXPR,
        "characteristic": ValueKind.CHARACTERISTIC,
        "label": ValueKind.TEXT,
        "comment": ValueKind.TEXT,
    },
    FormKind.DEFINDIVIDUAL: {
        "type": ValueKind.EXPR,
        "fact": ValueKind.FACT,
        "label": ValueKind.TEXT,
        "comment": ValueKind.TEXT,
    },
}

FORM_HEADS = frozenset(kind.value for kind in FormKind)
EXPRESSION_HEADS = ("some", "only", "and", "or", "not")
CHARACTERISTICS = frozenset({"transitive", "functional", "symmetric"})

#: Every surface form a locale bundle may translate in its [keywords] section.
KEYWORD_SURFACE_FORMS = frozenset(FORM_HEADS) | set(EXPRESSION_HEADS) | {
    keyword for options in FORM_OPTIONS.values() for keyword in options
}


@dataclass(frozen=True)
class Form:
    head: FormKind
    name: str
    options: Mapping[str, tuple[OptionValue, ...]]
    span: SourceSpan

    def option(self, keyword: str) -> tuple[OptionValue, ...]:
        return tuple(self.options.get(keyword, ()))

    def texts(self, keyword: str) -> list[str]:
        return [v.text for v in self.option(keyword) if isinstance(v, TextValue)]


class ChunkKind(enum.Enum):
    NARRATIVE = "narrative"
    CODE = "code"


@dataclass(frozen=True)
class Chunk:
    id: int
    kind: ChunkKind
    span: SourceSpan
    narrative_text: str = ""
    code_text: str = ""
    forms: tuple[Form, ...] = ()


class SymbolKind(enum.Enum):
    CLASS = "class"
    OBJECT_PROPERTY = "object-property"
    INDIVIDUAL = "individual"
    ONTOLOGY = "ontology"


FORM_SYMBOL_KINDS: Mapping[FormKind, SymbolKind] = {
    FormKind.DEFONTOLOGY: SymbolKind.ONTOLOGY,
    FormKind.DEFCLASS: SymbolKind.CLASS,
    FormKind.DEFOPROPERTY: SymbolKind.OBJECT_PROPERTY,
    FormKind.DEFINDIVIDUAL: SymbolKind.INDIVIDUAL,
}


@dataclass(frozen=True)
class SymbolEntry:
    kind: SymbolKind
    defining_chunk: int
    span: SourceSpan


@dataclass(frozen=True)
class SymbolTable:
    """Identifier table plus per-locale labels, keyed by (name, locale tag).

    The empty locale tag holds labels written with ``:label`` in the source.
    """

    entries: Mapping[str, SymbolEntry]
    labels: Mapping[tuple[str, str], str]

    def with_labels(self, extra: Mapping[tuple[str, str], str]) -> "SymbolTable":
        merged = dict(self.labels)
        for key, text in extra.items():
            merged.setdefault(key, text)
        return SymbolTable(entries=self.entries, labels=merged)

    def labels_for(self, name: str) -> dict[str, str]:
        return {loc: text for (n, loc), text in self.labels.items() if n == name}


@dataclass(frozen=True)
class OntologyHeader:
    name: str
    iri: Optional[str]
    span: SourceSpan


@dataclass(frozen=True)
class OntologyDoc:
    header: OntologyHeader
    chunks: tuple[Chunk, ...]
    symbols: SymbolTable

    def code_chunks(self) -> list[Chunk]:
        return [c for c in self.chunks if c.kind is ChunkKind.CODE]

    def forms(self) -> Iterator[Form]:
        for chunk in self.chunks:
            yield from chunk.forms


# --- canonical printing ---


def encode_text_literal(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


NameMap = Optional[Mapping[str, str]]
MissingHook = Optional[Callable[[str, SourceSpan], None]]


def _map_name(mapping: NameMap, name: str, span: SourceSpan, on_missing: MissingHook) -> str:
    if mapping is None:
        return name
    translated = mapping.get(name)
    if translated is None:
        if on_missing is not None:
            on_missing(name, span)
        return name
    return translated


def _format_expr(
    expr: ClassExpression, span: SourceSpan, kw: NameMap, ident: NameMap, miss: MissingHook
) -> str:
    if isinstance(expr, Named):
        return _map_name(ident, expr.name, span, miss)
    if isinstance(expr, (Some, Only)):
        head = "some" if isinstance(expr, Some) else "only"
        head = _map_name(kw, head, span, miss)
        prop = _map_name(ident, expr.prop, span, miss)
        return f"({head} {prop} {_format_expr(expr.expr, span, kw, ident, miss)})"
    if isinstance(expr, (And, Or)):
        head = _map_name(kw, "and" if isinstance(expr, And) else "or", span, miss)
        inner = " ".join(_format_expr(e, span, kw, ident, miss) for e in expr.exprs)
        return f"({head} {inner})"
    if isinstance(expr, Not):
        head = _map_name(kw, "not", span, miss)
        return f"({head} {_format_expr(expr.expr, span, kw, ident, miss)})"
    raise TypeError(f"not a class expression: {expr!r}")  # pragma: no cover


def _format_value(
    value: OptionValue, span: SourceSpan, kw: NameMap, ident: NameMap, miss: MissingHook
) -> str:
    if isinstance(value, TextValue):
        return encode_text_literal(value.text)
    if isinstance(value, Fact):
        prop = _map_name(ident, value.prop, span, miss)
        individual = _map_name(ident, value.individual, span, miss)
        return f"({prop} {individual})"
    return _format_expr(value, span, kw, ident, miss)


def format_form(
    form: Form,
    keywords: NameMap = None,
    identifiers: NameMap = None,
    on_missing: MissingHook = None,
) -> str:
    """Render one form in canonical layout, optionally mapping surface names."""
    head = _map_name(keywords, form.head.value, form.span, on_missing)
    name = _map_name(identifiers, form.name, form.span, on_missing)
    option_lines = []
    for keyword in FORM_OPTIONS[form.head]:
        values = form.options.get(keyword)
        if not values:
            continue
        translated = _map_name(keywords, keyword, form.span, on_missing)
        rendered = " ".join(
            _format_value(v, form.span, keywords, identifiers, on_missing) for v in values
        )
        option_lines.append(f"  :{translated} {rendered}")
    if not option_lines:
        return f"({head} {name})"
    return f"({head} {name}\n" + "\n".join(option_lines) + ")"


def format_narrative(narrative_text: str) -> str:
    lines = narrative_text.split("\n")
    return "\n".join(f";; {line}" if line else ";;" for line in lines)


def canonical_chunk_text(
    chunk: Chunk,
    keywords: NameMap = None,
    identifiers: NameMap = None,
    on_missing: MissingHook = None,
) -> str:
    if chunk.kind is ChunkKind.NARRATIVE:
        return format_narrative(chunk.narrative_text)
    return "\n".join(
        format_form(form, keywords, identifiers, on_missing) for form in chunk.forms
    )


def render_source(
    doc: OntologyDoc,
    keywords: NameMap = None,
    identifiers: NameMap = None,
    on_missing: MissingHook = None,
) -> str:
    chunks = [
        canonical_chunk_text(chunk, keywords, identifiers, on_missing)
        for chunk in doc.chunks
    ]
    return "\n\n".join(chunks) + "\n"


def canonical_print(doc: OntologyDoc) -> str:
    """Render ``doc`` in the canonical layout: two-space indented options, one
    option keyword per line, one blank line between chunks, trailing newline."""
    return render_source(doc)
