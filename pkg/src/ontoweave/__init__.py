"""ontoweave: a compiler for literate ontology sources.

Parses the `.lont` dialect into a document model and renders it as OWL
functional syntax, multilingual source, literate HTML, and editable Word
documents whose tracked changes come back as structured feedback.
"""

from .docx import (
    DocxDoc,
    DocxOptions,
    FeedbackItem,
    FeedbackReport,
    emit_docx,
    extract_feedback,
    read_docx,
    report_to_json,
)
from .locales import (
    Direction,
    LocaleBundle,
    inject_labels,
    invert_bundle,
    parse_bundle,
    translate_source,
    untranslate_source,
)
from .markdown import render_markdown
from .model import (
    And,
    Chunk,
    ChunkKind,
    ClassExpression,
    Diagnostic,
    Fact,
    Form,
    FormKind,
    Named,
    Not,
    Only,
    OntologyDoc,
    OntologyHeader,
    Or,
    Severity,
    Some,
    SourceSpan,
    SymbolEntry,
    SymbolKind,
    SymbolTable,
    TextValue,
    canonical_print,
    has_errors,
)
from .owl import EmitOptions, emit_functional, map_class_expression
from .reader import build_model, chunks_from_source, lint, load_document, parse, segment, tokenize
from .tabular import PatternTemplate, TableData, expand, parse_csv, render_expansion
from .weaver_html import TocEntry, WeaveOptions, classify_tokens, emit_html

__version__ = "0.1.0"
