"""Reader for literate ontology source (`.lont`): segmentation into narrative
and code chunks, lexing with source spans, form parsing, and model building.

All functions are pure and total over their inputs; problems are reported as
`Diagnostic` values rather than exceptions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .markdown import malformed_inline_reason
from .model import (
    And,
    CHARACTERISTICS,
    Chunk,
    ChunkKind,
    ClassExpression,
    Diagnostic,
    EXPRESSION_HEADS,
    FORM_OPTIONS,
    FORM_SYMBOL_KINDS,
    Fact,
    Form,
    FormKind,
    Named,
    Not,
    Only,
    OntologyDoc,
    OntologyHeader,
    Or,
    OptionValue,
    Some,
    SourceSpan,
    SymbolEntry,
    SymbolKind,
    SymbolTable,
    TextValue,
    ValueKind,
    error,
    expression_names,
    warning,
)


class TokenKind(enum.Enum):
    LPAREN = "("
    RPAREN = ")"
    SYMBOL = "symbol"
    OPTION_KEYWORD = "option keyword"
    TEXT = "text literal"
    INTEGER = "integer"
    # Remarks are skipped by the parser; they exist only so syntax
    # highlighting can classify every character of a chunk.
    REMARK = "remark"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: SourceSpan


@dataclass(frozen=True)
class RawChunk:
    """A contiguous run of source lines of one kind, before parsing.

    ``lines`` holds (1-based line number, raw text) pairs exactly as they
    appear in the (newline-normalized) source.
    """

    kind: ChunkKind
    lines: tuple[tuple[int, str], ...]

    def span(self) -> SourceSpan:
        first_line, _ = self.lines[0]
        last_line, last_text = self.lines[-1]
        return SourceSpan(first_line, 1, last_line, len(last_text) + 1)

    def raw_text(self) -> str:
        return "\n".join(text for _, text in self.lines)

    def narrative_text(self) -> str:
        parts = []
        for _, text in self.lines:
            stripped = text.lstrip()[2:]
            if stripped.startswith(" "):
                stripped = stripped[1:]
            parts.append(stripped)
        return "\n".join(parts)


def normalize_newlines(source: str) -> str:
    return source.replace("\r\n", "\n").replace("\r", "\n")


def _is_narrative_line(line: str) -> bool:
    return line.lstrip().startswith(";;")


def segment(source: str) -> list[RawChunk]:
    """Split source text into narrative and code chunks.

    Lines whose first non-blank characters are ``;;`` are narrative; blank
    lines end the current chunk; everything else (including single-``;``
    remark lines) is code. Segmentation is total: it never fails.
    """
    chunks: list[RawChunk] = []
    current_kind: ChunkKind | None = None
    current_lines: list[tuple[int, str]] = []

    def flush() -> None:
        nonlocal current_kind, current_lines
        if current_kind is not None and current_lines:
            chunks.append(RawChunk(current_kind, tuple(current_lines)))
        current_kind = None
        current_lines = []

    for number, text in enumerate(normalize_newlines(source).split("\n"), start=1):
        if not text.strip():
            flush()
            continue
        kind = ChunkKind.NARRATIVE if _is_narrative_line(text) else ChunkKind.CODE
        if kind is not current_kind:
            flush()
            current_kind = kind
        current_lines.append((number, text))
    flush()
    return chunks


# --- lexer ---

_SYMBOL_CONTINUATION = set("-_/!?.")
_TEXT_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def is_symbol_start(ch: str) -> bool:
    return ch.isalpha()


def is_symbol_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit() or ch in _SYMBOL_CONTINUATION


def is_valid_symbol(text: str) -> bool:
    return bool(text) and is_symbol_start(text[0]) and all(is_symbol_char(c) for c in text[1:])


def tokenize(
    code_text: str, first_line: int = 1, keep_remarks: bool = False
) -> tuple[list[Token], list[Diagnostic]]:
    """Lex the text of one code chunk.

    ``first_line`` anchors spans in whole-file coordinates. Text literal
    lexemes have their escapes decoded; their spans cover the undecoded
    characters between the quotes, so spans always re-slice to raw source.
    """
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    for offset, line in enumerate(code_text.split("\n")):
        lineno = first_line + offset
        i = 0
        n = len(line)
        while i < n:
            ch = line[i]
            if ch in " \t":
                i += 1
                continue
            col = i + 1
            if ch == "(":
                tokens.append(Token(TokenKind.LPAREN, "(", SourceSpan(lineno, col, lineno, col + 1)))
                i += 1
            elif ch == ")":
                tokens.append(Token(TokenKind.RPAREN, ")", SourceSpan(lineno, col, lineno, col + 1)))
                i += 1
            elif ch == ";":
                if keep_remarks:
                    tokens.append(
                        Token(TokenKind.REMARK, line[i:], SourceSpan(lineno, col, lineno, n + 1))
                    )
                i = n
            elif ch == '"':
                i += 1
                start = i
                decoded: list[str] = []
                terminated = False
                while i < n:
                    c = line[i]
                    if c == "\\":
                        if i + 1 < n and line[i + 1] in _TEXT_ESCAPES:
                            decoded.append(_TEXT_ESCAPES[line[i + 1]])
                            i += 2
                            continue
                        diagnostics.append(
                            error(
                                "E002",
                                f"unknown escape sequence \\{line[i + 1] if i + 1 < n else ''}",
                                SourceSpan(lineno, i + 1, lineno, min(i + 3, n + 1)),
                            )
                        )
                        i += 2
                        continue
                    if c == '"':
                        terminated = True
                        break
                    decoded.append(c)
                    i += 1
                if not terminated:
                    diagnostics.append(
                        error(
                            "E001",
                            "unterminated text literal",
                            SourceSpan(lineno, col, lineno, n + 1),
                        )
                    )
                    break
                tokens.append(
                    Token(
                        TokenKind.TEXT,
                        "".join(decoded),
                        SourceSpan(lineno, start + 1, lineno, i + 1),
                    )
                )
                i += 1
            elif ch == ":":
                j = i + 1
                if j < n and is_symbol_start(line[j]):
                    j += 1
                    while j < n and is_symbol_char(line[j]):
                        j += 1
                    tokens.append(
                        Token(TokenKind.OPTION_KEYWORD, line[i:j], SourceSpan(lineno, col, lineno, j + 1))
                    )
                    i = j
                else:
                    diagnostics.append(
                        error("E002", "':' must introduce an option keyword", SourceSpan(lineno, col, lineno, col + 1))
                    )
                    i += 1
            elif ch.isdigit():
                j = i
                while j < n and line[j].isdigit():
                    j += 1
                tokens.append(
                    Token(TokenKind.INTEGER, line[i:j], SourceSpan(lineno, col, lineno, j + 1))
                )
                i = j
            elif is_symbol_start(ch):
                j = i + 1
                while j < n and is_symbol_char(line[j]):
                    j += 1
                tokens.append(
                    Token(TokenKind.SYMBOL, line[i:j], SourceSpan(lineno, col, lineno, j + 1))
                )
                i = j
            else:
                diagnostics.append(
                    error("E002", f"illegal character {ch!r}", SourceSpan(lineno, col, lineno, col + 1))
                )
                i += 1
    return tokens, diagnostics


# --- parser ---


class _ParseFailure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def end_span(self) -> SourceSpan:
        if self.tokens:
            last = self.tokens[-1].span
            return SourceSpan(last.end_line, last.end_column, last.end_line, last.end_column)
        return SourceSpan(1, 1, 1, 1)


def _fail(code: str, message: str, span: SourceSpan) -> _ParseFailure:
    return _ParseFailure(error(code, message, span))


def _parse_expression(stream: _TokenStream, opening: Token) -> ClassExpression:
    head = stream.next()
    if head is None:
        raise _fail("E010", "unbalanced parentheses", stream.end_span())
    if head.kind is not TokenKind.SYMBOL:
        raise _fail("E013", "expected an expression head symbol", head.span)
    if head.lexeme not in EXPRESSION_HEADS:
        raise _fail("E011", f"unknown expression head '{head.lexeme}'", head.span)

    if head.lexeme in ("some", "only"):
        prop = stream.next()
        if prop is None:
            raise _fail("E010", "unbalanced parentheses", stream.end_span())
        if prop.kind is not TokenKind.SYMBOL:
            raise _fail("E013", f"'{head.lexeme}' expects a property name", prop.span)
        expr = _parse_operand(stream, head)
        _expect_rparen(stream, opening, head)
        cls = Some if head.lexeme == "some" else Only
        return cls(prop.lexeme, expr)

    if head.lexeme in ("and", "or"):
        operands: list[ClassExpression] = []
        while True:
            tok = stream.peek()
            if tok is None:
                raise _fail("E010", "unbalanced parentheses", stream.end_span())
            if tok.kind is TokenKind.RPAREN:
                stream.next()
                break
            operands.append(_parse_operand(stream, head))
        if len(operands) < 2:
            raise _fail(
                "E013", f"'{head.lexeme}' needs at least two operands", head.span
            )
        cls = And if head.lexeme == "and" else Or
        return cls(tuple(operands))

    # not
    expr = _parse_operand(stream, head)
    _expect_rparen(stream, opening, head)
    return Not(expr)


def _expect_rparen(stream: _TokenStream, opening: Token, head: Token) -> None:
    tok = stream.next()
    if tok is None:
        raise _fail("E010", "unbalanced parentheses", stream.end_span())
    if tok.kind is not TokenKind.RPAREN:
        raise _fail("E013", f"too many operands for '{head.lexeme}'", tok.span)


def _parse_operand(stream: _TokenStream, context: Token) -> ClassExpression:
    tok = stream.next()
    if tok is None:
        raise _fail("E010", "unbalanced parentheses", stream.end_span())
    if tok.kind is TokenKind.SYMBOL:
        return Named(tok.lexeme)
    if tok.kind is TokenKind.LPAREN:
        return _parse_expression(stream, tok)
    raise _fail("E013", f"expected a class expression, found {tok.kind.value}", tok.span)


def _parse_fact(stream: _TokenStream) -> Fact:
    tok = stream.next()
    if tok is None or tok.kind is not TokenKind.LPAREN:
        span = tok.span if tok is not None else stream.end_span()
        raise _fail("E013", ":fact expects a (property individual) pair", span)
    prop = stream.next()
    individual = stream.next()
    closing = stream.next()
    if (
        prop is None
        or individual is None
        or closing is None
        or prop.kind is not TokenKind.SYMBOL
        or individual.kind is not TokenKind.SYMBOL
        or closing.kind is not TokenKind.RPAREN
    ):
        raise _fail("E013", ":fact expects a (property individual) pair", tok.span)
    return Fact(prop.lexeme, individual.lexeme)


def _parse_option_value(stream: _TokenStream, keyword: Token, kind: ValueKind) -> OptionValue:
    if kind is ValueKind.FACT:
        return _parse_fact(stream)
    tok = stream.next()
    assert tok is not None  # caller checked
    if kind is ValueKind.TEXT:
        if tok.kind is not TokenKind.TEXT:
            raise _fail("E013", f"{keyword.lexeme} expects a quoted text literal", tok.span)
        return TextValue(tok.lexeme)
    if kind is ValueKind.NAME:
        if tok.kind is not TokenKind.SYMBOL:
            raise _fail("E013", f"{keyword.lexeme} expects a name", tok.span)
        return Named(tok.lexeme)
    if kind is ValueKind.CHARACTERISTIC:
        if tok.kind is not TokenKind.SYMBOL or tok.lexeme not in CHARACTERISTICS:
            allowed = ", ".join(sorted(CHARACTERISTICS))
            raise _fail("E013", f"{keyword.lexeme} expects one of: {allowed}", tok.span)
        return Named(tok.lexeme)
    # EXPR
    if tok.kind is TokenKind.SYMBOL:
        return Named(tok.lexeme)
    if tok.kind is TokenKind.LPAREN:
        return _parse_expression(stream, tok)
    raise _fail("E013", f"{keyword.lexeme} expects a class expression", tok.span)


def _parse_form(stream: _TokenStream, opening: Token) -> Form:
    head_tok = stream.next()
    if head_tok is None:
        raise _fail("E010", "unbalanced parentheses", stream.end_span())
    if head_tok.kind is not TokenKind.SYMBOL or head_tok.lexeme not in FORM_SYMBOL_KINDS_BY_HEAD:
        raise _fail("E011", f"unknown form head '{head_tok.lexeme}'", head_tok.span)
    head = FORM_SYMBOL_KINDS_BY_HEAD[head_tok.lexeme]
    allowed = FORM_OPTIONS[head]

    name_tok = stream.next()
    if name_tok is None:
        raise _fail("E010", "unbalanced parentheses", stream.end_span())
    if name_tok.kind is not TokenKind.SYMBOL:
        raise _fail("E013", f"{head.value} expects a name", name_tok.span)

    options: dict[str, list[OptionValue]] = {}
    while True:
        tok = stream.next()
        if tok is None:
            raise _fail("E010", "unbalanced parentheses", stream.end_span())
        if tok.kind is TokenKind.RPAREN:
            end = tok.span
            break
        if tok.kind is not TokenKind.OPTION_KEYWORD:
            raise _fail("E013", f"expected an option keyword, found '{tok.lexeme}'", tok.span)
        keyword = tok.lexeme[1:]
        if keyword not in allowed:
            raise _fail("E012", f"unknown option keyword {tok.lexeme} for {head.value}", tok.span)
        values = options.setdefault(keyword, [])
        count_before = len(values)
        while True:
            nxt = stream.peek()
            if nxt is None:
                raise _fail("E010", "unbalanced parentheses", stream.end_span())
            if nxt.kind in (TokenKind.RPAREN, TokenKind.OPTION_KEYWORD):
                break
            values.append(_parse_option_value(stream, tok, allowed[keyword]))
        if len(values) == count_before:
            raise _fail("E013", f"option {tok.lexeme} needs at least one value", tok.span)

    if len(options.get("iri", ())) > 1:
        raise _fail("E013", ":iri takes exactly one value", opening.span)

    span = SourceSpan(
        opening.span.start_line, opening.span.start_column, end.end_line, end.end_column
    )
    return Form(head, name_tok.lexeme, {k: tuple(v) for k, v in options.items()}, span)


FORM_SYMBOL_KINDS_BY_HEAD = {kind.value: kind for kind in FormKind}


def parse(tokens: list[Token]) -> tuple[list[Form], list[Diagnostic]]:
    """Parse the token stream of one code chunk into top-level forms.

    Stops at the first syntax error in the chunk; other chunks are
    unaffected because each chunk is parsed independently.
    """
    stream = _TokenStream([t for t in tokens if t.kind is not TokenKind.REMARK])
    forms: list[Form] = []
    try:
        while True:
            tok = stream.next()
            if tok is None:
                break
            if tok.kind is TokenKind.RPAREN:
                raise _fail("E010", "unexpected ')'", tok.span)
            if tok.kind is not TokenKind.LPAREN:
                raise _fail("E011", f"expected a form, found '{tok.lexeme}'", tok.span)
            forms.append(_parse_form(stream, tok))
    except _ParseFailure as failure:
        return forms, [failure.diagnostic]
    return forms, []


# --- model building ---


def build_model(chunks: list[Chunk]) -> tuple[OntologyDoc | None, list[Diagnostic]]:
    """Assemble parsed chunks into a document with a populated symbol table.

    The first form in the document must be the ontology header. Duplicate
    definitions are errors; references to names never defined anywhere in
    the document are warnings (W001), one per occurrence.
    """
    diagnostics: list[Diagnostic] = []
    header: OntologyHeader | None = None
    entries: dict[str, SymbolEntry] = {}
    labels: dict[tuple[str, str], str] = {}

    first_form = next((f for c in chunks for f in c.forms), None)
    if first_form is None or first_form.head is not FormKind.DEFONTOLOGY:
        span = first_form.span if first_form is not None else SourceSpan(1, 1, 1, 1)
        diagnostics.append(
            error("E020", "the first form must be a defontology header", span)
        )
        return None, diagnostics

    for chunk in chunks:
        for form in chunk.forms:
            if form.head is FormKind.DEFONTOLOGY and form is not first_form:
                diagnostics.append(
                    error("E020", "defontology must be the first form in the document", form.span)
                )
                continue
            if form.name in entries:
                diagnostics.append(
                    error("E021", f"duplicate definition of '{form.name}'", form.span)
                )
                continue
            entries[form.name] = SymbolEntry(FORM_SYMBOL_KINDS[form.head], chunk.id, form.span)
            for text in form.texts("label"):
                labels.setdefault((form.name, ""), text)

    iris = first_form.texts("iri")
    header = OntologyHeader(first_form.name, iris[0] if iris else None, first_form.span)

    doc = OntologyDoc(
        header=header,
        chunks=tuple(chunks),
        symbols=SymbolTable(entries=entries, labels=labels),
    )
    diagnostics.extend(undefined_reference_warnings(doc))
    if any(d.code in ("E020", "E021") for d in diagnostics):
        return None, diagnostics
    return doc, diagnostics


def _referenced_names(form: Form):
    """Yield (name, span) for every identifier reference a form makes.

    Characteristic values are grammar symbols, not references; text literals
    never reference anything.
    """
    kinds = FORM_OPTIONS[form.head]
    for keyword, values in form.options.items():
        kind = kinds[keyword]
        for value in values:
            if kind is ValueKind.EXPR:
                for name in expression_names(value):
                    yield name, form.span
            elif kind is ValueKind.NAME:
                yield value.name, form.span
            elif kind is ValueKind.FACT:
                yield value.prop, form.span
                yield value.individual, form.span


def undefined_reference_warnings(doc: OntologyDoc) -> list[Diagnostic]:
    out = []
    for form in doc.forms():
        for name, span in _referenced_names(form):
            if name not in doc.symbols.entries:
                out.append(warning("W001", f"reference to undefined name '{name}'", span))
    return out


def lint(doc: OntologyDoc) -> list[Diagnostic]:
    """Documentation-quality pass: undefined references (W001), entities with
    neither label nor comment (W002), malformed narrative Markdown (W003)."""
    diagnostics = undefined_reference_warnings(doc)
    for chunk in doc.chunks:
        for form in chunk.forms:
            if form.name not in doc.symbols.entries:
                continue  # duplicate definition already reported
            if doc.symbols.entries[form.name].span != form.span:
                continue
            has_label = any(n == form.name for (n, _loc) in doc.symbols.labels)
            if not has_label and not form.texts("comment"):
                diagnostics.append(
                    warning(
                        "W002",
                        f"'{form.name}' has neither a label nor a comment",
                        form.span,
                    )
                )
        if chunk.kind is ChunkKind.NARRATIVE:
            reason = malformed_inline_reason(chunk.narrative_text)
            if reason is not None:
                diagnostics.append(warning("W003", f"malformed markdown: {reason}", chunk.span))
    return diagnostics


# --- whole-file pipeline ---


def chunks_from_source(source: str) -> tuple[list[Chunk], list[Diagnostic]]:
    """Segment, lex, and parse source text into model chunks."""
    diagnostics: list[Diagnostic] = []
    chunks: list[Chunk] = []
    for index, raw in enumerate(segment(source)):
        span = raw.span()
        if raw.kind is ChunkKind.NARRATIVE:
            chunks.append(
                Chunk(
                    id=index,
                    kind=ChunkKind.NARRATIVE,
                    span=span,
                    narrative_text=raw.narrative_text(),
                )
            )
            continue
        code_text = raw.raw_text()
        tokens, token_diags = tokenize(code_text, first_line=raw.lines[0][0])
        diagnostics.extend(token_diags)
        forms: tuple = ()
        if not token_diags:
            parsed, parse_diags = parse(tokens)
            diagnostics.extend(parse_diags)
            if not parse_diags:
                forms = tuple(parsed)
        chunks.append(
            Chunk(id=index, kind=ChunkKind.CODE, span=span, code_text=code_text, forms=forms)
        )
    return chunks, diagnostics


def load_document(source: str) -> tuple[OntologyDoc | None, list[Diagnostic]]:
    """Parse source text all the way to an OntologyDoc.

    Returns (None, diagnostics) when any chunk fails to lex or parse or the
    model cannot be assembled.
    """
    chunks, diagnostics = chunks_from_source(source)
    if diagnostics:
        return None, diagnostics
    doc, build_diags = build_model(chunks)
    return doc, diagnostics + build_diags
