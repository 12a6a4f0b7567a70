"""Canonical printer and model invariants."""

import pytest

from ontoweave import canonical_print, load_document
from ontoweave.model import (
    And,
    DUMMY_SPAN,
    Named,
    Or,
    SourceSpan,
    encode_text_literal,
    slice_span,
)

from conftest import fixture_text


def roundtrip(source: str) -> str:
    doc, diagnostics = load_document(source)
    assert doc is not None, [d.render() for d in diagnostics]
    return canonical_print(doc)


HEADER = '(defontology t :iri "https://example.org/t#")\n\n'


def test_single_option_layout():
    out = roundtrip(HEADER + "(defclass A :super B)")
    assert out.endswith("(defclass A\n  :super B)\n")


def test_form_without_options_stays_on_one_line():
    out = roundtrip(HEADER + "(defclass Pizza)")
    assert out.endswith("(defclass Pizza)\n")


def test_narrative_reemitted_with_comment_prefix():
    out = roundtrip(";; # Pizza\n\n" + HEADER.strip())
    assert out.startswith(";; # Pizza\n\n(defontology t\n")


def test_blank_narrative_line_has_no_trailing_space():
    out = roundtrip(";; a\n;;\n;; b\n\n" + HEADER.strip())
    assert out.startswith(";; a\n;;\n;; b\n")


def test_exactly_one_blank_line_between_chunks_and_final_newline():
    out = roundtrip(HEADER + "(defclass A)\n\n\n\n(defclass B)\n")
    assert "\n\n\n" not in out
    assert out.endswith(")\n")
    assert not out.endswith("\n\n")


def test_multiple_forms_in_one_chunk_stay_adjacent():
    out = roundtrip(HEADER + "(defclass A)\n(defclass B)")
    assert "(defclass A)\n(defclass B)\n" in out


def test_canonical_print_idempotent_on_fixtures():
    for name in ("pizza.lont", "aminoacid.lont"):
        once = roundtrip(fixture_text(name))
        assert roundtrip(once) == once


def test_option_order_is_fixed():
    # :label before :comment regardless of source order; :super first.
    out = roundtrip(HEADER + '(defclass A :comment "c" :label "l" :super B)')
    body = out.split("\n\n")[1]
    assert body.index(":super") < body.index(":label") < body.index(":comment")


def test_repeated_keyword_values_merge():
    out = roundtrip(HEADER + "(defclass A :super B :super C)")
    assert "  :super B C)" in out


def test_text_literal_escapes_roundtrip():
    out = roundtrip(HEADER + '(defclass A :label "say \\"hi\\"\\n\\t\\\\")')
    assert '"say \\"hi\\"\\n\\t\\\\"' in out
    again = roundtrip(out)
    assert again == out


def test_encode_text_literal():
    assert encode_text_literal('a"b\\c\nd\te') == '"a\\"b\\\\c\\nd\\te"'


def test_and_or_arity_enforced_in_model():
    with pytest.raises(ValueError):
        And((Named("A"),))
    with pytest.raises(ValueError):
        Or((Named("B"),))


def test_span_validation():
    with pytest.raises(ValueError):
        SourceSpan(2, 1, 1, 1)
    assert DUMMY_SPAN.start_line == 1


def test_slice_span_multiline():
    text = "abc\ndef\nghi"
    assert slice_span(text, SourceSpan(1, 2, 3, 2)) == "bc\ndef\ng"
    assert slice_span(text, SourceSpan(2, 1, 2, 4)) == "def"


def test_chunk_spans_reslice_to_raw_text(pizza_doc):
    source = fixture_text("pizza.lont").replace("\r\n", "\n")
    for chunk in pizza_doc.chunks:
        sliced = slice_span(source, chunk.span)
        if chunk.kind.value == "code":
            assert sliced == chunk.code_text
        else:
            assert all(line.lstrip().startswith(";;") for line in sliced.split("\n"))
