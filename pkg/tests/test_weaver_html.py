"""Markdown rendering, token classification, and HTML weaving."""

import json
import re

from ontoweave import load_document
from ontoweave.locales import Direction
from ontoweave.markdown import render_markdown
from ontoweave.model import ChunkKind, slice_span
from ontoweave.weaver_html import WeaveOptions, anchor_text, classify_tokens, emit_html

from conftest import fixture_text
from oracles import external_resource_references, unresolved_def_links


# --- render_markdown ---


def test_heading_levels():
    assert render_markdown("# Pizza").startswith("<h1")
    assert "</h1>" in render_markdown("# Pizza")
    assert render_markdown("#### Deep").startswith("<h4")


def test_emphasis_and_strong_and_code():
    html = render_markdown("see *this* and **that** and `code`")
    assert "<em>this</em>" in html
    assert "<strong>that</strong>" in html
    assert "<code>code</code>" in html


def test_links_render_with_href():
    html = render_markdown("[docs](notes.html)")
    assert '<a href="notes.html">docs</a>' in html


def test_raw_html_is_escaped():
    html = render_markdown("<script>alert(1)</script>")
    assert "<script" not in html
    assert "&lt;script&gt;" in html


def test_unordered_list():
    html = render_markdown("- one\n- two")
    assert html == "<ul><li>one</li><li>two</li></ul>"


def test_malformed_constructs_render_literally():
    html = render_markdown("a *b")
    assert html == "<p>a *b</p>"


def test_paragraph_split_on_blank_lines():
    html = render_markdown("one\n\ntwo")
    assert html == "<p>one</p>\n<p>two</p>"


# --- anchors ---


def test_anchor_normalization():
    assert anchor_text("Pizza Base") == "pizza-base"
    assert anchor_text("Has  Topping!") == "has-topping"
    assert anchor_text("??") == ""
    assert anchor_text("بيتزا") == "بيتزا"


# --- classify_tokens ---


def run_texts(chunk, runs):
    padded = "\n" * (chunk.span.start_line - 1) + chunk.code_text
    return [(slice_span(padded, span), cls) for span, cls in runs]


def test_expression_heads_and_options_classified():
    doc, _ = load_document(
        "(defontology t)\n\n(defoproperty p :domain A :range A)\n(defclass A)\n"
        "(defclass B :super (some p A))\n"
    )
    chunk = doc.code_chunks()[-1]
    texts = run_texts(chunk, classify_tokens(chunk, doc.symbols))
    classes = {}
    for text, cls in texts:
        classes.setdefault(text.strip(), cls)
    assert classes["some"] == "keyword"
    assert classes["defclass"] == "keyword"
    assert classes[":super"] == "option"
    assert classes["("] == "paren"


def test_definition_site_vs_reference():
    doc, _ = load_document("(defontology t)\n\n(defclass Pizza)\n\n(defclass M :super Pizza)\n")
    by_chunk = {c.id: c for c in doc.code_chunks()}
    def_runs = run_texts(by_chunk[1], classify_tokens(by_chunk[1], doc.symbols))
    ref_runs = run_texts(by_chunk[2], classify_tokens(by_chunk[2], doc.symbols))
    assert any(t.strip() == "Pizza" and c == "entity-def" for t, c in def_runs)
    assert any(t.strip() == "Pizza" and c == "entity-ref" for t, c in ref_runs)


def test_remark_classified():
    doc, _ = load_document("(defontology t)\n\n(defclass A) ; keep this\n")
    chunk = doc.code_chunks()[-1]
    runs = run_texts(chunk, classify_tokens(chunk, doc.symbols))
    assert any(c == "remark" and "; keep this" in t for t, c in runs)


def test_text_literal_spans_include_quotes():
    doc, _ = load_document('(defontology t :comment "hello")\n')
    chunk = doc.code_chunks()[0]
    runs = run_texts(chunk, classify_tokens(chunk, doc.symbols))
    assert any(t.strip() == '"hello"' and c == "text-literal" for t, c in runs)


def test_characteristics_are_keywords_not_references():
    doc, _ = load_document(
        "(defontology t)\n\n(defclass A)\n\n(defoproperty p :domain A :range A :characteristic functional)\n"
    )
    chunk = doc.code_chunks()[-1]
    runs = run_texts(chunk, classify_tokens(chunk, doc.symbols))
    assert any(t.strip() == "functional" and c == "keyword" for t, c in runs)


def test_classification_coverage_on_fixtures(pizza_doc, aminoacid_doc):
    for doc, name in ((pizza_doc, "pizza.lont"), (aminoacid_doc, "aminoacid.lont")):
        source = fixture_text(name).replace("\r\n", "\n")
        for chunk in doc.code_chunks():
            runs = classify_tokens(chunk, doc.symbols)
            rebuilt = "".join(slice_span(source, span) for span, _ in runs)
            assert rebuilt == chunk.code_text


# --- emit_html ---


def weave(source, **kwargs):
    doc, diagnostics = load_document(source)
    assert doc is not None, [d.render() for d in diagnostics]
    return emit_html(doc, WeaveOptions(**kwargs) if kwargs else None)


def manifest_of(html):
    match = re.search(
        r'<script type="application/json" id="ow-manifest">(.*?)</script>', html, re.S
    )
    assert match is not None
    return json.loads(match.group(1).replace("<\\/", "</"))


def test_document_with_no_code_chunks():
    # Assembled in memory: narrative only, nothing defined.
    from ontoweave.model import (
        Chunk,
        ChunkKind,
        DUMMY_SPAN,
        OntologyDoc,
        OntologyHeader,
        SymbolTable,
    )

    doc = OntologyDoc(
        header=OntologyHeader("empty", None, DUMMY_SPAN),
        chunks=(Chunk(id=0, kind=ChunkKind.NARRATIVE, span=DUMMY_SPAN, narrative_text="# Hi"),),
        symbols=SymbolTable(entries={}, labels={}),
    )
    html, diagnostics = emit_html(doc)
    assert diagnostics == []
    assert "<!DOCTYPE html>" in html
    assert manifest_of(html)["entities"] == []
    assert "ow-toggle" not in html.split("<main")[1].split("</main>")[0]


def test_code_chunks_have_ids_and_toggles(pizza_doc):
    html, _ = emit_html(pizza_doc)
    for chunk in pizza_doc.code_chunks():
        assert f'id="chunk-{chunk.id}"' in html
        assert f'data-chunk="{chunk.id}"' in html


def test_rtl_direction_attribute(pizza_doc):
    html, _ = emit_html(pizza_doc, WeaveOptions(direction=Direction.RTL))
    assert '<html lang="" dir="rtl">' in html
    default, _ = emit_html(pizza_doc)
    assert 'dir="rtl"' not in default


def test_hide_source_default_collapses(pizza_doc):
    html, _ = emit_html(pizza_doc, WeaveOptions(hide_source_default=True))
    assert "<pre hidden>" in html
    assert ">show source</button>" in html
    shown, _ = emit_html(pizza_doc)
    assert "<pre hidden>" not in shown


def test_entity_links_resolve(pizza_doc):
    html, _ = emit_html(pizza_doc)
    assert unresolved_def_links(html) == set()


def test_undefined_reference_produces_unresolved_link():
    doc, diagnostics = load_document("(defontology t)\n\n(defclass A :super Ghost)\n")
    w001 = [d for d in diagnostics if d.code == "W001"]
    html, _ = emit_html(doc)
    assert len(unresolved_def_links(html)) == len(w001) == 1


def test_unresolved_href_occurrences_equal_w001_occurrences():
    source = "(defontology t)\n\n(defclass A :super B :equivalent (some B C))\n"
    doc, diagnostics = load_document(source)
    w001 = [d for d in diagnostics if d.code == "W001"]
    html, _ = emit_html(doc)
    ids = set(re.findall(r'id="(def-[^"]+)"', html))
    hrefs = [h for h in re.findall(r'href="#(def-[^"]+)"', html) if h not in ids]
    assert len(hrefs) == len(w001) == 3


def test_anchor_collision_resolved_with_suffix_and_w011():
    html, diagnostics = weave("(defontology pizza)\n\n(defclass Pizza)\n")
    assert [d.code for d in diagnostics] == ["W011"]
    assert 'id="def-pizza"' in html
    assert 'id="def-pizza-2"' in html


def test_heading_anchor_collision_suffixed():
    source = ";; # Same\n\n(defontology t)\n\n;; # Same\n\n(defclass A)\n"
    html, diagnostics = weave(source)
    assert 'id="same"' in html and 'id="same-2"' in html
    assert any(d.code == "W011" for d in diagnostics)


def test_toc_built_from_headings(pizza_doc):
    html, _ = emit_html(pizza_doc)
    assert '<a class="ow-toc-link" href="#pizza-ontology">Pizza Ontology</a>' in html
    assert '<a class="ow-toc-link" href="#toppings">Toppings</a>' in html


def test_self_contained(pizza_doc):
    html, _ = emit_html(pizza_doc)
    assert external_resource_references(html) == []
    assert "<style>" in html and "<script>" in html


def test_manifest_embeds_labels(pizza_doc, it_bundle, ar_bundle):
    html, _ = emit_html(pizza_doc, WeaveOptions(bundles=(it_bundle, ar_bundle)))
    manifest = manifest_of(html)
    by_name = {e["name"]: e for e in manifest["entities"]}
    assert by_name["Pizza"]["labels"]["ar"] == "بيتزا"
    assert by_name["Pizza"]["labels"]["it"] == "Pizza"
    assert by_name["Pizza"]["kind"] == "class"
    assert manifest["direction"] == "ltr"
    assert len(by_name) == len(pizza_doc.symbols.entries)


def test_deterministic_output(pizza_doc, it_bundle):
    options = WeaveOptions(bundles=(it_bundle,))
    assert emit_html(pizza_doc, options) == emit_html(pizza_doc, options)


def test_locale_selector_lists_bundle_locales(pizza_doc, it_bundle, ar_bundle):
    html, _ = emit_html(pizza_doc, WeaveOptions(bundles=(it_bundle, ar_bundle)))
    assert '<option value="ar">ar</option>' in html
    assert '<option value="it">it</option>' in html
    assert '<option value="">original names</option>' in html
