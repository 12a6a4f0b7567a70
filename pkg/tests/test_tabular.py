"""CSV parsing and template-driven chunk generation."""

from ontoweave import load_document, canonical_print
from ontoweave.tabular import (
    GeneratedChunk,
    PatternTemplate,
    expand,
    parse_csv,
    render_expansion,
)


# --- parse_csv ---


def test_header_and_row():
    table, diagnostics = parse_csv("name,super\nMargherita,Pizza\n")
    assert not diagnostics
    assert table.header == ("name", "super")
    assert table.rows == (("Margherita", "Pizza"),)


def test_quoted_field_with_comma():
    table, _ = parse_csv('a,b\nx,"b,c"\n')
    assert table.rows == (("x", "b,c"),)


def test_quote_escaping():
    table, _ = parse_csv('a\n"say ""hi"""\n')
    assert table.rows == (('say "hi"',),)


def test_crlf_accepted():
    table, _ = parse_csv("a,b\r\n1,2\r\n")
    assert table.rows == (("1", "2"),)


def test_ragged_row_is_e070_with_line():
    table, diagnostics = parse_csv("a,b\n1,2\n1\n")
    assert table is None
    assert [d.code for d in diagnostics] == ["E070"]
    assert diagnostics[0].span.start_line == 3


def test_unterminated_quote_is_e071():
    table, diagnostics = parse_csv('a\n"oops\n')
    assert table is None
    assert [d.code for d in diagnostics] == ["E071"]


def test_duplicate_column_is_e072():
    table, diagnostics = parse_csv("a,a\n1,2\n")
    assert table is None
    assert [d.code for d in diagnostics] == ["E072"]


def test_multiline_quoted_field():
    table, _ = parse_csv('a,b\n"line1\nline2",x\n')
    assert table.rows == (("line1\nline2", "x"),)


# --- expand ---


TEMPLATE = PatternTemplate("(defclass {name} :super {super})")


def test_empty_table_expands_to_nothing():
    table, _ = parse_csv("name,super\n")
    generated, diagnostics = expand(table, TEMPLATE)
    assert generated == [] and diagnostics == []


def test_substitution_and_parse():
    table, _ = parse_csv("name,super\nMargherita,Pizza\n")
    generated, diagnostics = expand(table, TEMPLATE)
    assert not diagnostics
    assert len(generated) == 1
    form = generated[0].form
    assert form.name == "Margherita"
    assert form.option("super")[0].name == "Pizza"


def test_rows_expand_in_order():
    rows = "\n".join(f"C{i},Base" for i in range(10))
    table, _ = parse_csv("name,super\n" + rows + "\n")
    generated, diagnostics = expand(table, TEMPLATE)
    assert not diagnostics
    assert [g.row_number for g in generated] == list(range(1, 11))
    assert [g.form.name for g in generated] == [f"C{i}" for i in range(10)]


def test_unknown_placeholder_is_e073():
    table, _ = parse_csv("name\nA\n")
    generated, diagnostics = expand(table, PatternTemplate("(defclass {name} :super {missing})"))
    assert generated == []
    assert [d.code for d in diagnostics] == ["E073"]


def test_duplicate_generated_name_is_e021_citing_rows():
    table, _ = parse_csv("name\nSame\nSame\n")
    generated, diagnostics = expand(table, PatternTemplate("(defclass {name})"))
    assert len(generated) == 1
    assert [d.code for d in diagnostics] == ["E021"]
    assert "rows 1 and 2" in diagnostics[0].message


def test_row_parse_errors_carry_row_number():
    table, _ = parse_csv("name\n\"bad name\"\n")
    generated, diagnostics = expand(table, PatternTemplate("(defclass {name})"))
    assert generated == []
    assert diagnostics and all("row 1" in d.message for d in diagnostics)


def test_empty_cell_substitutes_empty():
    table, _ = parse_csv("name,super\n,Pizza\n")
    generated, diagnostics = expand(table, TEMPLATE)
    assert generated == []
    assert diagnostics and "row 1" in diagnostics[0].message


def test_brace_escape():
    template = PatternTemplate('(defclass {name} :comment "{{literal")')
    table, _ = parse_csv("name\nA\n")
    generated, diagnostics = expand(table, template)
    assert not diagnostics
    assert generated[0].form.texts("comment") == ["{literal"]


def test_deterministic_expansion():
    table, _ = parse_csv("name,super\nA,B\nC,D\n")
    first, _ = expand(table, TEMPLATE)
    second, _ = expand(table, TEMPLATE)
    assert first == second


def test_render_expansion_has_provenance_lines():
    table, _ = parse_csv("name,super\nA,Base\nB,Base\n")
    generated, _ = expand(table, TEMPLATE)
    rendered = render_expansion(generated)
    assert ";; row 1\n\n(defclass A\n  :super Base)" in rendered
    assert ";; row 2" in rendered


def test_expanded_chunks_merge_into_document():
    source = "(defontology t)\n\n(defclass Base)\n"
    doc, _ = load_document(source)
    table, _ = parse_csv("name,super\n" + "\n".join(f"C{i},Base" for i in range(10)) + "\n")
    generated, diagnostics = expand(table, TEMPLATE)
    assert not diagnostics
    combined = canonical_print(doc) + "\n" + render_expansion(generated)
    merged, merge_diags = load_document(combined)
    assert merged is not None, [d.render() for d in merge_diags]
    assert len(merged.symbols.entries) == len(doc.symbols.entries) + 10
