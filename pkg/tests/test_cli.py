"""Command-line contract: exit codes, diagnostics format, atomic outputs."""

import json
import os
import re
import zipfile

import pytest

from ontoweave.cli import run

from conftest import FIXTURES

PIZZA = str(FIXTURES / "pizza.lont")
AMINO = str(FIXTURES / "aminoacid.lont")
IT = str(FIXTURES / "it.lb")
AR = str(FIXTURES / "ar.lb")


@pytest.fixture(autouse=True)
def _no_color(monkeypatch):
    monkeypatch.setenv("ONTOWEAVE_NO_COLOR", "1")


def test_check_clean_fixture_exits_zero_silently(capsys):
    assert run(["check", PIZZA]) == 0
    captured = capsys.readouterr()
    assert captured.out == "" and captured.err == ""


def test_check_reports_warnings_but_exits_zero(tmp_path, capsys):
    source = tmp_path / "warn.lont"
    source.write_text('(defontology t :comment "c")\n\n(defclass A :super Ghost)\n')
    assert run(["check", str(source)]) == 0
    err = capsys.readouterr().err
    assert "warning W001" in err
    assert "warning W002" in err


def test_check_error_exits_one(tmp_path, capsys):
    source = tmp_path / "bad.lont"
    source.write_text("(defclass A\n")
    assert run(["check", str(source)]) == 1
    assert "error E010" in capsys.readouterr().err


def test_diagnostic_line_format(tmp_path, capsys):
    source = tmp_path / "bad.lont"
    source.write_text("(defontology t)\n\n(defclass A :wrong B)\n")
    run(["check", str(source)])
    err = capsys.readouterr().err.strip().splitlines()
    assert re.fullmatch(r"error E012 3:13 .+", err[0])


def test_missing_file_names_it(capsys, tmp_path):
    out = tmp_path / "x.html"
    assert run(["weave-html", "missing.lont", "-o", str(out)]) == 1
    assert "missing.lont" in capsys.readouterr().err
    assert not out.exists()


def test_unknown_subcommand_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_flag_usage_error(capsys):
    assert run(["check", PIZZA, "--nope"]) == 2


def test_weave_html_output(tmp_path, capsys):
    out = tmp_path / "pizza.html"
    assert run(["weave-html", PIZZA, "--bundle", IT, "--bundle", AR, "-o", str(out)]) == 0
    html = out.read_text(encoding="utf-8")
    assert html.startswith("<!DOCTYPE html>")
    assert '"it"' not in capsys.readouterr().err  # warnings only, no errors


def test_weave_html_hide_source_flag(tmp_path):
    out = tmp_path / "pizza.html"
    assert run(["weave-html", PIZZA, "--hide-source", "-o", str(out)]) == 0
    assert "<pre hidden>" in out.read_text(encoding="utf-8")


def test_weave_html_rtl_when_all_bundles_rtl(tmp_path):
    out = tmp_path / "ar.html"
    assert run(["weave-html", PIZZA, "--bundle", AR, "-o", str(out)]) == 0
    assert 'dir="rtl"' in out.read_text(encoding="utf-8")
    out2 = tmp_path / "mixed.html"
    assert run(["weave-html", PIZZA, "--bundle", AR, "--bundle", IT, "-o", str(out2)]) == 0
    assert 'dir="rtl"' not in out2.read_text(encoding="utf-8")


def test_emit_owl_and_iri_flag(tmp_path):
    out = tmp_path / "o.ofn"
    assert run(["emit-owl", PIZZA, "-o", str(out)]) == 0
    assert out.read_text(encoding="utf-8").startswith("Prefix(:=<https://example.org/pizza#>)")
    # --iri is the fallback; the pizza header sets its own
    bare = tmp_path / "bare.lont"
    bare.write_text("(defontology t)\n\n(defclass A)\n")
    out2 = tmp_path / "o2.ofn"
    assert run(["emit-owl", str(bare), "--iri", "https://x.example/ns#", "-o", str(out2)]) == 0
    assert out2.read_text(encoding="utf-8").startswith("Prefix(:=<https://x.example/ns#>)")


def test_emit_owl_invalid_iri_is_domain_error(tmp_path, capsys):
    out = tmp_path / "o.ofn"
    assert run(["emit-owl", PIZZA, "--iri", "https://x.example/ns", "-o", str(out)]) == 1
    assert "E081" in capsys.readouterr().err
    assert not out.exists()


def test_translate_and_invert_round_trip(tmp_path):
    translated = tmp_path / "pizza-ar.lont"
    back = tmp_path / "pizza-back.lont"
    assert run(["translate", PIZZA, "--bundle", AR, "-o", str(translated)]) == 0
    assert run(["translate", str(translated), "--bundle", AR, "--invert", "-o", str(back)]) == 0
    canonical = tmp_path / "canon.lont"
    assert run(["translate", PIZZA, "--bundle", str(FIXTURES / "it.lb"), "-o", str(tmp_path / "it.lont")]) == 0
    # canonical text = identity translation through complete inverted trip
    from ontoweave import load_document, canonical_print

    doc, _ = load_document(open(PIZZA, encoding="utf-8").read())
    assert back.read_text(encoding="utf-8") == canonical_print(doc)


def test_label_emits_tagged_annotations(tmp_path):
    out = tmp_path / "labeled.ofn"
    assert run(["label", PIZZA, "--bundle", IT, "--bundle", AR, "-o", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert '"@it)' in text and '"@ar)' in text


def test_weave_docx_writes_package(tmp_path):
    out = tmp_path / "pizza.docx"
    assert run(["weave-docx", PIZZA, "-o", str(out)]) == 0
    assert zipfile.ZipFile(out).namelist()[0] == "[Content_Types].xml"


def test_extract_feedback_round_trip_is_empty(tmp_path):
    docx_path = tmp_path / "pizza.docx"
    report_path = tmp_path / "report.json"
    assert run(["weave-docx", PIZZA, "-o", str(docx_path)]) == 0
    assert run(["extract-feedback", PIZZA, "--edited", str(docx_path), "-o", str(report_path)]) == 0
    payload = json.loads(report_path.read_text(encoding="utf-8"))
    assert payload["items"] == []
    assert payload["source"] == PIZZA


def test_expand_appends_generated_chunks(tmp_path):
    table = tmp_path / "rows.csv"
    table.write_text("name,super\n" + "\n".join(f"C{i},Topping" for i in range(10)) + "\n")
    template = tmp_path / "tpl.lont"
    template.write_text("(defclass {name} :super {super})")
    out = tmp_path / "expanded.lont"
    assert run(["expand", PIZZA, "--table", str(table), "--template", str(template), "-o", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert ";; row 10" in text
    from ontoweave import load_document

    doc, diagnostics = load_document(text)
    assert doc is not None
    assert len(doc.symbols.entries) == 27  # 17 + 10


def test_expand_duplicate_name_fails_citing_row(tmp_path, capsys):
    table = tmp_path / "rows.csv"
    table.write_text("name\nTwin\nTwin\n")
    template = tmp_path / "tpl.lont"
    template.write_text("(defclass {name})")
    out = tmp_path / "expanded.lont"
    assert run(["expand", PIZZA, "--table", str(table), "--template", str(template), "-o", str(out)]) == 1
    err = capsys.readouterr().err
    assert "E021" in err and "rows 1 and 2" in err
    assert not out.exists()


def test_failed_run_leaves_existing_file_untouched(tmp_path):
    out = tmp_path / "out.ofn"
    out.write_text("sentinel")
    bad = tmp_path / "bad.lont"
    bad.write_text("(defclass A :super Ghost)\n")  # no header -> E020
    assert run(["emit-owl", str(bad), "-o", str(out)]) == 1
    assert out.read_text() == "sentinel"


def test_identical_runs_produce_identical_bytes(tmp_path):
    first = tmp_path / "a.html"
    second = tmp_path / "b.html"
    for path in (first, second):
        assert run(["weave-html", PIZZA, "--bundle", IT, "-o", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_no_color_env_strips_escapes(tmp_path, capsys, monkeypatch):
    source = tmp_path / "bad.lont"
    source.write_text("(defclass A\n")
    monkeypatch.setenv("ONTOWEAVE_NO_COLOR", "1")
    run(["check", str(source)])
    assert "\x1b[" not in capsys.readouterr().err
