"""OWL 2 functional-style syntax emitter.

Line-oriented and deterministic: one declaration or axiom per line, in
definition order, so emitted files diff cleanly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import (
    And,
    ClassExpression,
    Diagnostic,
    Fact,
    Form,
    FormKind,
    Named,
    Not,
    Only,
    OntologyDoc,
    Or,
    Some,
    error,
)
from .reader import undefined_reference_warnings

RDFS_PREFIX = "http://www.w3.org/2000/01/rdf-schema#"


@dataclass(frozen=True)
class EmitOptions:
    """Namespace settings; the default prefix applies when the ontology
    header carries no :iri."""

    default_prefix_iri: str = "https://example.org/onto#"

    def __post_init__(self) -> None:
        if not self.default_prefix_iri.endswith(("#", "/")):
            raise ValueError("prefix IRI must end with '#' or '/'")


def escape_literal(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def unescape_literal(text: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(text):
        if text[i] == "\\" and i + 1 < len(text):
            out.append(text[i + 1])
            i += 2
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def map_class_expression(expr: ClassExpression) -> str:
    """Render a class expression as functional syntax, operands in source order."""
    if isinstance(expr, Named):
        return f":{expr.name}"
    if isinstance(expr, Some):
        return f"ObjectSomeValuesFrom(:{expr.prop} {map_class_expression(expr.expr)})"
    if isinstance(expr, Only):
        return f"ObjectAllValuesFrom(:{expr.prop} {map_class_expression(expr.expr)})"
    if isinstance(expr, And):
        inner = " ".join(map_class_expression(e) for e in expr.exprs)
        return f"ObjectIntersectionOf({inner})"
    if isinstance(expr, Or):
        inner = " ".join(map_class_expression(e) for e in expr.exprs)
        return f"ObjectUnionOf({inner})"
    if isinstance(expr, Not):
        return f"ObjectComplementOf({map_class_expression(expr.expr)})"
    raise TypeError(f"not a class expression: {expr!r}")  # pragma: no cover


def _annotation_lines(doc: OntologyDoc, form: Form) -> list[str]:
    lines = []
    labels = doc.symbols.labels_for(form.name)
    for locale in sorted(labels):
        literal = f'"{escape_literal(labels[locale])}"'
        if locale:
            literal += f"@{locale}"
        lines.append(f"AnnotationAssertion(rdfs:label :{form.name} {literal})")
    for comment in form.texts("comment"):
        lines.append(
            f'AnnotationAssertion(rdfs:comment :{form.name} "{escape_literal(comment)}")'
        )
    return lines


_CHARACTERISTIC_AXIOMS = {
    "transitive": "TransitiveObjectProperty",
    "functional": "FunctionalObjectProperty",
    "symmetric": "SymmetricObjectProperty",
}


def _form_lines(doc: OntologyDoc, form: Form) -> list[str]:
    name = form.name
    lines: list[str] = []
    if form.head is FormKind.DEFCLASS:
        lines.append(f"Declaration(Class(:{name}))")
        for value in form.option("super"):
            lines.append(f"SubClassOf(:{name} {map_class_expression(value)})")
        for keyword, axiom in (("equivalent", "EquivalentClasses"), ("disjoint", "DisjointClasses")):
            values = form.option(keyword)
            if values:
                rendered = " ".join(map_class_expression(v) for v in values)
                lines.append(f"{axiom}(:{name} {rendered})")
        lines.extend(_annotation_lines(doc, form))
    elif form.head is FormKind.DEFOPROPERTY:
        lines.append(f"Declaration(ObjectProperty(:{name}))")
        for value in form.option("super"):
            lines.append(f"SubObjectPropertyOf(:{name} :{value.name})")
        for value in form.option("domain"):
            lines.append(f"ObjectPropertyDomain(:{name} {map_class_expression(value)})")
        for value in form.option("range"):
            lines.append(f"ObjectPropertyRange(:{name} {map_class_expression(value)})")
        for value in form.option("characteristic"):
            lines.append(f"{_CHARACTERISTIC_AXIOMS[value.name]}(:{name})")
        lines.extend(_annotation_lines(doc, form))
    elif form.head is FormKind.DEFINDIVIDUAL:
        lines.append(f"Declaration(NamedIndividual(:{name}))")
        for value in form.option("type"):
            lines.append(f"ClassAssertion({map_class_expression(value)} :{name})")
        for value in form.option("fact"):
            assert isinstance(value, Fact)
            lines.append(f"ObjectPropertyAssertion(:{value.prop} :{name} :{value.individual})")
        lines.extend(_annotation_lines(doc, form))
    return lines


def emit_functional(
    doc: OntologyDoc, options: EmitOptions | None = None
) -> tuple[str | None, list[Diagnostic]]:
    """Serialize the document as OWL functional syntax.

    Unlike the HTML weaver, references to undefined names are fatal here
    (E050): OWL consumers need a closed document.
    """
    options = options or EmitOptions()
    undefined = undefined_reference_warnings(doc)
    if undefined:
        return None, [error("E050", w.message, w.span) for w in undefined]

    iri = doc.header.iri or options.default_prefix_iri
    lines = [
        f"Prefix(:=<{iri}>)",
        f"Prefix(rdfs:=<{RDFS_PREFIX}>)",
        f"Ontology(<{iri}>",
    ]
    declarations: list[str] = []
    axioms: list[str] = []
    for form in doc.forms():
        form_lines = _form_lines(doc, form)
        if form_lines:
            declarations.append(form_lines[0])
            axioms.extend(form_lines[1:])
    lines.extend(declarations)
    lines.extend(axioms)
    lines.append(")")
    return "\n".join(lines) + "\n", []
