"""Independent oracles for fixture-derived expectations.

Everything here works on raw fixture text with regular expressions and a
tiny paren scanner, deliberately avoiding the package's own parser so the
numbers it produces can double-check that parser.

Assumption about fixture style: at most one :label per definition form, and
definition forms start at the beginning of a line.
"""
from __future__ import annotations

import re

_STRING_RE = re.compile(r'"(?:\\.|[^"\\])*"')
_DEF_HEAD_RE = re.compile(
    r"\((defontology|defclass|defoproperty|defindividual)[ \t]+([^\s()]+)"
)


def strip_noise(text: str) -> str:
    """Remove narrative lines, string literals, and remarks."""
    lines = []
    for line in text.replace("\r\n", "\n").split("\n"):
        if line.lstrip().startswith(";;"):
            continue
        line = _STRING_RE.sub('""', line)
        if ";" in line:
            line = line[: line.index(";")]
        lines.append(line)
    return "\n".join(lines)


def scan_definitions(text: str) -> list[tuple[str, str]]:
    """All (head, name) definition pairs in the fixture, in order."""
    return _DEF_HEAD_RE.findall(strip_noise(text))


def count_entities(text: str) -> int:
    """Number of named entities (classes, properties, individuals)."""
    return sum(1 for head, _ in scan_definitions(text) if head != "defontology")


def _form_texts(text: str) -> list[str]:
    """Slice out each top-level definition form by balanced parens."""
    cleaned = strip_noise(text)
    forms = []
    for match in _DEF_HEAD_RE.finditer(cleaned):
        start = match.start()
        depth = 0
        for i in range(start, len(cleaned)):
            if cleaned[i] == "(":
                depth += 1
            elif cleaned[i] == ")":
                depth -= 1
                if depth == 0:
                    forms.append(cleaned[start : i + 1])
                    break
    return forms


def _option_value_counts(form_text: str) -> dict[str, int]:
    """Count values per option keyword at the form's top level."""
    counts: dict[str, int] = {}
    current: str | None = None
    depth = 0
    token_re = re.compile(r"\(|\)|:[^\s()]+|\"\"|[^\s()]+")
    for match in token_re.finditer(form_text):
        token = match.group(0)
        if token == "(":
            depth += 1
            if depth == 2 and current is not None:
                counts[current] = counts.get(current, 0) + 1
        elif token == ")":
            depth -= 1
        elif token.startswith(":") and depth == 1:
            current = token[1:]
            counts.setdefault(current, 0)
        elif depth == 1 and current is not None:
            counts[current] = counts.get(current, 0) + 1
    return counts


def expected_axiom_count(text: str) -> int:
    """Closed-form axiom count for the OWL emission of a fixture.

    Per definition: one declaration; defclass adds one SubClassOf per
    :super value, one axiom each for :equivalent/:disjoint when present,
    one label assertion when labelled, one comment assertion per comment;
    defoproperty adds super/domain/range/characteristic axioms per value;
    defindividual adds one axiom per :type and per :fact. The header
    contributes nothing.
    """
    total = 0
    for form_text in _form_texts(text):
        head = _DEF_HEAD_RE.match(form_text).group(1)
        counts = _option_value_counts(form_text)
        if head == "defontology":
            continue
        total += 1  # declaration
        annotations = min(1, counts.get("label", 0)) + counts.get("comment", 0)
        if head == "defclass":
            total += counts.get("super", 0)
            total += 1 if counts.get("equivalent", 0) else 0
            total += 1 if counts.get("disjoint", 0) else 0
        elif head == "defoproperty":
            total += counts.get("super", 0)
            total += counts.get("domain", 0)
            total += counts.get("range", 0)
            total += counts.get("characteristic", 0)
        elif head == "defindividual":
            total += counts.get("type", 0)
            total += counts.get("fact", 0)
        total += annotations
    return total


def count_code_chunks(text: str) -> int:
    """Blank-line-and-kind segmentation, recomputed with plain string ops."""
    chunks = 0
    previous = "blank"
    for line in text.replace("\r\n", "\n").split("\n"):
        if not line.strip():
            previous = "blank"
            continue
        kind = "narrative" if line.lstrip().startswith(";;") else "code"
        if kind == "code" and previous != "code":
            chunks += 1
        previous = kind
    return chunks


_HREF_RE = re.compile(r'href="#(def-[^"]+)"')
_ID_RE = re.compile(r'id="(def-[^"]+)"')


def unresolved_def_links(html_text: str) -> set[str]:
    """Entity links whose target id does not exist in the page."""
    return set(_HREF_RE.findall(html_text)) - set(_ID_RE.findall(html_text))


_EXTERNAL_RESOURCE_RE = re.compile(
    r"<(?:script|link|img|source|iframe)\b[^>]*\b(?:src|href)\s*=\s*\"(?:https?:)?//",
    re.IGNORECASE,
)


def external_resource_references(html_text: str) -> list[str]:
    return _EXTERNAL_RESOURCE_RE.findall(html_text)
