import pathlib

import pytest

from ontoweave import load_document
from ontoweave.locales import parse_bundle

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_fixture(name: str):
    doc, diagnostics = load_document(fixture_text(name))
    assert doc is not None, [d.render() for d in diagnostics]
    return doc


@pytest.fixture(scope="session")
def pizza_doc():
    return load_fixture("pizza.lont")


@pytest.fixture(scope="session")
def aminoacid_doc():
    return load_fixture("aminoacid.lont")


@pytest.fixture(scope="session")
def it_bundle():
    bundle, diagnostics = parse_bundle(fixture_text("it.lb"))
    assert bundle is not None, [d.render() for d in diagnostics]
    return bundle


@pytest.fixture(scope="session")
def ar_bundle():
    bundle, diagnostics = parse_bundle(fixture_text("ar.lb"))
    assert bundle is not None, [d.render() for d in diagnostics]
    return bundle
