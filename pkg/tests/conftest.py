from __future__ import annotations

import json
from pathlib import Path

import pytest

from dsforge import load_vocabulary, parse_annotation
from dsforge.data import (
    bundled_spec_paths,
    bundled_vocabulary_path,
    load_bundled_specs,
    load_bundled_vocabulary,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def vocab_path() -> Path:
    return bundled_vocabulary_path()

@pytest.fixture(scope="session")
def vocab_doc(vocab_path) -> dict:
    return json.loads(vocab_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def graph(vocab_doc):
    return load_vocabulary(vocab_doc)


@pytest.fixture(scope="session")
def bundled_specs():
    return load_bundled_specs()


@pytest.fixture(scope="session")
def spec_docs() -> dict[str, dict]:
    return {
        path.name: json.loads(path.read_text(encoding="utf-8"))
        for path in bundled_spec_paths()
    }


@pytest.fixture(scope="session")
def fe_spec(bundled_specs):
    return next(ds for ds in bundled_specs if ds.name == "FoodEstablishment")


@pytest.fixture(scope="session")
def restaurant_doc() -> dict:
    text = (FIXTURES / "annotations" / "restaurant_full.jsonld").read_text(encoding="utf-8")
    return json.loads(text)


@pytest.fixture()
def restaurant_node(restaurant_doc):
    return parse_annotation(json.dumps(restaurant_doc)).roots[0]


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def _bundled_graph_for_session():
    return load_bundled_vocabulary()
