"""Access to the bundled vocabulary subset and specification set."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .domainspec import DomainSpecification, parse_domain_spec
from .vocabulary import VocabularyGraph, load_vocabulary

_VOCABULARY_NAME = "schemaorg-subset.jsonld"


def _data_root() -> Path:
    return Path(str(resources.files("dsforge") / "data"))


def bundled_vocabulary_path() -> Path:
    return _data_root() / "vocabulary" / _VOCABULARY_NAME


def bundled_spec_dir() -> Path:
    return _data_root() / "specs"


def bundled_spec_paths() -> list[Path]:
    return sorted(bundled_spec_dir().glob("*.json"))


def load_bundled_vocabulary() -> VocabularyGraph:
    with open(bundled_vocabulary_path(), encoding="utf-8") as handle:
        return load_vocabulary(json.load(handle))


def load_bundled_specs() -> list[DomainSpecification]:
    specs = []
    for path in bundled_spec_paths():
        with open(path, encoding="utf-8") as handle:
            specs.append(parse_domain_spec(json.load(handle)))
    return specs
