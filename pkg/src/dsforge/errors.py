"""Exception types shared across the package."""

from __future__ import annotations


class DsforgeError(Exception):
    """Base class for all dsforge errors."""


class MalformedVocabulary(DsforgeError):
    """Vocabulary document is structurally unusable."""


class DuplicateTerm(MalformedVocabulary):
    """Two vocabulary entries share the same term id."""


class UnknownTerm(DsforgeError):
    """A term id was required to exist in the vocabulary but does not."""


class MalformedSpec(DsforgeError):
    """Domain-specification document violates the file contract."""


class AnnotationParseError(DsforgeError):
    """Annotation text is not well-formed JSON."""


class UnsupportedContext(DsforgeError):
    """Annotation declares a @context other than schema.org."""


class EmptyDocument(DsforgeError):
    """Annotation parsed but contains no root node objects."""


class EmptyCorpus(DsforgeError):
    """Corpus scan found no files with a supported extension."""
