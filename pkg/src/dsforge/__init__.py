"""dsforge: schema.org domain specifications and annotation validation."""

from .annotation import (
    AnnotationDocument,
    AnnotationNode,
    AnnotationValue,
    JsonLdBlock,
    extract_jsonld_blocks,
    parse_annotation,
    resolve_references,
)
from .corpus import (
    CorpusReport,
    CorpusStats,
    ScanOptions,
    aggregate,
    scan_corpus,
)
from .domainspec import (
    DomainSpecification,
    DsCheckReport,
    DsDiff,
    PropertyConstraint,
    RangeSpec,
    check_domain_spec,
    diff_domain_specs,
    dumps_domain_spec,
    load_domain_spec,
    parse_domain_spec,
    scaffold_domain_spec,
    serialize_domain_spec,
)
from .errors import (
    AnnotationParseError,
    DsforgeError,
    DuplicateTerm,
    EmptyCorpus,
    EmptyDocument,
    MalformedSpec,
    MalformedVocabulary,
    UnknownTerm,
    UnsupportedContext,
)
from .validator import (
    ValidationIssue,
    ValidationOptions,
    ValidationReport,
    check_value_against_range,
    generate_template,
    select_spec,
    validate_node,
)
from .vocabulary import (
    ClassDef,
    PropertyDef,
    VocabularyGraph,
    load_vocabulary,
    normalize_term,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationDocument",
    "AnnotationNode",
    "AnnotationParseError",
    "AnnotationValue",
    "ClassDef",
    "CorpusReport",
    "CorpusStats",
    "DomainSpecification",
    "DsCheckReport",
    "DsDiff",
    "DsforgeError",
    "DuplicateTerm",
    "EmptyCorpus",
    "EmptyDocument",
    "JsonLdBlock",
    "MalformedSpec",
    "MalformedVocabulary",
    "PropertyConstraint",
    "PropertyDef",
    "RangeSpec",
    "ScanOptions",
    "UnknownTerm",
    "UnsupportedContext",
    "ValidationIssue",
    "ValidationOptions",
    "ValidationReport",
    "VocabularyGraph",
    "aggregate",
    "check_domain_spec",
    "check_value_against_range",
    "diff_domain_specs",
    "dumps_domain_spec",
    "extract_jsonld_blocks",
    "generate_template",
    "load_domain_spec",
    "load_vocabulary",
    "normalize_term",
    "parse_annotation",
    "parse_domain_spec",
    "resolve_references",
    "scaffold_domain_spec",
    "scan_corpus",
    "select_spec",
    "serialize_domain_spec",
    "validate_node",
]
