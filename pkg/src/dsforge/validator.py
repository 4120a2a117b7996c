"""Validate annotation nodes against domain specifications.

Also generates specification-conformant annotation templates and picks the
right specification for a node. All functions are pure over immutable
inputs; many nodes may be validated concurrently.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Collection, Iterable
from dataclasses import dataclass, field
from datetime import date, datetime, time
from fractions import Fraction
from typing import Any
from urllib.parse import urlsplit

from .annotation import AnnotationNode, AnnotationValue
from .domainspec import DomainSpecification, PropertyConstraint, RangeSpec
from .errors import UnknownTerm
from .vocabulary import TermId, VocabularyGraph

logger = logging.getLogger(__name__)

# Issue codes. E* default to error severity, W* to warning, I* to info.
E_UNKNOWN_TYPE = "E001"
E_MISSING_TYPE = "E002"
E_MISSING_REQUIRED = "E003"
E_RANGE_MISMATCH = "E004"
E_CARDINALITY = "E005"
W_UNKNOWN_PROPERTY = "W001"
W_EMPTY_VALUE = "W002"
W_DEPTH_EXCEEDED = "W003"
I_UNRESOLVED_REFERENCE = "I001"

SEV_ERROR = "error"
SEV_WARNING = "warning"
SEV_INFO = "info"

_NUMBER_TEXT = re.compile(r"^[+-]?(\d+(\.\d+)?|\.\d+)([eE][+-]?\d+)?$")
_INTEGER_TEXT = re.compile(r"^[+-]?\d+$")

# Names handled by a built-in datatype rule; vocabulary-declared subtypes of
# the core datatypes fall back to the rule of the root they descend from.
_DATATYPE_NAMES = {
    "Text", "URL", "Boolean", "Number", "Integer", "Float", "Date", "DateTime", "Time",
}
_DATATYPE_ROOTS = ("URL", "Boolean", "Number", "Date", "DateTime", "Time", "Text")


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    severity: str
    path: str
    message: str
    expected: str = ""
    actual: str = ""

    def to_dict(self) -> dict[str, str]:
        return {
            "code": self.code,
            "severity": self.severity,
            "path": self.path,
            "message": self.message,
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass(frozen=True)
class ValidationOptions:
    unknown_property_severity: str = SEV_WARNING
    max_depth: int = 8


@dataclass(frozen=True)
class ValidationReport:
    source: str
    spec_name: str
    issues: tuple[ValidationIssue, ...]
    completeness: Fraction
    matched_type: TermId | None = None  # set by corpus scans; not serialized

    @property
    def valid(self) -> bool:
        return all(issue.severity != SEV_ERROR for issue in self.issues)

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "spec": self.spec_name,
            "valid": self.valid,
            "completeness": float(self.completeness),
            "issues": [issue.to_dict() for issue in self.issues],
        }


def _is_datatype_term(term: TermId, graph: VocabularyGraph) -> bool:
    cls = graph.classes.get(term)
    if cls is not None:
        return cls.is_datatype
    return term in _DATATYPE_NAMES


def _datatype_rule(term: TermId, graph: VocabularyGraph) -> str:
    if term in _DATATYPE_NAMES:
        return term
    for root in _DATATYPE_ROOTS:
        if graph.is_subclass_of(term, root):
            return root
    return "Text"


def _is_absolute_http_url(text: str) -> bool:
    try:
        parts = urlsplit(text)
    except ValueError:
        return False
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def _parse_iso(text: str, kind: str) -> bool:
    candidate = text.strip()
    if kind == "DateTime" and candidate.endswith(("Z", "z")):
        candidate = candidate[:-1] + "+00:00"
    try:
        if kind == "Date":
            date.fromisoformat(candidate)
        elif kind == "DateTime":
            parsed = datetime.fromisoformat(candidate)
            del parsed
        else:
            time.fromisoformat(candidate)
    except ValueError:
        return False
    return kind != "DateTime" or "T" in candidate or " " in candidate


def _matches_datatype(value: AnnotationValue, rule: str) -> bool:
    if rule == "Text":
        return value.text is not None
    if rule == "URL":
        return value.text is not None and _is_absolute_http_url(value.text)
    if rule == "Boolean":
        return value.boolean is not None or value.text in ("True", "False")
    if rule in ("Number", "Float"):
        if value.number is not None:
            return True
        return value.text is not None and bool(_NUMBER_TEXT.match(value.text))
    if rule == "Integer":
        if value.number is not None:
            try:
                return value.number == int(value.number)
            except (ValueError, OverflowError):  # non-finite decimals
                return False
        return value.text is not None and bool(_INTEGER_TEXT.match(value.text))
    if rule in ("Date", "DateTime", "Time"):
        return value.text is not None and _parse_iso(value.text, rule)
    return False


def _range_description(ranges: Iterable[RangeSpec]) -> str:
    parts = []
    for spec in ranges:
        if spec.term is not None:
            parts.append(spec.term)
        else:
            parts.append(spec.nested.domain_types[0])
    return " or ".join(parts)


def _ordered_for_testing(ranges: tuple[RangeSpec, ...]) -> list[RangeSpec]:
    # Specificity refinement: Text accepts every string, so it is tested
    # after the more specific ranges; otherwise listed order is kept.
    return sorted(ranges, key=lambda r: r.term == "Text")


def check_value_against_range(
    value: AnnotationValue,
    ranges: tuple[RangeSpec, ...] | list[RangeSpec],
    graph: VocabularyGraph,
    *,
    path: str = "/",
    depth: int = 0,
    options: ValidationOptions | None = None,
) -> list[ValidationIssue]:
    """Check one value against the allowed ranges of a constraint.

    Returns an empty list when the value conforms to any range. A node
    failing a nested range's own constraints yields those issues,
    path-prefixed; anything else that conforms nowhere yields one E004.
    Unresolved references are accepted for class ranges with an info note.
    """
    options = options or ValidationOptions()
    ranges = tuple(ranges)
    nested_failures: list[ValidationIssue] = []
    reference_note: ValidationIssue | None = None
    for spec in _ordered_for_testing(ranges):
        if spec.term is not None:
            term = spec.term
            if _is_datatype_term(term, graph):
                if _matches_datatype(value, _datatype_rule(term, graph)):
                    return []
                continue
            if value.reference is not None:
                if reference_note is None:
                    reference_note = ValidationIssue(
                        I_UNRESOLVED_REFERENCE,
                        SEV_INFO,
                        path,
                        f"reference {value.reference!r} not resolvable; "
                        f"accepted for range {term}",
                        expected=term,
                        actual=value.describe(),
                    )
                continue
            if value.node is not None and any(
                graph.is_subclass_of(t, term) for t in value.node.types
            ):
                return []
            continue
        nested = spec.nested
        nested_type = nested.domain_types[0]
        if value.node is None or not any(
            graph.is_subclass_of(t, nested_type) for t in value.node.types
        ):
            continue
        if depth + 1 > options.max_depth:
            return [
                ValidationIssue(
                    W_DEPTH_EXCEEDED,
                    SEV_WARNING,
                    path,
                    f"nesting deeper than {options.max_depth}; not validated further",
                )
            ]
        child_issues = _check_constraints(
            value.node, nested, graph, options, prefix=path, depth=depth + 1
        )
        if all(issue.severity != SEV_ERROR for issue in child_issues):
            return []
        if not nested_failures:
            nested_failures = child_issues
    if reference_note is not None:
        return [reference_note]
    if nested_failures:
        return nested_failures
    return [
        ValidationIssue(
            E_RANGE_MISMATCH,
            SEV_ERROR,
            path,
            "value conforms to no allowed range",
            expected=_range_description(ranges),
            actual=value.describe(),
        )
    ]


def _check_constraints(
    node: AnnotationNode,
    ds: DomainSpecification,
    graph: VocabularyGraph,
    options: ValidationOptions,
    prefix: str,
    depth: int,
) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []
    for constraint in ds.constraints:
        values = node.properties.get(constraint.property)
        count = 0 if values is None else len(values)
        base_path = f"{prefix}/{constraint.property}"
        if constraint.required and count == 0:
            issues.append(
                ValidationIssue(
                    E_MISSING_REQUIRED,
                    SEV_ERROR,
                    base_path,
                    f"required property {constraint.property!r} is missing",
                    expected=_range_description(constraint.ranges),
                    actual="absent" if values is None else "no values",
                )
            )
        if not constraint.multitype and count > 1:
            issues.append(
                ValidationIssue(
                    E_CARDINALITY,
                    SEV_ERROR,
                    base_path,
                    f"property {constraint.property!r} permits a single value",
                    expected="1 value",
                    actual=f"{count} values",
                )
            )
        for i, value in enumerate(values or ()):
            value_path = f"{base_path}[{i}]" if count > 1 else base_path
            issues.extend(
                check_value_against_range(
                    value, constraint.ranges, graph,
                    path=value_path, depth=depth, options=options,
                )
            )
    known = {constraint.property for constraint in ds.constraints}
    for prop, values in node.properties.items():
        prop_path = f"{prefix}/{prop}"
        if prop not in known:
            issues.append(
                ValidationIssue(
                    W_UNKNOWN_PROPERTY,
                    options.unknown_property_severity,
                    prop_path,
                    f"property {prop!r} is not part of specification {ds.name!r}",
                )
            )
        if not values or any(v.text == "" for v in values):
            issues.append(
                ValidationIssue(
                    W_EMPTY_VALUE,
                    SEV_WARNING,
                    prop_path,
                    f"property {prop!r} has an empty value",
                )
            )
    return issues


def validate_node(
    node: AnnotationNode,
    ds: DomainSpecification,
    graph: VocabularyGraph,
    options: ValidationOptions | None = None,
    *,
    source: str = "",
    matched_type: TermId | None = None,
) -> ValidationReport:
    """Produce a full validation report for one annotation node.

    Completeness is the fraction of the specification's required
    constraints that carry at least one value at the root level (1 when
    the specification requires nothing).
    """
    options = options or ValidationOptions()
    issues: list[ValidationIssue] = []
    if not node.types:
        issues.append(
            ValidationIssue(
                E_MISSING_TYPE, SEV_ERROR, "/", "annotation declares no @type",
                expected=" or ".join(ds.domain_types),
            )
        )
    elif not any(graph.has_class(t) for t in node.types):
        issues.append(
            ValidationIssue(
                E_UNKNOWN_TYPE, SEV_ERROR, "/",
                "no declared type is present in the vocabulary",
                actual=", ".join(node.types),
            )
        )
    issues.extend(_check_constraints(node, ds, graph, options, prefix="", depth=0))

    required = [c for c in ds.constraints if c.required]
    if required:
        satisfied = sum(1 for c in required if node.properties.get(c.property))
        completeness = Fraction(satisfied, len(required))
    else:
        completeness = Fraction(1)
    issues.sort(key=lambda issue: (issue.path, issue.code, issue.message))
    return ValidationReport(
        source=source,
        spec_name=ds.name,
        issues=tuple(issues),
        completeness=completeness,
        matched_type=matched_type,
    )


def select_spec(
    node: AnnotationNode,
    specs: Collection[DomainSpecification],
    graph: VocabularyGraph,
    allow_subclass_match: bool = False,
) -> DomainSpecification | None:
    """Pick the specification whose domain types cover the node's types.

    Exact type matches win over subclass matches. Among equally good
    candidates the lexicographically smallest name is chosen and an
    ambiguity warning is logged.
    """
    exact = [ds for ds in specs if any(t in ds.domain_types for t in node.types)]
    candidates = exact
    if not candidates and allow_subclass_match:
        candidates = [
            ds
            for ds in specs
            if any(
                graph.is_subclass_of(t, d)
                for t in node.types
                for d in ds.domain_types
            )
        ]
    if not candidates:
        return None
    winner = min(candidates, key=lambda ds: ds.name)
    if len(candidates) > 1:
        names = ", ".join(sorted(ds.name for ds in candidates))
        logger.warning(
            "ambiguous specification match for types %s (candidates: %s); using %r",
            node.types, names, winner.name,
        )
    return winner


def matching_type(
    node: AnnotationNode, ds: DomainSpecification, graph: VocabularyGraph
) -> TermId | None:
    """The node type that makes the specification applicable, if any."""
    for t in node.types:
        if t in ds.domain_types:
            return t
    for t in node.types:
        if any(graph.is_subclass_of(t, d) for d in ds.domain_types):
            return t
    return None


_PLACEHOLDERS: dict[str, Any] = {
    "Text": "",
    "URL": "https://example.invalid/",
    "Boolean": True,
    "Number": 0,
    "Integer": 0,
    "Float": 0.0,
    "Date": "1970-01-01",
    "DateTime": "1970-01-01T00:00:00",
    "Time": "00:00:00",
}


def _placeholder(spec: RangeSpec) -> Any:
    if spec.term is not None:
        if spec.term in _PLACEHOLDERS:
            return _PLACEHOLDERS[spec.term]
        return {"@type": spec.term}
    return _template_node(spec.nested, spec.nested.domain_types[0])


def _template_node(ds: DomainSpecification, target_type: TermId) -> dict[str, Any]:
    node: dict[str, Any] = {"@type": target_type}
    for constraint in ds.constraints:
        if not constraint.required:
            continue
        value = _placeholder(constraint.ranges[0])
        node[constraint.property] = [value] if constraint.multitype else value
    return node


def generate_template(ds: DomainSpecification, target_type: TermId) -> dict[str, Any]:
    """JSON-LD skeleton carrying every required property of the spec.

    The first listed range of each constraint picks the placeholder shape;
    multitype constraints emit a one-element array; optional constraints
    are omitted.
    """
    if target_type not in ds.domain_types:
        raise UnknownTerm(
            f"{target_type!r} is not a domain type of specification {ds.name!r}"
        )
    document: dict[str, Any] = {"@context": "https://schema.org"}
    document.update(_template_node(ds, target_type))
    return document
