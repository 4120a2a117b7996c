"""Domain specifications: typed subsets of the vocabulary.

A domain specification names a set of target types and constrains the
properties an annotation of those types should carry (required/optional,
allowed ranges, whether multiple values are permitted). This module owns
the JSON file format, vocabulary-consistency checking, scaffolding from a
loaded vocabulary, diffing, and canonical serialization.
"""

from __future__ import annotations

import json
import warnings as _warnings
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from .errors import MalformedSpec, UnknownTerm
from .vocabulary import TermId, VocabularyGraph, normalize_term

# Check-report codes.
D_UNKNOWN_TERM = "D001"
D_PROPERTY_NOT_APPLICABLE = "D002"
D_RANGE_NOT_IN_VOCABULARY_RANGE = "D003"
D_DUPLICATE_CONSTRAINT = "D004"

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class RangeSpec:
    """One allowed range: either a shallow term or an inline nested spec."""

    term: TermId | None = None
    nested: "DomainSpecification | None" = None

    def __post_init__(self) -> None:
        if (self.term is None) == (self.nested is None):
            raise ValueError("RangeSpec needs exactly one of term or nested")
        if self.nested is not None and len(self.nested.domain_types) != 1:
            raise ValueError("nested RangeSpec must target exactly one domain type")

    @property
    def is_nested(self) -> bool:
        return self.nested is not None


@dataclass(frozen=True)
class PropertyConstraint:
    """Constraint on one property of the specified domain types."""

    property: TermId
    ranges: tuple[RangeSpec, ...]
    required: bool = False
    multitype: bool = False

    def __post_init__(self) -> None:
        if not self.ranges:
            raise ValueError(f"constraint {self.property!r} has an empty ranges list")
        shallow = [r.term for r in self.ranges if r.term is not None]
        if len(shallow) != len(set(shallow)):
            raise ValueError(f"constraint {self.property!r} repeats a shallow range term")


@dataclass(frozen=True)
class DomainSpecification:
    """A named vocabulary subset: domain types plus property constraints.

    Constraints are kept sorted by property id; this makes serialization
    canonical and parse/serialize round-trips exact.
    """

    name: str
    domain_types: tuple[TermId, ...]
    constraints: tuple[PropertyConstraint, ...] = ()
    version: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("specification name must be non-empty")
        if not self.domain_types:
            raise ValueError("specification must list at least one domain type")
        ordered = tuple(sorted(self.constraints, key=lambda c: c.property))
        object.__setattr__(self, "constraints", ordered)

    def constraint_for(self, property_id: TermId) -> PropertyConstraint | None:
        for constraint in self.constraints:
            if constraint.property == property_id:
                return constraint
        return None


@dataclass(frozen=True)
class DsIssue:
    """One finding from a vocabulary-consistency check."""

    code: str
    term: TermId
    detail: str
    severity: str


@dataclass(frozen=True)
class DsCheckReport:
    issues: tuple[DsIssue, ...] = ()

    @property
    def passed(self) -> bool:
        return all(issue.severity != SEVERITY_ERROR for issue in self.issues)


@dataclass(frozen=True)
class DsChange:
    property: TermId
    what: str


@dataclass(frozen=True)
class DsDiff:
    added: tuple[TermId, ...] = ()
    removed: tuple[TermId, ...] = ()
    changed: tuple[DsChange, ...] = ()

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.changed)


_TOP_LEVEL_KEYS = {"name", "version", "domainTypes", "properties"}
_CONSTRAINT_KEYS = {"property", "ranges", "required", "multitype"}
_NESTED_KEYS = {"type", "properties"}


def _ignore_unknown_keys(
    doc: Mapping[str, Any], allowed: set[str], where: str, lenient: bool
) -> None:
    unknown = sorted(set(doc) - allowed)
    if not unknown:
        return
    if not lenient:
        raise MalformedSpec(f"unknown keys in {where}: {', '.join(unknown)}")
    _warnings.warn(f"ignoring unknown keys in {where}: {', '.join(unknown)}", stacklevel=3)


def _parse_term(raw: Any, where: str) -> TermId:
    if not isinstance(raw, str) or not raw.strip():
        raise MalformedSpec(f"{where} must be a non-empty string")
    return normalize_term(raw) or raw.strip()


def _parse_ranges(raw: Any, where: str, lenient: bool) -> tuple[RangeSpec, ...]:
    if not isinstance(raw, list) or not raw:
        raise MalformedSpec(f"{where} must be a non-empty list of ranges")
    ranges: list[RangeSpec] = []
    seen_terms: set[TermId] = set()
    for i, item in enumerate(raw):
        if isinstance(item, str):
            term = _parse_term(item, f"{where}[{i}]")
            if term in seen_terms:
                _warnings.warn(f"dropping duplicate range term {term!r} in {where}", stacklevel=4)
                continue
            seen_terms.add(term)
            ranges.append(RangeSpec(term=term))
        elif isinstance(item, Mapping):
            _ignore_unknown_keys(item, _NESTED_KEYS, f"{where}[{i}]", lenient)
            if "type" not in item:
                raise MalformedSpec(f"nested range {where}[{i}] lacks a 'type'")
            nested_type = _parse_term(item["type"], f"{where}[{i}].type")
            nested = DomainSpecification(
                name=nested_type,
                domain_types=(nested_type,),
                constraints=_parse_constraints(item.get("properties", []), f"{where}[{i}]", lenient),
            )
            ranges.append(RangeSpec(nested=nested))
        else:
            raise MalformedSpec(f"{where}[{i}] must be a term name or a nested range object")
    if not ranges:
        raise MalformedSpec(f"{where} contains no usable ranges")
    return tuple(ranges)


def _parse_constraints(raw: Any, where: str, lenient: bool) -> tuple[PropertyConstraint, ...]:
    if not isinstance(raw, list):
        raise MalformedSpec(f"{where} 'properties' must be a list")
    constraints: list[PropertyConstraint] = []
    seen: set[TermId] = set()
    for i, item in enumerate(raw):
        if not isinstance(item, Mapping):
            raise MalformedSpec(f"{where}.properties[{i}] must be an object")
        _ignore_unknown_keys(item, _CONSTRAINT_KEYS, f"{where}.properties[{i}]", lenient)
        if "property" not in item:
            raise MalformedSpec(f"{where}.properties[{i}] lacks 'property'")
        prop = _parse_term(item["property"], f"{where}.properties[{i}].property")
        if prop in seen:
            raise MalformedSpec(f"duplicate property entry {prop!r} in {where}")
        seen.add(prop)
        if "ranges" not in item:
            raise MalformedSpec(f"{where}.properties[{i}] lacks 'ranges'")
        ranges = _parse_ranges(item["ranges"], f"{where}.properties[{i}].ranges", lenient)
        required = item.get("required", False)
        multitype = item.get("multitype", False)
        if not isinstance(required, bool) or not isinstance(multitype, bool):
            raise MalformedSpec(f"{where}.properties[{i}]: required/multitype must be booleans")
        constraints.append(PropertyConstraint(prop, ranges, required, multitype))
    return tuple(constraints)


def parse_domain_spec(doc: Mapping[str, Any], *, lenient: bool = True) -> DomainSpecification:
    """Build the in-memory model from a parsed DS JSON document.

    Unknown document keys are ignored with a warning by default; with
    lenient=False they raise MalformedSpec.
    """
    if not isinstance(doc, Mapping):
        raise MalformedSpec("specification document must be a JSON object")
    _ignore_unknown_keys(doc, _TOP_LEVEL_KEYS, "specification", lenient)
    name = doc.get("name")
    if not isinstance(name, str) or not name.strip():
        raise MalformedSpec("specification lacks a non-empty 'name'")
    version = doc.get("version")
    if version is not None and not isinstance(version, str):
        raise MalformedSpec("'version' must be a string when present")
    raw_types = doc.get("domainTypes")
    if not isinstance(raw_types, list) or not raw_types:
        raise MalformedSpec("'domainTypes' must be a non-empty list")
    domain_types: list[TermId] = []
    for i, raw in enumerate(raw_types):
        term = _parse_term(raw, f"domainTypes[{i}]")
        if term not in domain_types:
            domain_types.append(term)
    if "properties" not in doc:
        raise MalformedSpec("specification lacks 'properties'")
    constraints = _parse_constraints(doc["properties"], name, lenient)
    return DomainSpecification(
        name=name.strip(),
        domain_types=tuple(domain_types),
        constraints=constraints,
        version=version,
    )


def load_domain_spec(path: str, *, lenient: bool = True) -> DomainSpecification:
    """Read and parse a DS file from disk."""
    with open(path, encoding="utf-8") as handle:
        return parse_domain_spec(json.load(handle), lenient=lenient)


def _range_label(spec: RangeSpec) -> str:
    if spec.term is not None:
        return spec.term
    return f"{spec.nested.domain_types[0]}{{…}}"


def _check_into(
    ds: DomainSpecification,
    graph: VocabularyGraph,
    strict: bool,
    issues: list[DsIssue],
    context: str,
) -> None:
    soft = SEVERITY_ERROR if strict else SEVERITY_WARNING
    known_types = []
    for domain_type in ds.domain_types:
        if graph.has_class(domain_type):
            known_types.append(domain_type)
        else:
            issues.append(
                DsIssue(
                    D_UNKNOWN_TERM,
                    domain_type,
                    f"{context}domain type {domain_type!r} is not in the vocabulary",
                    SEVERITY_ERROR,
                )
            )
    seen: set[TermId] = set()
    for constraint in ds.constraints:
        prop = constraint.property
        if prop in seen:
            issues.append(
                DsIssue(
                    D_DUPLICATE_CONSTRAINT,
                    prop,
                    f"{context}property {prop!r} is constrained more than once",
                    SEVERITY_ERROR,
                )
            )
            continue
        seen.add(prop)
        if not graph.has_property(prop):
            issues.append(
                DsIssue(
                    D_UNKNOWN_TERM,
                    prop,
                    f"{context}property {prop!r} is not in the vocabulary",
                    SEVERITY_ERROR,
                )
            )
            continue
        prop_def = graph.properties[prop]
        misfits = [
            t
            for t in known_types
            if not any(graph.is_subclass_of(t, d) for d in prop_def.domain_includes)
        ]
        if misfits and known_types:
            issues.append(
                DsIssue(
                    D_PROPERTY_NOT_APPLICABLE,
                    prop,
                    f"{context}property {prop!r} does not apply to: {', '.join(misfits)}",
                    soft,
                )
            )
        for range_spec in constraint.ranges:
            if range_spec.term is not None:
                term = range_spec.term
                if not graph.has_class(term):
                    issues.append(
                        DsIssue(
                            D_UNKNOWN_TERM,
                            term,
                            f"{context}range {term!r} of {prop!r} is not in the vocabulary",
                            SEVERITY_ERROR,
                        )
                    )
                elif not graph.range_accepts(prop, term):
                    declared = ", ".join(sorted(prop_def.range_includes))
                    issues.append(
                        DsIssue(
                            D_RANGE_NOT_IN_VOCABULARY_RANGE,
                            term,
                            f"{context}range {term!r} of {prop!r} is outside the "
                            f"vocabulary ranges ({declared})",
                            soft,
                        )
                    )
            else:
                _check_into(
                    range_spec.nested,
                    graph,
                    strict,
                    issues,
                    context=f"{context}{prop} » ",
                )


def check_domain_spec(
    ds: DomainSpecification, graph: VocabularyGraph, mode: str = "lenient"
) -> DsCheckReport:
    """Verify a specification against the vocabulary.

    D001 (unknown term) and D004 (duplicate constraint) are always errors.
    D002 (property not applicable to every domain type) and D003 (declared
    range outside the vocabulary's range entries) are errors in strict mode
    and warnings in lenient mode. Nested ranges are checked recursively.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
    issues: list[DsIssue] = []
    _check_into(ds, graph, mode == "strict", issues, context="")
    return DsCheckReport(issues=tuple(issues))


def scaffold_domain_spec(
    graph: VocabularyGraph, type_id: TermId, include_inherited: bool = True
) -> DomainSpecification:
    """Draft a specification for a class from the vocabulary itself.

    One optional, single-valued constraint per applicable property, carrying
    the property's full declared range. With include_inherited=False only
    properties whose domainIncludes names the class directly are drafted.
    Range terms missing from the graph are dropped (a constraint with no
    usable range is omitted) so the scaffold always passes a strict check.
    """
    if not graph.has_class(type_id):
        raise UnknownTerm(f"not a class in the vocabulary: {type_id!r}")
    if include_inherited:
        candidates = graph.properties_for_type(type_id)
    else:
        candidates = sorted(
            (p for p in graph.properties.values() if type_id in p.domain_includes),
            key=lambda p: p.id,
        )
    constraints = []
    for prop in candidates:
        known_ranges = tuple(
            RangeSpec(term=r) for r in sorted(prop.range_includes) if graph.has_class(r)
        )
        if known_ranges:
            constraints.append(PropertyConstraint(prop.id, known_ranges))
    return DomainSpecification(
        name=type_id, domain_types=(type_id,), constraints=tuple(constraints)
    )


def diff_domain_specs(a: DomainSpecification, b: DomainSpecification) -> DsDiff:
    """Property-level difference between two specifications."""
    props_a = {c.property: c for c in a.constraints}
    props_b = {c.property: c for c in b.constraints}
    added = tuple(sorted(set(props_b) - set(props_a)))
    removed = tuple(sorted(set(props_a) - set(props_b)))
    changed: list[DsChange] = []
    for prop in sorted(set(props_a) & set(props_b)):
        ca, cb = props_a[prop], props_b[prop]
        deltas = []
        if ca.required != cb.required:
            deltas.append(f"required: {ca.required} -> {cb.required}")
        if ca.multitype != cb.multitype:
            deltas.append(f"multitype: {ca.multitype} -> {cb.multitype}")
        if ca.ranges != cb.ranges:
            left = ", ".join(_range_label(r) for r in ca.ranges)
            right = ", ".join(_range_label(r) for r in cb.ranges)
            deltas.append(f"ranges: [{left}] -> [{right}]")
        if deltas:
            changed.append(DsChange(prop, "; ".join(deltas)))
    return DsDiff(added=added, removed=removed, changed=tuple(changed))


def _serialize_range(spec: RangeSpec) -> Any:
    if spec.term is not None:
        return spec.term
    nested = spec.nested
    return {
        "type": nested.domain_types[0],
        "properties": [_serialize_constraint(c) for c in nested.constraints],
    }


def _serialize_constraint(constraint: PropertyConstraint) -> dict[str, Any]:
    return {
        "property": constraint.property,
        "ranges": [_serialize_range(r) for r in constraint.ranges],
        "required": constraint.required,
        "multitype": constraint.multitype,
    }


def serialize_domain_spec(ds: DomainSpecification) -> dict[str, Any]:
    """Canonical document form; parse_domain_spec inverts it exactly."""
    doc: dict[str, Any] = {"name": ds.name}
    if ds.version is not None:
        doc["version"] = ds.version
    doc["domainTypes"] = list(ds.domain_types)
    doc["properties"] = [_serialize_constraint(c) for c in ds.constraints]
    return doc


def dumps_domain_spec(ds: DomainSpecification) -> str:
    """Canonical JSON text for a specification (stable byte-for-byte)."""
    return json.dumps(serialize_domain_spec(ds), indent=2, ensure_ascii=False) + "\n"
