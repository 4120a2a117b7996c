"""Immutable schema.org term graph with subclass reasoning.

Loads a vocabulary release document (the ``@graph``-keyed JSON-LD shape
published by schema.org) into a :class:`VocabularyGraph` that answers
subclass, property-applicability, and range-acceptance queries. The graph
precomputes the reflexive-transitive superclass closure so lookups are
set-membership tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .errors import DuplicateTerm, MalformedVocabulary, UnknownTerm

TermId = str

# Datatype roots; vocabulary-declared subtypes (URL under Text, Integer and
# Float under Number) inherit datatype-ness through the subclass closure.
CORE_DATATYPES = frozenset(
    {"Text", "URL", "Boolean", "Number", "Date", "DateTime", "Time"}
)

_SCHEMA_IRI_PREFIXES = (
    "http://schema.org/",
    "https://schema.org/",
    "schema:",
)

_CLASS_MARKERS = {
    "rdfs:Class",
    "http://www.w3.org/2000/01/rdf-schema#Class",
    "https://www.w3.org/2000/01/rdf-schema#Class",
}
_PROPERTY_MARKERS = {
    "rdf:Property",
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property",
    "https://www.w3.org/1999/02/22-rdf-syntax-ns#Property",
}
_DATATYPE_MARKERS = {
    "schema:DataType",
    "http://schema.org/DataType",
    "https://schema.org/DataType",
}


def normalize_term(raw: object) -> TermId | None:
    """Normalize a term reference to its bare schema.org name.

    Absolute schema.org IRIs and ``schema:``-prefixed names reduce to the
    bare name. Returns None for anything that cannot be a term id: empty
    strings, names with whitespace, or IRIs from a foreign namespace
    (callers treat those as unknown terms).
    """
    if not isinstance(raw, str):
        return None
    name = raw.strip()
    for prefix in _SCHEMA_IRI_PREFIXES:
        if name.startswith(prefix):
            name = name[len(prefix):]
            break
    else:
        if ":" in name and name.partition(":")[0].isalpha():
            return None  # foreign scheme or prefix
    if not name or "/" in name or any(ch.isspace() for ch in name):
        return None
    return name


@dataclass(frozen=True)
class ClassDef:
    """A vocabulary class (datatypes included)."""

    id: TermId
    superclasses: frozenset[TermId]
    is_datatype: bool = False


@dataclass(frozen=True)
class PropertyDef:
    """A vocabulary property with its declared domain and range classes."""

    id: TermId
    domain_includes: frozenset[TermId]
    range_includes: frozenset[TermId]


@dataclass(frozen=True)
class LoadWarning:
    """A non-fatal oddity observed while loading a vocabulary document."""

    code: str  # dangling_superclass | subclass_cycle | empty_domain | empty_range
    term: TermId
    detail: str


class VocabularyGraph:
    """Immutable term graph; safe to share across threads after load."""

    def __init__(
        self,
        classes: Mapping[TermId, ClassDef],
        properties: Mapping[TermId, PropertyDef],
        ancestors: Mapping[TermId, frozenset[TermId]],
        load_warnings: Iterable[LoadWarning] = (),
    ) -> None:
        self._classes = dict(classes)
        self._properties = dict(properties)
        self._ancestors = dict(ancestors)
        self._load_warnings = tuple(load_warnings)

    @property
    def classes(self) -> Mapping[TermId, ClassDef]:
        return self._classes

    @property
    def properties(self) -> Mapping[TermId, PropertyDef]:
        return self._properties

    @property
    def load_warnings(self) -> tuple[LoadWarning, ...]:
        return self._load_warnings

    def has_class(self, term: TermId) -> bool:
        return term in self._classes

    def has_property(self, term: TermId) -> bool:
        return term in self._properties

    def ancestors_of(self, term: TermId) -> frozenset[TermId]:
        """Reflexive-transitive superclasses of a class; empty for unknowns."""
        return self._ancestors.get(term, frozenset())

    def is_subclass_of(self, sub: TermId, sup: TermId) -> bool:
        """True iff sub == sup or sup is reachable via superclass edges.

        Total: unknown terms are only subclasses of themselves.
        """
        return sub == sup or sup in self._ancestors.get(sub, frozenset())

    def properties_for_type(self, type_id: TermId) -> list[PropertyDef]:
        """All properties applicable to a class, sorted by term id.

        A property applies when the class is a subclass of (or equal to) any
        of its domainIncludes entries.
        """
        if type_id not in self._classes:
            raise UnknownTerm(f"not a class in the vocabulary: {type_id!r}")
        ancestors = self._ancestors[type_id]
        found = [
            prop
            for prop in self._properties.values()
            if not ancestors.isdisjoint(prop.domain_includes)
        ]
        found.sort(key=lambda p: p.id)
        return found

    def range_accepts(self, property_id: TermId, candidate: TermId) -> bool:
        """True iff the candidate class satisfies any rangeIncludes entry."""
        prop = self._properties.get(property_id)
        if prop is None:
            raise UnknownTerm(f"not a property in the vocabulary: {property_id!r}")
        return any(self.is_subclass_of(candidate, r) for r in prop.range_includes)


def _reference_ids(value: Any) -> list[TermId]:
    """Extract normalized term ids from a JSON-LD reference value."""
    refs: list[TermId] = []
    items = value if isinstance(value, list) else [value]
    for item in items:
        raw = item.get("@id") if isinstance(item, dict) else item
        term = normalize_term(raw)
        if term is not None:
            refs.append(term)
    return refs


def _type_markers(entry: Mapping[str, Any]) -> set[str]:
    raw = entry.get("@type", [])
    if isinstance(raw, str):
        return {raw}
    if isinstance(raw, list):
        return {item for item in raw if isinstance(item, str)}
    return set()


def _strongly_connected_components(
    nodes: Iterable[TermId], edges: Mapping[TermId, list[TermId]]
) -> list[list[TermId]]:
    """Tarjan's SCC algorithm, iterative to spare the recursion limit."""
    index_of: dict[TermId, int] = {}
    lowlink: dict[TermId, int] = {}
    on_stack: set[TermId] = set()
    stack: list[TermId] = []
    components: list[list[TermId]] = []
    counter = 0

    for root in nodes:
        if root in index_of:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index_of:
                    index_of[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(edges.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index_of[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
    return components


def load_vocabulary(doc: Mapping[str, Any]) -> VocabularyGraph:
    """Build a VocabularyGraph from a parsed schema.org release document.

    Every usable term entry becomes exactly one ClassDef or PropertyDef;
    entries that are neither a class nor a property (enumeration members)
    are skipped. Dangling superclass references, subclass cycles, and empty
    domain/range declarations are tolerated and recorded as load warnings.
    """
    if not isinstance(doc, Mapping) or "@graph" not in doc:
        raise MalformedVocabulary("vocabulary document lacks an '@graph' term collection")
    entries = doc["@graph"]
    if not isinstance(entries, list):
        raise MalformedVocabulary("'@graph' must be an array of term entries")

    raw_superclasses: dict[TermId, list[TermId]] = {}
    datatype_marked: set[TermId] = set()
    properties: dict[TermId, PropertyDef] = {}
    warnings: list[LoadWarning] = []
    seen: set[TermId] = set()

    for entry in entries:
        if not isinstance(entry, Mapping) or "@id" not in entry:
            raise MalformedVocabulary("term entry lacks an '@id' identifier")
        term = normalize_term(entry["@id"])
        if term is None:
            continue  # foreign-namespace entry; cannot be a term id
        markers = _type_markers(entry)
        is_class = bool(markers & _CLASS_MARKERS)
        is_property = bool(markers & _PROPERTY_MARKERS)
        if not is_class and not is_property:
            continue  # enumeration members and other non-term entries
        if term in seen:
            raise DuplicateTerm(f"duplicate term id in vocabulary: {term!r}")
        seen.add(term)
        if is_class:
            raw_superclasses[term] = _reference_ids(entry.get("rdfs:subClassOf", []))
            if markers & _DATATYPE_MARKERS:
                datatype_marked.add(term)
        else:
            domain = frozenset(_reference_ids(entry.get("schema:domainIncludes", [])))
            range_ = frozenset(_reference_ids(entry.get("schema:rangeIncludes", [])))
            if not domain:
                warnings.append(
                    LoadWarning("empty_domain", term, "property declares no domainIncludes")
                )
            if not range_:
                warnings.append(
                    LoadWarning("empty_range", term, "property declares no rangeIncludes")
                )
            properties[term] = PropertyDef(term, domain, range_)

    # Keep only edges whose target is a known class; warn about the rest.
    edges: dict[TermId, list[TermId]] = {}
    for term, supers in raw_superclasses.items():
        kept = []
        for sup in supers:
            if sup in raw_superclasses:
                kept.append(sup)
            else:
                warnings.append(
                    LoadWarning(
                        "dangling_superclass",
                        term,
                        f"superclass {sup!r} is not defined; edge ignored",
                    )
                )
        edges[term] = kept

    # Closure over the SCC condensation: members of a cycle share ancestors.
    components = _strongly_connected_components(raw_superclasses.keys(), edges)
    component_of = {
        member: idx for idx, comp in enumerate(components) for member in comp
    }
    ancestors: dict[TermId, frozenset[TermId]] = {}
    component_ancestors: dict[int, frozenset[TermId]] = {}
    # Tarjan emits components in reverse topological order of the successor
    # DAG, so every superclass component is resolved before its subclasses.
    for idx, comp in enumerate(components):
        acc: set[TermId] = set(comp)
        for member in comp:
            for sup in edges[member]:
                sup_comp = component_of[sup]
                if sup_comp != idx:
                    acc |= component_ancestors[sup_comp]
        component_ancestors[idx] = frozenset(acc)
        for member in comp:
            ancestors[member] = component_ancestors[idx]
        has_cycle = len(comp) > 1 or any(m in edges[m] for m in comp)
        if has_cycle:
            cycle = ", ".join(sorted(comp))
            warnings.append(
                LoadWarning("subclass_cycle", min(comp), f"subclass cycle among: {cycle}")
            )

    datatype_roots = datatype_marked | (CORE_DATATYPES & raw_superclasses.keys())
    classes = {
        term: ClassDef(
            term,
            frozenset(edges[term]),
            is_datatype=not ancestors[term].isdisjoint(datatype_roots),
        )
        for term in raw_superclasses
    }
    return VocabularyGraph(classes, properties, ancestors, warnings)
