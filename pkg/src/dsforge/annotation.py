"""Extract JSON-LD blocks from HTML and parse them into annotation nodes.

Only the plain schema.org context is recognized; Microdata and RDFa are out
of scope. Numbers are parsed with decimal.Decimal so report output never
suffers float round-trip drift.
"""

from __future__ import annotations

import copy
import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any

from .errors import AnnotationParseError, EmptyDocument, UnsupportedContext
from .vocabulary import normalize_term

_RECOGNIZED_CONTEXTS = {
    "http://schema.org",
    "http://schema.org/",
    "https://schema.org",
    "https://schema.org/",
}

_SCRIPT_OPEN = re.compile(r"<script\b[^>]*>", re.IGNORECASE | re.DOTALL)
_SCRIPT_CLOSE = re.compile(r"</script\s*>", re.IGNORECASE)
_TYPE_ATTR = re.compile(
    r"""\btype\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>]+))""", re.IGNORECASE
)


@dataclass(frozen=True)
class JsonLdBlock:
    """Raw character content of one ld+json script element."""

    raw: str
    block_index: int


@dataclass(frozen=True)
class SourceRef:
    origin: str
    block_index: int


@dataclass(frozen=True)
class AnnotationValue:
    """Exactly one of text/number/boolean/node/reference is populated."""

    text: str | None = None
    number: int | Decimal | None = None
    boolean: bool | None = None
    node: "AnnotationNode | None" = None
    reference: str | None = None

    @property
    def kind(self) -> str:
        if self.text is not None:
            return "text"
        if self.number is not None:
            return "number"
        if self.boolean is not None:
            return "boolean"
        if self.node is not None:
            return "node"
        return "reference"

    def describe(self) -> str:
        """Short human label for report output."""
        if self.text is not None:
            return f'string "{self.text}"'
        if self.number is not None:
            return f"number {self.number}"
        if self.boolean is not None:
            return f"boolean {str(self.boolean).lower()}"
        if self.node is not None:
            types = ", ".join(self.node.types) or "untyped"
            return f"node of type {types}"
        return f"reference {self.reference}"


@dataclass
class AnnotationNode:
    """A parsed JSON-LD entity; property insertion order is preserved."""

    types: list[str] = field(default_factory=list)
    node_id: str | None = None
    properties: dict[str, list[AnnotationValue]] = field(default_factory=dict)


@dataclass
class AnnotationDocument:
    roots: list[AnnotationNode]
    source: SourceRef
    parse_warnings: list[str] = field(default_factory=list)


def extract_jsonld_blocks(html: str) -> tuple[list[JsonLdBlock], list[str]]:
    """Return the content of every ld+json script element, in page order.

    Tag and attribute matching is case-insensitive and tolerant of quoting
    style and attribute order. An unterminated script element is skipped
    with a warning. Malformed markup degrades to best-effort extraction.
    """
    blocks: list[JsonLdBlock] = []
    warnings: list[str] = []
    position = 0
    while True:
        open_match = _SCRIPT_OPEN.search(html, position)
        if open_match is None:
            break
        position = open_match.end()
        type_match = _TYPE_ATTR.search(open_match.group(0))
        if type_match is None:
            continue
        declared = next(g for g in type_match.groups() if g is not None)
        media_type = declared.split(";", 1)[0].strip().lower()
        if media_type != "application/ld+json":
            continue
        close_match = _SCRIPT_CLOSE.search(html, position)
        if close_match is None:
            warnings.append(
                f"unterminated ld+json script element at offset {open_match.start()}; skipped"
            )
            break
        blocks.append(JsonLdBlock(html[position : close_match.start()], len(blocks)))
        position = close_match.end()
    return blocks, warnings


def _context_recognized(context: Any) -> bool:
    if isinstance(context, str):
        return context.strip() in _RECOGNIZED_CONTEXTS
    if isinstance(context, Mapping):
        vocab = context.get("@vocab")
        return isinstance(vocab, str) and vocab.strip() in _RECOGNIZED_CONTEXTS
    return False


def _check_context(obj: Mapping[str, Any], warnings: list[str]) -> None:
    if "@context" not in obj:
        warnings.append("no @context declared; assuming schema.org")
        return
    context = obj["@context"]
    if not _context_recognized(context):
        raise UnsupportedContext(f"unsupported @context: {context!r}")


def _flatten_values(raw: Any, prop: str, warnings: list[str]) -> list[AnnotationValue]:
    if raw is None:
        warnings.append(f"property {prop!r} has a null value; recorded with no values")
        return []
    if isinstance(raw, list):
        if not raw:
            warnings.append(f"property {prop!r} has an empty array; recorded with no values")
            return []
        flat: list[AnnotationValue] = []
        for item in raw:
            if item is None:
                warnings.append(f"property {prop!r} contains a null entry; entry dropped")
                continue
            flat.extend(_flatten_values(item, prop, warnings))
        return flat
    if isinstance(raw, bool):
        return [AnnotationValue(boolean=raw)]
    if isinstance(raw, str):
        return [AnnotationValue(text=raw)]
    if isinstance(raw, (int, Decimal)):
        return [AnnotationValue(number=raw)]
    if isinstance(raw, float):  # defensive; json parsing maps floats to Decimal
        return [AnnotationValue(number=Decimal(str(raw)))]
    if isinstance(raw, Mapping):
        keys = set(raw)
        if keys == {"@id"} and isinstance(raw["@id"], str):
            return [AnnotationValue(reference=raw["@id"])]
        return [AnnotationValue(node=_convert_node(raw, warnings))]
    warnings.append(f"property {prop!r} has an unsupported value; dropped")
    return []


def _convert_node(obj: Mapping[str, Any], warnings: list[str]) -> AnnotationNode:
    raw_types = obj.get("@type", [])
    if isinstance(raw_types, str):
        raw_types = [raw_types]
    types: list[str] = []
    if isinstance(raw_types, list):
        for raw in raw_types:
            if isinstance(raw, str):
                types.append(normalize_term(raw) or raw)
            else:
                warnings.append(f"non-string @type entry {raw!r}; dropped")
    node_id = obj.get("@id")
    if node_id is not None and not isinstance(node_id, str):
        warnings.append(f"non-string @id {node_id!r}; dropped")
        node_id = None
    node = AnnotationNode(types=types, node_id=node_id)
    for key, raw_value in obj.items():
        if key in ("@type", "@id", "@context"):
            continue
        if not key:
            warnings.append("empty property name; dropped")
            continue
        if key.startswith("@"):
            warnings.append(f"JSON-LD keyword {key!r} is not handled; ignored")
            continue
        node.properties[key] = _flatten_values(raw_value, key, warnings)
    return node


def parse_annotation(
    raw: str, *, origin: str = "<annotation>", block_index: int = 0
) -> AnnotationDocument:
    """Parse one JSON-LD block into a normalized annotation document.

    Accepts a single node object, a top-level @graph container, or a bare
    array of node objects. A declared @context must be one of the
    recognized schema.org forms.
    """
    try:
        data = json.loads(raw, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise AnnotationParseError(f"{origin}: not well-formed JSON: {exc}") from exc

    warnings: list[str] = []
    candidates: list[Any]
    if isinstance(data, Mapping):
        _check_context(data, warnings)
        if "@graph" in data:
            graph = data["@graph"]
            if not isinstance(graph, list):
                raise AnnotationParseError(f"{origin}: @graph must be an array")
            stray = set(data) - {"@context", "@graph", "@id"}
            if stray:
                warnings.append(
                    f"keys alongside @graph ignored: {', '.join(sorted(stray))}"
                )
            candidates = graph
        else:
            candidates = [data]
    elif isinstance(data, list):
        candidates = data
    else:
        raise EmptyDocument(f"{origin}: no root node objects")

    roots: list[AnnotationNode] = []
    for item in candidates:
        if isinstance(item, Mapping):
            if item is not data and "@context" in item:
                _check_context(item, warnings)
            roots.append(_convert_node(item, warnings))
        else:
            warnings.append(f"non-object root entry {item!r}; dropped")
    if not roots:
        raise EmptyDocument(f"{origin}: no root node objects")
    return AnnotationDocument(
        roots=roots,
        source=SourceRef(origin=origin, block_index=block_index),
        parse_warnings=warnings,
    )


def _collect_nodes(roots: list[AnnotationNode]) -> list[AnnotationNode]:
    seen: set[int] = set()
    ordered: list[AnnotationNode] = []
    stack = list(reversed(roots))
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        ordered.append(node)
        children = [
            value.node
            for values in node.properties.values()
            for value in values
            if value.node is not None
        ]
        stack.extend(reversed(children))
    return ordered


def _reference_sccs(
    nodes: list[AnnotationNode], id_map: dict[str, AnnotationNode]
) -> dict[int, int]:
    """SCC index per node over containment plus would-be reference edges."""
    successors: dict[int, list[AnnotationNode]] = {}
    for node in nodes:
        out: list[AnnotationNode] = []
        for values in node.properties.values():
            for value in values:
                if value.node is not None:
                    out.append(value.node)
                elif value.reference is not None and value.reference in id_map:
                    out.append(id_map[value.reference])
        successors[id(node)] = out

    index_of: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    component_of: dict[int, int] = {}
    counter = 0
    component = 0
    for root in nodes:
        if id(root) in index_of:
            continue
        work = [(id(root), iter(successors[id(root)]))]
        index_of[id(root)] = lowlink[id(root)] = counter
        counter += 1
        stack.append(id(root))
        on_stack.add(id(root))
        while work:
            pyid, it = work[-1]
            advanced = False
            for succ_node in it:
                succ = id(succ_node)
                if succ not in index_of:
                    index_of[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(successors[succ])))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[pyid] = min(lowlink[pyid], index_of[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[pyid])
            if lowlink[pyid] == index_of[pyid]:
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component_of[member] = component
                    if member == pyid:
                        break
                component += 1
    return component_of


def resolve_references(doc: AnnotationDocument) -> AnnotationDocument:
    """Replace @id references with the node they point to, sharing objects.

    References whose target is missing stay in place with a warning, as do
    references that would close a containment cycle (one warning per
    cycle). Idempotent: a second application changes nothing.
    """
    resolved = copy.deepcopy(doc)
    nodes = _collect_nodes(resolved.roots)

    id_map: dict[str, AnnotationNode] = {}
    for node in nodes:
        if node.node_id is None:
            continue
        if node.node_id in id_map:
            _add_warning(resolved, f"duplicate @id {node.node_id!r}; first occurrence wins")
        else:
            id_map[node.node_id] = node

    component_of = _reference_sccs(nodes, id_map)
    warned_cycles: set[int] = set()
    for node in nodes:
        for prop, values in node.properties.items():
            for i, value in enumerate(values):
                if value.reference is None:
                    continue
                target = id_map.get(value.reference)
                if target is None:
                    _add_warning(
                        resolved,
                        f"unresolved reference {value.reference!r} on {prop!r}",
                    )
                    continue
                if component_of[id(node)] == component_of[id(target)]:
                    scc = component_of[id(node)]
                    if scc not in warned_cycles:
                        warned_cycles.add(scc)
                        members = sorted(
                            n.node_id for n in nodes
                            if component_of[id(n)] == scc and n.node_id is not None
                        )
                        _add_warning(
                            resolved,
                            "reference cycle; left unresolved: " + ", ".join(members),
                        )
                    continue
                values[i] = AnnotationValue(node=target)
    return resolved


def _add_warning(doc: AnnotationDocument, text: str) -> None:
    if text not in doc.parse_warnings:
        doc.parse_warnings.append(text)
