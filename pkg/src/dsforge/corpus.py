"""Batch-validate pages and annotation files; aggregate quality statistics.

Files may be processed concurrently, but the assembled report is ordered
by (file path, block index, root index) so output is byte-identical for
any parallelism level and any input ordering.
"""

from __future__ import annotations

import json
import re
from collections.abc import Collection, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from .annotation import extract_jsonld_blocks, parse_annotation, resolve_references
from .domainspec import DomainSpecification
from .errors import DsforgeError, EmptyCorpus
from .validator import (
    ValidationOptions,
    ValidationReport,
    matching_type,
    select_spec,
    validate_node,
)
from .vocabulary import TermId, VocabularyGraph

SUPPORTED_EXTENSIONS = {".html", ".htm", ".json", ".jsonld"}

_META_CHARSET = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?([A-Za-z0-9_-]+)""", re.IGNORECASE
)


@dataclass(frozen=True)
class ScanOptions:
    parallelism: int = 1
    allow_subclass_match: bool = False
    validation: ValidationOptions = field(default_factory=ValidationOptions)


@dataclass(frozen=True)
class ScanError:
    path: str
    detail: str


@dataclass(frozen=True)
class CorpusStats:
    documents_scanned: int = 0
    blocks_found: int = 0
    annotations_validated: int = 0
    unmatched_annotations: int = 0
    per_type_counts: dict[TermId, int] = field(default_factory=dict)
    per_code_counts: dict[str, int] = field(default_factory=dict)
    mean_completeness: Fraction = Fraction(0)
    invalid_count: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "documentsScanned": self.documents_scanned,
            "blocksFound": self.blocks_found,
            "annotationsValidated": self.annotations_validated,
            "unmatchedAnnotations": self.unmatched_annotations,
            "perTypeCounts": {k: self.per_type_counts[k] for k in sorted(self.per_type_counts)},
            "perCodeCounts": {k: self.per_code_counts[k] for k in sorted(self.per_code_counts)},
            "meanCompleteness": float(self.mean_completeness),
            "invalidCount": self.invalid_count,
        }


@dataclass(frozen=True)
class CorpusReport:
    stats: CorpusStats
    reports: tuple[ValidationReport, ...] = ()
    errors: tuple[ScanError, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "stats": self.stats.to_dict(),
            "reports": [report.to_dict() for report in self.reports],
            "errors": [{"path": e.path, "detail": e.detail} for e in self.errors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def aggregate(reports: Sequence[ValidationReport]) -> CorpusStats:
    """Pure fold of validation reports into corpus statistics.

    Scan-level counters (documents, blocks, unmatched annotations) stay
    zero here; scan_corpus fills them in. Mean completeness over zero
    reports is 0.
    """
    per_type: dict[TermId, int] = {}
    per_code: dict[str, int] = {}
    invalid = 0
    total_completeness = Fraction(0)
    for report in reports:
        if report.matched_type is not None:
            per_type[report.matched_type] = per_type.get(report.matched_type, 0) + 1
        for issue in report.issues:
            per_code[issue.code] = per_code.get(issue.code, 0) + 1
        if not report.valid:
            invalid += 1
        total_completeness += report.completeness
    mean = total_completeness / len(reports) if reports else Fraction(0)
    return CorpusStats(
        annotations_validated=len(reports),
        per_type_counts=per_type,
        per_code_counts=per_code,
        mean_completeness=mean,
        invalid_count=invalid,
    )


def discover_files(paths: Iterable[str | Path]) -> tuple[list[Path], list[ScanError]]:
    """Resolve input paths to the sorted list of supported files.

    Directories are walked recursively; hidden files and directories are
    skipped. Missing paths are recorded, not fatal.
    """
    found: set[Path] = set()
    errors: list[ScanError] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for candidate in path.rglob("*"):
                relative = candidate.relative_to(path)
                if any(part.startswith(".") for part in relative.parts):
                    continue
                if candidate.is_file() and candidate.suffix.lower() in SUPPORTED_EXTENSIONS:
                    found.add(candidate)
        elif path.is_file():
            if path.suffix.lower() in SUPPORTED_EXTENSIONS:
                found.add(path)
        else:
            errors.append(ScanError(str(path), "path does not exist or is unreadable"))
    return sorted(found, key=str), errors


def _read_text(path: Path) -> str:
    data = path.read_bytes()
    declared = None
    if path.suffix.lower() in (".html", ".htm"):
        match = _META_CHARSET.search(data[:2048])
        if match:
            declared = match.group(1).decode("ascii", "ignore")
    for encoding in filter(None, (declared, "utf-8")):
        try:
            return data.decode(encoding)
        except (UnicodeDecodeError, LookupError):
            continue
    return data.decode("latin-1", errors="replace")


@dataclass
class _FileResult:
    blocks_found: int = 0
    roots_seen: int = 0
    unmatched: int = 0
    reports: list[ValidationReport] = field(default_factory=list)
    errors: list[ScanError] = field(default_factory=list)
    read_ok: bool = True


def _scan_file(
    path: Path,
    specs: Collection[DomainSpecification],
    graph: VocabularyGraph,
    options: ScanOptions,
) -> _FileResult:
    result = _FileResult()
    try:
        text = _read_text(path)
    except OSError as exc:
        result.errors.append(ScanError(str(path), f"read failed: {exc}"))
        result.read_ok = False
        return result

    if path.suffix.lower() in (".html", ".htm"):
        blocks, warnings = extract_jsonld_blocks(text)
        for warning in warnings:
            result.errors.append(ScanError(str(path), warning))
        raws = [(block.block_index, block.raw) for block in blocks]
    else:
        raws = [(0, text)]

    result.blocks_found = len(raws)
    for block_index, raw in raws:
        origin = f"{path}#{block_index}"
        try:
            document = parse_annotation(raw, origin=origin, block_index=block_index)
        except DsforgeError as exc:
            result.errors.append(ScanError(str(path), str(exc)))
            continue
        document = resolve_references(document)
        for root_index, root in enumerate(document.roots):
            result.roots_seen += 1
            spec = select_spec(root, specs, graph, options.allow_subclass_match)
            if spec is None:
                result.unmatched += 1
                continue
            result.reports.append(
                validate_node(
                    root,
                    spec,
                    graph,
                    options.validation,
                    source=f"{origin}:{root_index}",
                    matched_type=matching_type(root, spec, graph),
                )
            )
    return result


def scan_corpus(
    paths: Iterable[str | Path],
    specs: Collection[DomainSpecification],
    graph: VocabularyGraph,
    options: ScanOptions | None = None,
) -> CorpusReport:
    """Validate every annotation found under the given paths.

    HTML files contribute their embedded ld+json blocks; .json/.jsonld
    files count as one block each. Roots with no matching specification
    are counted as unmatched, never failed. Unreadable or unparseable
    inputs are recorded and the scan continues.
    """
    options = options or ScanOptions()
    files, errors = discover_files(paths)
    if not files:
        raise EmptyCorpus("no files with a supported extension found")

    if options.parallelism > 1:
        with ThreadPoolExecutor(max_workers=options.parallelism) as pool:
            results = list(pool.map(lambda f: _scan_file(f, specs, graph, options), files))
    else:
        results = [_scan_file(f, specs, graph, options) for f in files]

    reports: list[ValidationReport] = []
    all_errors = list(errors)
    blocks_found = 0
    roots_seen = 0
    unmatched = 0
    scanned = 0
    for result in results:
        scanned += 1 if result.read_ok else 0
        blocks_found += result.blocks_found
        roots_seen += result.roots_seen
        unmatched += result.unmatched
        reports.extend(result.reports)
        all_errors.extend(result.errors)

    stats = replace(
        aggregate(reports),
        documents_scanned=scanned,
        blocks_found=blocks_found,
        annotations_validated=roots_seen,
        unmatched_annotations=unmatched,
    )
    return CorpusReport(
        stats=stats,
        reports=tuple(reports),
        errors=tuple(sorted(all_errors, key=lambda e: (e.path, e.detail))),
    )
