"""Command-line surface binding all modules for pipelines and CI.

Exit codes: 0 success/valid, 1 validation or check failures found,
2 usage, I/O, or parse errors. With --format json, stdout carries exactly
one JSON document and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Sequence
from pathlib import Path

from .annotation import extract_jsonld_blocks, parse_annotation, resolve_references
from .corpus import ScanOptions, scan_corpus
from .data import bundled_spec_dir, bundled_vocabulary_path
from .domainspec import (
    DomainSpecification,
    check_domain_spec,
    diff_domain_specs,
    dumps_domain_spec,
    load_domain_spec,
    scaffold_domain_spec,
)
from .errors import DsforgeError
from .validator import select_spec, validate_node
from .vocabulary import VocabularyGraph, load_vocabulary

VOCAB_ENV_VAR = "DSFORGE_VOCAB"

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2


def _load_graph(vocab_arg: str | None) -> VocabularyGraph:
    path = vocab_arg or os.environ.get(VOCAB_ENV_VAR)
    if not path:
        raise DsforgeError(
            f"no vocabulary file: pass --vocab or set {VOCAB_ENV_VAR}"
        )
    with open(path, encoding="utf-8") as handle:
        return load_vocabulary(json.load(handle))


def _load_spec_collection(ds_file: str | None, ds_dir: str | None) -> list[DomainSpecification]:
    if ds_file:
        return [load_domain_spec(ds_file)]
    directory = Path(ds_dir) if ds_dir else bundled_spec_dir()
    specs = [load_domain_spec(str(p)) for p in sorted(directory.glob("*.json"))]
    if not specs:
        raise DsforgeError(f"no specification files under {directory}")
    return specs


def _emit_json(payload: object) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_vocab_info(args: argparse.Namespace) -> int:
    graph = _load_graph(args.vocab_file)
    datatypes = sum(1 for c in graph.classes.values() if c.is_datatype)
    if args.format == "json":
        _emit_json(
            {
                "classes": len(graph.classes),
                "properties": len(graph.properties),
                "datatypes": datatypes,
                "warnings": [
                    {"code": w.code, "term": w.term, "detail": w.detail}
                    for w in graph.load_warnings
                ],
            }
        )
    else:
        print(f"classes:    {len(graph.classes)}")
        print(f"properties: {len(graph.properties)}")
        print(f"datatypes:  {datatypes}")
        print(f"warnings:   {len(graph.load_warnings)}")
        for warning in graph.load_warnings:
            print(f"  [{warning.code}] {warning.term}: {warning.detail}")
    return EXIT_OK


def _cmd_ds_check(args: argparse.Namespace) -> int:
    graph = _load_graph(args.vocab)
    ds = load_domain_spec(args.ds_file)
    mode = "strict" if args.strict else "lenient"
    report = check_domain_spec(ds, graph, mode)
    if args.format == "json":
        _emit_json(
            {
                "spec": ds.name,
                "mode": mode,
                "passed": report.passed,
                "issues": [
                    {
                        "code": i.code,
                        "severity": i.severity,
                        "term": i.term,
                        "detail": i.detail,
                    }
                    for i in report.issues
                ],
            }
        )
    else:
        for issue in report.issues:
            print(f"{issue.code} {issue.severity:7s} {issue.term}: {issue.detail}")
        errors = sum(1 for i in report.issues if i.severity == "error")
        warnings = len(report.issues) - errors
        verdict = "PASSED" if report.passed else "FAILED"
        print(f"{ds.name} [{mode}]: {verdict} ({errors} errors, {warnings} warnings)")
    return EXIT_OK if report.passed else EXIT_FAILURES


def _cmd_ds_scaffold(args: argparse.Namespace) -> int:
    graph = _load_graph(args.vocab)
    ds = scaffold_domain_spec(graph, args.type, include_inherited=not args.direct_only)
    _write_or_print(dumps_domain_spec(ds), args.output)
    return EXIT_OK


def _cmd_ds_diff(args: argparse.Namespace) -> int:
    a = load_domain_spec(args.spec_a)
    b = load_domain_spec(args.spec_b)
    diff = diff_domain_specs(a, b)
    if args.format == "json":
        _emit_json(
            {
                "added": list(diff.added),
                "removed": list(diff.removed),
                "changed": [{"property": c.property, "what": c.what} for c in diff.changed],
            }
        )
    else:
        for prop in diff.added:
            print(f"+ {prop}")
        for prop in diff.removed:
            print(f"- {prop}")
        for change in diff.changed:
            print(f"~ {change.property}: {change.what}")
        if diff.empty:
            print("specifications are identical")
    return EXIT_OK


def _annotation_documents(path: Path):
    if path.suffix.lower() in (".html", ".htm"):
        blocks, warnings = extract_jsonld_blocks(path.read_text(encoding="utf-8"))
        for warning in warnings:
            print(f"{path}: {warning}", file=sys.stderr)
        for block in blocks:
            yield parse_annotation(
                block.raw, origin=f"{path}#{block.block_index}", block_index=block.block_index
            )
    else:
        yield parse_annotation(path.read_text(encoding="utf-8"), origin=str(path))


def _cmd_validate(args: argparse.Namespace) -> int:
    graph = _load_graph(args.vocab)
    specs = _load_spec_collection(args.ds, args.ds_dir)
    reports = []
    unmatched = 0
    for raw_path in args.files:
        path = Path(raw_path)
        for document in _annotation_documents(path):
            document = resolve_references(document)
            for root_index, root in enumerate(document.roots):
                spec = select_spec(root, specs, graph, args.subclass_match)
                source = f"{document.source.origin}:{root_index}"
                if spec is None:
                    unmatched += 1
                    print(f"{source}: no specification matched", file=sys.stderr)
                    continue
                reports.append(validate_node(root, spec, graph, source=source))
    if args.format == "json":
        _emit_json([report.to_dict() for report in reports])
    else:
        for report in reports:
            flag = "valid" if report.valid else "INVALID"
            print(
                f"{report.source}: {flag} against {report.spec_name} "
                f"(completeness {float(report.completeness):.3f})"
            )
            for issue in report.issues:
                print(f"  {issue.code} {issue.severity:7s} {issue.path}: {issue.message}")
    return EXIT_OK if all(r.valid for r in reports) else EXIT_FAILURES


def _cmd_template(args: argparse.Namespace) -> int:
    from .validator import generate_template

    ds = load_domain_spec(args.ds_file)
    document = generate_template(ds, args.type)
    _write_or_print(json.dumps(document, indent=2, ensure_ascii=False) + "\n", args.output)
    return EXIT_OK


def _cmd_extract(args: argparse.Namespace) -> int:
    html = Path(args.html_file).read_text(encoding="utf-8")
    blocks, warnings = extract_jsonld_blocks(html)
    for warning in warnings:
        print(f"{args.html_file}: {warning}", file=sys.stderr)
    if args.format == "json":
        _emit_json([{"blockIndex": b.block_index, "raw": b.raw} for b in blocks])
    else:
        for block in blocks:
            sys.stdout.write(block.raw)
            if not block.raw.endswith("\n"):
                sys.stdout.write("\n")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    graph = _load_graph(args.vocab)
    specs = _load_spec_collection(None, args.ds_dir)
    options = ScanOptions(
        parallelism=args.parallelism, allow_subclass_match=args.subclass_match
    )
    report = scan_corpus([args.directory], specs, graph, options)
    payload = report.to_json()
    if args.output:
        Path(args.output).write_text(payload, encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(payload)
    else:
        stats = report.stats
        print(f"documents scanned:      {stats.documents_scanned}")
        print(f"blocks found:           {stats.blocks_found}")
        print(f"annotations validated:  {stats.annotations_validated}")
        print(f"unmatched annotations:  {stats.unmatched_annotations}")
        print(f"invalid annotations:    {stats.invalid_count}")
        print(f"mean completeness:      {float(stats.mean_completeness):.3f}")
        if stats.per_type_counts:
            print("per type:")
            for term in sorted(stats.per_type_counts):
                print(f"  {term}: {stats.per_type_counts[term]}")
        if stats.per_code_counts:
            print("per issue code:")
            for code in sorted(stats.per_code_counts):
                print(f"  {code}: {stats.per_code_counts[code]}")
        for error in report.errors:
            print(f"note: {error.path}: {error.detail}", file=sys.stderr)
    return EXIT_OK if report.stats.invalid_count == 0 else EXIT_FAILURES


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="output format (default: text)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsforge",
        description="Author schema.org domain specifications and validate annotations.",
        epilog=f"The bundled vocabulary subset lives at: {bundled_vocabulary_path()}",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    vocab = commands.add_parser("vocab", help="vocabulary inspection")
    vocab_sub = vocab.add_subparsers(dest="subcommand", required=True)
    vocab_info = vocab_sub.add_parser("info", help="term counts and load warnings")
    vocab_info.add_argument("vocab_file")
    _add_format(vocab_info)
    vocab_info.set_defaults(handler=_cmd_vocab_info)

    ds = commands.add_parser("ds", help="domain specification tools")
    ds_sub = ds.add_subparsers(dest="subcommand", required=True)

    ds_check = ds_sub.add_parser("check", help="check a spec against the vocabulary")
    ds_check.add_argument("ds_file")
    ds_check.add_argument("--vocab", help=f"vocabulary file (default: ${VOCAB_ENV_VAR})")
    ds_check.add_argument("--strict", action="store_true")
    _add_format(ds_check)
    ds_check.set_defaults(handler=_cmd_ds_check)

    ds_scaffold = ds_sub.add_parser("scaffold", help="draft a spec for a class")
    ds_scaffold.add_argument("type")
    ds_scaffold.add_argument("--vocab", help=f"vocabulary file (default: ${VOCAB_ENV_VAR})")
    ds_scaffold.add_argument(
        "--direct-only", action="store_true",
        help="only properties declared directly on the class",
    )
    ds_scaffold.add_argument("-o", "--output")
    ds_scaffold.set_defaults(handler=_cmd_ds_scaffold)

    ds_diff = ds_sub.add_parser("diff", help="compare two spec files")
    ds_diff.add_argument("spec_a")
    ds_diff.add_argument("spec_b")
    _add_format(ds_diff)
    ds_diff.set_defaults(handler=_cmd_ds_diff)

    validate = commands.add_parser("validate", help="validate annotation files")
    validate.add_argument("files", nargs="+")
    validate.add_argument("--ds", help="a single specification file")
    validate.add_argument("--ds-dir", help="directory of specification files")
    validate.add_argument("--vocab", help=f"vocabulary file (default: ${VOCAB_ENV_VAR})")
    validate.add_argument("--subclass-match", action="store_true")
    _add_format(validate)
    validate.set_defaults(handler=_cmd_validate)

    template = commands.add_parser("template", help="generate a JSON-LD skeleton")
    template.add_argument("ds_file")
    template.add_argument("--type", required=True)
    template.add_argument("-o", "--output")
    template.set_defaults(handler=_cmd_template)

    extract = commands.add_parser("extract", help="print ld+json blocks from a page")
    extract.add_argument("html_file")
    _add_format(extract)
    extract.set_defaults(handler=_cmd_extract)

    report = commands.add_parser("report", help="batch-validate a directory")
    report.add_argument("directory")
    report.add_argument("--ds-dir", help="directory of specification files")
    report.add_argument("--vocab", help=f"vocabulary file (default: ${VOCAB_ENV_VAR})")
    report.add_argument("--parallelism", type=int, default=1)
    report.add_argument("--subclass-match", action="store_true")
    report.add_argument("-o", "--output", help="also write the JSON report here")
    _add_format(report)
    report.set_defaults(handler=_cmd_report)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.handler(args)
    except (DsforgeError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
