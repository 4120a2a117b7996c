from __future__ import annotations

import copy
import json
import random
import re
from decimal import Decimal

import pytest

from dsforge import (
    AnnotationParseError,
    EmptyDocument,
    UnsupportedContext,
    extract_jsonld_blocks,
    parse_annotation,
    resolve_references,
)

LD = '<script type="application/ld+json">'


def page(*scripts):
    body = "\n".join(scripts)
    return f"<html><head><title>t</title></head><body>{body}</body></html>"


class TestExtraction:
    def test_two_blocks_in_document_order(self):
        html = page(
            f'{LD}{{"@type": "Restaurant"}}</script>',
            f'{LD}{{"@type": "Hotel"}}</script>',
        )
        blocks, warnings = extract_jsonld_blocks(html)
        assert [b.block_index for b in blocks] == [0, 1]
        assert "Restaurant" in blocks[0].raw
        assert "Hotel" in blocks[1].raw
        assert warnings == []

    def test_page_without_blocks(self):
        blocks, warnings = extract_jsonld_blocks(page("<script>var x = 1;</script>"))
        assert blocks == []
        assert warnings == []

    def test_unterminated_block_skipped_with_warning(self):
        html = page(f'{LD}{{"@type": "Restaurant"}}</script>', f'{LD}{{"@type": "Hotel"}}')
        blocks, warnings = extract_jsonld_blocks(html)
        assert len(blocks) == 1
        assert len(warnings) == 1
        assert "unterminated" in warnings[0]

    def test_matching_is_tolerant_of_markup_style(self):
        html = page(
            "<SCRIPT TYPE='APPLICATION/LD+JSON'>{}</SCRIPT>",
            '<script async type = "application/ld+json" id="x">{}</script>',
            '<script type="application/ld+json; charset=utf-8">{}</script>',
            "<script type=application/ld+json>{}</script>",
        )
        blocks, _ = extract_jsonld_blocks(html)
        assert len(blocks) == 4

    def test_other_script_types_ignored(self):
        html = page(
            '<script type="text/javascript">var a;</script>',
            '<script type="application/json">{}</script>',
            "<script>plain();</script>",
        )
        blocks, _ = extract_jsonld_blocks(html)
        assert blocks == []

    def test_block_count_matches_regex_scan_oracle(self):
        rng = random.Random(777)
        opener = re.compile(
            r"<script[^>]*type\s*=\s*['\"]?application/ld\+json", re.IGNORECASE
        )
        for _ in range(50):
            scripts = []
            expected = 0
            for _ in range(rng.randint(0, 6)):
                kind = rng.random()
                if kind < 0.5:
                    scripts.append(f'{LD}{{"@type": "Restaurant"}}</script>')
                    expected += 1
                elif kind < 0.75:
                    scripts.append("<script type='text/javascript'>f();</script>")
                else:
                    scripts.append("<p>plain paragraph</p>")
            html = page(*scripts)
            blocks, _ = extract_jsonld_blocks(html)
            assert len(blocks) == expected
            assert len(opener.findall(html)) == expected


class TestParse:
    def test_single_node(self):
        doc = parse_annotation(
            '{"@context":"https://schema.org","@type":"Restaurant","name":"X"}'
        )
        assert len(doc.roots) == 1
        root = doc.roots[0]
        assert root.types == ["Restaurant"]
        assert list(root.properties) == ["name"]
        assert root.properties["name"][0].text == "X"

    def test_graph_array_yields_multiple_roots(self):
        raw = json.dumps(
            {
                "@context": "https://schema.org",
                "@graph": [{"@type": "Restaurant"}, {"@type": "Hotel"}],
            }
        )
        doc = parse_annotation(raw)
        assert [r.types for r in doc.roots] == [["Restaurant"], ["Hotel"]]

    def test_foreign_context_rejected(self):
        with pytest.raises(UnsupportedContext):
            parse_annotation('{"@context":"http://example.org/ns","@type":"Thing"}')

    def test_context_variants_accepted(self):
        for context in (
            "http://schema.org",
            "https://schema.org/",
            {"@vocab": "https://schema.org/"},
        ):
            raw = json.dumps({"@context": context, "@type": "Restaurant"})
            assert parse_annotation(raw).roots

    def test_missing_context_tolerated_with_warning(self):
        doc = parse_annotation('{"@type":"Restaurant"}')
        assert any("@context" in w for w in doc.parse_warnings)

    def test_bare_array_accepted(self):
        doc = parse_annotation('[{"@type":"Restaurant"},{"@type":"Hotel"}]')
        assert len(doc.roots) == 2

    def test_malformed_json(self):
        with pytest.raises(AnnotationParseError):
            parse_annotation("{not json")

    def test_empty_document(self):
        with pytest.raises(EmptyDocument):
            parse_annotation('{"@context":"https://schema.org","@graph":[]}')
        with pytest.raises(EmptyDocument):
            parse_annotation('"just a string"')

    def test_keywords_never_become_properties(self):
        doc = parse_annotation(
            '{"@context":"https://schema.org","@type":"Restaurant","@id":"#r1","name":"X"}'
        )
        root = doc.roots[0]
        assert root.node_id == "#r1"
        assert set(root.properties) == {"name"}

    def test_types_normalized_to_bare_names(self):
        doc = parse_annotation(
            '{"@type":["https://schema.org/Restaurant","schema:Bakery","http://foo/Bar"]}'
        )
        assert doc.roots[0].types == ["Restaurant", "Bakery", "http://foo/Bar"]

    def test_null_and_empty_array_recorded_with_warning(self):
        doc = parse_annotation('{"@type":"Restaurant","a":null,"b":[]}')
        root = doc.roots[0]
        assert root.properties["a"] == []
        assert root.properties["b"] == []
        assert len(doc.parse_warnings) >= 2

    def test_numbers_keep_decimal_text(self):
        doc = parse_annotation('{"@type":"Offer","price":4.50,"count":3}')
        price, count = doc.roots[0].properties["price"][0], doc.roots[0].properties["count"][0]
        assert price.number == Decimal("4.50")
        assert str(price.number) == "4.50"
        assert count.number == 3

    def test_arrays_flatten_to_multiple_values(self):
        doc = parse_annotation('{"@type":"Restaurant","sameAs":["a","b",["c"]]}')
        values = doc.roots[0].properties["sameAs"]
        assert [v.text for v in values] == ["a", "b", "c"]

    def test_id_only_object_becomes_reference(self):
        doc = parse_annotation('{"@type":"Restaurant","address":{"@id":"#addr"}}')
        value = doc.roots[0].properties["address"][0]
        assert value.reference == "#addr"
        assert value.kind == "reference"

    def test_nested_objects_become_nodes(self):
        doc = parse_annotation(
            '{"@type":"Restaurant","address":{"@type":"PostalAddress","postalCode":"6100"}}'
        )
        value = doc.roots[0].properties["address"][0]
        assert value.node is not None
        assert value.node.types == ["PostalAddress"]

    def test_property_order_preserved(self):
        raw = '{"@type":"Restaurant","zeta":"1","alpha":"2","mid":"3"}'
        assert list(parse_annotation(raw).roots[0].properties) == ["zeta", "alpha", "mid"]

    def test_parse_is_deterministic(self):
        raw = '{"@type":"Restaurant","name":"X","a":[1,2],"n":{"@type":"Menu"}}'
        assert parse_annotation(raw) == parse_annotation(raw)


class TestResolveReferences:
    def test_reference_replaced_by_shared_node(self):
        raw = json.dumps(
            {
                "@context": "https://schema.org",
                "@graph": [
                    {"@type": "Restaurant", "address": {"@id": "#addr"}},
                    {"@type": "PostalAddress", "@id": "#addr", "postalCode": "6100"},
                ],
            }
        )
        resolved = resolve_references(parse_annotation(raw))
        value = resolved.roots[0].properties["address"][0]
        assert value.node is resolved.roots[1]
        assert value.node.properties["postalCode"][0].text == "6100"

    def test_two_references_share_one_target(self):
        raw = json.dumps(
            {
                "@graph": [
                    {"@type": "Restaurant", "a": {"@id": "#x"}, "b": {"@id": "#x"}},
                    {"@type": "Menu", "@id": "#x"},
                ]
            }
        )
        resolved = resolve_references(parse_annotation(raw))
        root = resolved.roots[0]
        assert root.properties["a"][0].node is root.properties["b"][0].node

    def test_unresolved_reference_kept_with_warning(self):
        doc = parse_annotation('{"@type":"Restaurant","address":{"@id":"#nowhere"}}')
        resolved = resolve_references(doc)
        assert resolved.roots[0].properties["address"][0].reference == "#nowhere"
        assert any("unresolved" in w for w in resolved.parse_warnings)

    def test_mutual_cycle_left_in_place(self):
        raw = json.dumps(
            {
                "@graph": [
                    {"@type": "Person", "@id": "#a", "knows": {"@id": "#b"}},
                    {"@type": "Person", "@id": "#b", "knows": {"@id": "#a"}},
                ]
            }
        )
        resolved = resolve_references(parse_annotation(raw))
        assert resolved.roots[0].properties["knows"][0].reference == "#b"
        assert resolved.roots[1].properties["knows"][0].reference == "#a"
        cycle_warnings = [w for w in resolved.parse_warnings if "cycle" in w]
        assert len(cycle_warnings) == 1

    def test_self_reference_left_in_place(self):
        raw = '{"@type":"Person","@id":"#me","knows":{"@id":"#me"}}'
        resolved = resolve_references(parse_annotation(raw))
        assert resolved.roots[0].properties["knows"][0].reference == "#me"

    def test_idempotent(self):
        raw = json.dumps(
            {
                "@graph": [
                    {"@type": "Restaurant", "address": {"@id": "#addr"}, "x": {"@id": "#gone"}},
                    {"@type": "PostalAddress", "@id": "#addr"},
                    {"@type": "Person", "@id": "#a", "knows": {"@id": "#b"}},
                    {"@type": "Person", "@id": "#b", "knows": {"@id": "#a"}},
                ]
            }
        )
        once = resolve_references(parse_annotation(raw))
        twice = resolve_references(once)
        assert once == twice

    def test_input_document_not_mutated(self):
        raw = json.dumps(
            {
                "@graph": [
                    {"@type": "Restaurant", "address": {"@id": "#addr"}},
                    {"@type": "PostalAddress", "@id": "#addr"},
                ]
            }
        )
        doc = parse_annotation(raw)
        snapshot = copy.deepcopy(doc)
        resolve_references(doc)
        assert doc == snapshot
