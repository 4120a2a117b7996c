from __future__ import annotations

import json
import random

import pytest

from dsforge import DuplicateTerm, MalformedVocabulary, UnknownTerm, load_vocabulary
from dsforge.vocabulary import normalize_term

from oracles import applicable_properties, dfs_is_subclass, entry_kinds, superclass_edges


def make_doc(entries):
    return {"@context": {"schema": "https://schema.org/"}, "@graph": entries}


def clazz(name, supers=(), datatype=False):
    entry = {
        "@id": f"schema:{name}",
        "@type": ["rdfs:Class", "schema:DataType"] if datatype else "rdfs:Class",
        "rdfs:label": name,
    }
    if supers:
        entry["rdfs:subClassOf"] = [{"@id": f"schema:{s}"} for s in supers]
    return entry


def prop(name, domains, ranges):
    return {
        "@id": f"schema:{name}",
        "@type": "rdf:Property",
        "rdfs:label": name,
        "schema:domainIncludes": [{"@id": f"schema:{d}"} for d in domains],
        "schema:rangeIncludes": [{"@id": f"schema:{r}"} for r in ranges],
    }


class TestNormalizeTerm:
    def test_prefixed_forms_reduce_to_bare_name(self):
        assert normalize_term("https://schema.org/Restaurant") == "Restaurant"
        assert normalize_term("http://schema.org/servesCuisine") == "servesCuisine"
        assert normalize_term("schema:Text") == "Text"
        assert normalize_term("Restaurant") == "Restaurant"

    def test_foreign_and_invalid_names_rejected(self):
        assert normalize_term("http://example.org/ns#Thing") is None
        assert normalize_term("dcterms:title") is None
        assert normalize_term("") is None
        assert normalize_term("has space") is None
        assert normalize_term("a/b") is None
        assert normalize_term(42) is None


class TestLoadVocabulary:
    def test_minimal_document(self):
        doc = make_doc([clazz("A"), clazz("B", ["A"]), prop("p", ["A"], ["Text"])])
        graph = load_vocabulary(doc)
        assert len(graph.classes) == 2
        assert len(graph.properties) == 1
        assert graph.load_warnings == ()
        assert graph.is_subclass_of("B", "A")

    def test_counts_match_one_pass_oracle(self, vocab_doc, graph):
        classes, properties, _ = entry_kinds(vocab_doc)
        assert len(graph.classes) == len(classes)
        assert len(graph.properties) == len(properties)
        assert set(graph.classes) == classes
        assert set(graph.properties) == properties

    def test_cycle_tolerated_with_one_warning(self):
        doc = make_doc([clazz("A", ["B"]), clazz("B", ["A"])])
        graph = load_vocabulary(doc)
        cycle_warnings = [w for w in graph.load_warnings if w.code == "subclass_cycle"]
        assert len(cycle_warnings) == 1
        assert graph.is_subclass_of("A", "B")
        assert graph.is_subclass_of("B", "A")

    def test_dangling_superclass_warned_and_ignored(self):
        doc = make_doc([clazz("A", ["Ghost"])])
        graph = load_vocabulary(doc)
        assert [w.code for w in graph.load_warnings] == ["dangling_superclass"]
        assert not graph.is_subclass_of("A", "Ghost")
        assert graph.classes["A"].superclasses == frozenset()

    def test_empty_domain_and_range_flagged(self):
        entry = {"@id": "schema:p", "@type": "rdf:Property", "rdfs:label": "p"}
        graph = load_vocabulary(make_doc([entry]))
        assert sorted(w.code for w in graph.load_warnings) == ["empty_domain", "empty_range"]

    def test_duplicate_term_rejected(self):
        with pytest.raises(DuplicateTerm):
            load_vocabulary(make_doc([clazz("A"), clazz("A")]))

    def test_malformed_documents_rejected(self):
        with pytest.raises(MalformedVocabulary):
            load_vocabulary({"terms": []})
        with pytest.raises(MalformedVocabulary):
            load_vocabulary(make_doc([{"@type": "rdfs:Class"}]))

    def test_enumeration_members_are_skipped(self, graph):
        assert "Monday" not in graph.classes
        assert "Monday" not in graph.properties
        assert "DayOfWeek" in graph.classes

    def test_datatype_flags_follow_declared_subtypes(self, graph):
        assert graph.classes["Text"].is_datatype
        assert graph.classes["URL"].is_datatype
        assert graph.classes["Integer"].is_datatype
        assert graph.classes["Float"].is_datatype
        assert not graph.classes["Thing"].is_datatype
        assert not graph.classes["Menu"].is_datatype

    def test_loading_twice_yields_identical_graphs(self, vocab_doc):
        first = load_vocabulary(vocab_doc)
        second = load_vocabulary(vocab_doc)
        assert first.classes == second.classes
        assert first.properties == second.properties
        assert first.load_warnings == second.load_warnings
        assert all(
            first.ancestors_of(term) == second.ancestors_of(term)
            for term in first.classes
        )


class TestIsSubclassOf:
    def test_restaurant_under_food_establishment(self, graph, vocab_doc):
        edges = superclass_edges(vocab_doc)
        assert graph.is_subclass_of("Restaurant", "FoodEstablishment")
        assert dfs_is_subclass(edges, "Restaurant", "FoodEstablishment")

    def test_not_symmetric(self, graph, vocab_doc):
        assert not graph.is_subclass_of("FoodEstablishment", "Restaurant")
        assert not dfs_is_subclass(superclass_edges(vocab_doc), "FoodEstablishment", "Restaurant")

    def test_reflexive_for_any_term(self, graph):
        assert graph.is_subclass_of("Restaurant", "Restaurant")
        assert graph.is_subclass_of("NoSuchTerm", "NoSuchTerm")

    def test_unknown_terms_otherwise_false(self, graph):
        assert not graph.is_subclass_of("NoSuchTerm", "Thing")
        assert not graph.is_subclass_of("Thing", "NoSuchTerm")

    def test_agrees_with_dfs_oracle_on_sample(self, graph, vocab_doc):
        edges = superclass_edges(vocab_doc)
        rng = random.Random(98173)
        sample = rng.sample(sorted(graph.classes), 50)
        for sub in sample:
            for sup in sample:
                assert graph.is_subclass_of(sub, sup) == dfs_is_subclass(edges, sub, sup), (
                    sub, sup,
                )

    def test_reflexive_and_transitive_over_samples(self, graph):
        rng = random.Random(5521)
        terms = sorted(graph.classes)
        for term in terms:
            assert graph.is_subclass_of(term, term)
        for _ in range(500):
            a, b, c = rng.choice(terms), rng.choice(terms), rng.choice(terms)
            if graph.is_subclass_of(a, b) and graph.is_subclass_of(b, c):
                assert graph.is_subclass_of(a, c)


class TestPropertiesForType:
    def test_release_restaurant_includes_core_properties(self, graph, vocab_doc):
        found = [p.id for p in graph.properties_for_type("Restaurant")]
        assert "servesCuisine" in found
        assert "name" in found
        assert found == applicable_properties(vocab_doc, "Restaurant")

    def test_minimal_graph_single_property(self):
        graph = load_vocabulary(make_doc([clazz("A"), prop("p", ["A"], ["A"])]))
        assert [p.id for p in graph.properties_for_type("A")] == ["p"]

    def test_class_without_properties(self):
        graph = load_vocabulary(
            make_doc([clazz("A"), clazz("B"), prop("p", ["B"], ["B"])])
        )
        assert graph.properties_for_type("A") == []

    def test_sorted_unique_and_repeatable(self, graph):
        first = graph.properties_for_type("Hotel")
        second = graph.properties_for_type("Hotel")
        ids = [p.id for p in first]
        assert ids == sorted(ids)
        assert len(ids) == len(set(ids))
        assert first == second

    def test_unknown_type_raises(self, graph):
        with pytest.raises(UnknownTerm):
            graph.properties_for_type("Restaurnat")
        with pytest.raises(UnknownTerm):
            graph.properties_for_type("servesCuisine")


class TestRangeAccepts:
    def test_release_examples(self, graph):
        assert graph.range_accepts("servesCuisine", "Text")
        assert graph.range_accepts("image", "ImageObject")
        assert not graph.range_accepts("acceptsReservations", "Reservation")

    def test_reflexive_range_term(self):
        graph = load_vocabulary(make_doc([clazz("A"), clazz("R"), prop("p", ["A"], ["R"])]))
        assert graph.range_accepts("p", "R")

    def test_unrelated_candidate(self):
        graph = load_vocabulary(
            make_doc([clazz("A"), clazz("R"), clazz("S"), prop("p", ["A"], ["R"])])
        )
        assert not graph.range_accepts("p", "S")

    def test_subclass_candidate_accepted(self, graph):
        # URL is a declared subtype of Text in the release format.
        assert graph.range_accepts("servesCuisine", "URL")

    def test_unknown_property_raises(self, graph):
        with pytest.raises(UnknownTerm):
            graph.range_accepts("notAProperty", "Text")
