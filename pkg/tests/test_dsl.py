"""Tests for the surface syntax: parsing, diagnostics, serialization, DOT."""

import random

import pytest

from coordbridge import bisimilar, interpret_pa
from coordbridge import dsl
from coordbridge.errors import DslError
from coordbridge.generators import (
    random_arch_prime,
    random_interaction_model,
    random_polarized_ca,
    random_port_automaton,
)

from helpers import a12, c12, fig4e, gamma12, load_corpus
from coordbridge.translate import gamma_automaton, reo_a


def test_parse_empty_input_diagnostic_at_origin():
    with pytest.raises(DslError) as info:
        dsl.parse("")
    (diag,) = info.value.diagnostics
    assert diag.offset == 0
    assert diag.severity == "error"
    assert not dsl.diagnose("pa X { states s*; }")


def test_parse_unknown_kind_and_kind_mismatch():
    with pytest.raises(DslError):
        dsl.parse("widget W { }")
    with pytest.raises(DslError):
        dsl.parse("pa X { states s*; }", expected_kind="arch")


def test_parse_validation_gamma_outside_interface():
    text = """
    arch Broken {
      interface p;
      gamma {}, {p, zz};
    }
    """
    with pytest.raises(DslError) as info:
        dsl.parse(text)
    assert "zz" in info.value.diagnostics[0].message


def test_parse_syntax_error_has_position():
    text = "pa X {\n  states s*;\n  s -{a}-> ;\n}"
    with pytest.raises(DslError) as info:
        dsl.parse(text)
    (diag,) = info.value.diagnostics
    assert diag.line == 3


def test_corpus_matches_programmatic_models():
    assert load_corpus("fig1_c12").model == c12()
    assert load_corpus("a12").model == a12()
    assert load_corpus("fig4e_reo_a12").model == fig4e()
    doc = load_corpus("fig4d_gamma12")
    expected = gamma_automaton(gamma12(), doc.model.nodes)
    assert {n for _, n, _ in doc.model.transitions} == {
        n for _, n, _ in expected.transitions
    }


def test_corpus_mutex_translation_against_fixture():
    arch = load_corpus("a12").model
    produced = reo_a(arch)
    target = load_corpus("fig4e_reo_a12").model
    assert bisimilar(interpret_pa(produced), interpret_pa(target)) is not None


def test_round_trip_random_models():
    rng = random.Random(77)
    for _ in range(25):
        pa = random_port_automaton(rng)
        doc = dsl.document_of(pa, name="R")
        assert dsl.parse(dsl.serialize(doc)) == doc
    for _ in range(25):
        arch = random_arch_prime(rng)
        doc = dsl.document_of(arch)
        assert dsl.parse(dsl.serialize(doc)) == doc
    for _ in range(15):
        pca = random_polarized_ca(rng)
        doc = dsl.document_of(pca)
        assert dsl.parse(dsl.serialize(doc)) == doc
    for _ in range(15):
        im = random_interaction_model(rng)
        doc = dsl.document_of(im)
        assert dsl.parse(dsl.serialize(doc)) == doc


def test_serialize_deterministic_for_equal_models():
    text1 = dsl.serialize(a12(), kind="arch", name="A12")
    shuffled = load_corpus("a12").model
    text2 = dsl.serialize(shuffled, kind="arch", name="A12")
    assert text1 == text2
    assert dsl.serialize(a12(), kind="arch", name="A12") == text1


def test_fn_form_and_table_form_agree():
    fn_form = """
    im M {
      domain D = {0, 1};
      conn w <- {p} | guard: true up: w := id(p) down: p := w;
    }
    """
    doc = dsl.parse(fn_form)
    table_form = dsl.serialize(doc)
    assert "table" in table_form
    assert dsl.parse(table_form).model == doc.model


def test_export_dot_shapes():
    dot = dsl.export_dot(fig4e())
    assert dot.count("[shape=") == 2
    assert dot.count(" -> ") == 6
    assert '"free" [shape=doublecircle]' in dot

    single = load_corpus("table1_primitives").model
    dot2 = dsl.export_dot(single)
    assert dot2.count("[shape=") == 1
    assert "true" in dot2  # guards printed on edges


def test_export_dot_interprets_architectures():
    dot = dsl.export_dot(a12())
    assert "qD" in dot
    assert "b12" not in dot  # coordinator ports hidden in the interpretation
