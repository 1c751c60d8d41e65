"""Tests for port automata, constraint automata and their operators."""

import itertools
import random

import pytest

from coordbridge import (
    Assignment,
    ConstraintAutomaton,
    FiniteDataDomain,
    PortAutomaton,
    SINGLETON_DOMAIN,
    TOP,
    VOID,
    bisimilar,
    ca_hide,
    ca_product,
    ca_to_pa,
    dc_equivalent,
    fifo1,
    interpret_ca,
    interpret_pa,
    is_port_automaton,
    is_stateless,
    lossy_sync,
    merge_replicate_node,
    pa_hide,
    pa_isomorphic,
    pa_product,
    pa_reachable_part,
    polarize,
    primitive,
    sync,
)
from coordbridge.constraints import EqConst, EqPort, free_ports
from coordbridge.errors import ArityError, DomainMismatch, MixedNodesPresent, NotStateless
from coordbridge.generators import random_guard, random_port_automaton
from coordbridge.reo import flatten_state_name, pa_flatten_states
from coordbridge.translate import gamma_automaton

from helpers import alternator, fig4a, fig4c, fig4e, gamma12, oracle_pa_product

D2 = FiniteDataDomain("D", (0, 1))


def stateless_pa(nodes, loops, name=""):
    return PortAutomaton(
        states=frozenset({"q"}),
        initial="q",
        nodes=frozenset(nodes),
        transitions=frozenset(("q", frozenset(n), "q") for n in loops),
        name=name,
    )


# ---------------------------------------------------------------------------
# primitives

def test_primitive_sync():
    a = sync("A", "B")
    assert a.states == frozenset({"q"})
    assert a.transitions == frozenset({("q", frozenset({"A", "B"}), TOP, "q")})
    assert is_stateless(a)


def test_primitive_fifo1():
    a = fifo1("A", "B")
    assert not is_stateless(a)
    assert ("q0", frozenset({"A"}), TOP, "q1") in a.transitions
    assert ("q1", frozenset({"B"}), TOP, "q0") in a.transitions


def test_primitive_node():
    a = merge_replicate_node(["B", "B'"], ["A", "A'"])
    labels = {n for _, n, _, _ in a.transitions}
    assert labels == {frozenset({"B", "A", "A'"}), frozenset({"B'", "A", "A'"})}


def test_primitive_dispatch_and_arity():
    assert primitive("Sync", "A", "B") == sync("A", "B")
    assert primitive("fifo1", "A", "B") == fifo1("A", "B")
    with pytest.raises(ArityError):
        primitive("sync", "A")
    with pytest.raises(ArityError):
        primitive("bogus", "A", "B")
    with pytest.raises(ArityError):
        merge_replicate_node([], ["A"])


def test_port_automaton_predicates():
    assert is_port_automaton(sync("A", "B"))
    assert is_port_automaton(fig4a())
    bigger = ConstraintAutomaton(
        frozenset({"q"}), "q", frozenset({"A"}), D2,
        frozenset({("q", frozenset({"A"}), TOP, "q")}),
    )
    assert not is_port_automaton(bigger)


# ---------------------------------------------------------------------------
# product

def test_ca_product_two_syncs_share_node():
    left = sync("A", "B")
    right = sync("B", "C")
    prod = ca_product(left, right)
    labels = {n for _, n, _, _ in prod.transitions}
    # both transitions mention the shared node, so neither fires alone
    assert labels == {frozenset({"A", "B", "C"})}


def test_product_neutral_element():
    unit = ConstraintAutomaton(frozenset({"u"}), "u", frozenset(), SINGLETON_DOMAIN, frozenset())
    a = fifo1("A", "B")
    prod = ca_product(a, unit)
    assert len(prod.states) == len(a.states)
    assert {(n, g) for _, n, g, _ in prod.transitions} == {(n, g) for _, n, g, _ in a.transitions}


def test_product_domain_mismatch():
    with pytest.raises(DomainMismatch):
        ca_product(sync("A", "B"), sync("B", "C", D2))


def test_pa_product_matches_rule_oracle():
    rng = random.Random(21)
    for _ in range(60):
        a1 = random_port_automaton(rng, max_states=3, max_ports=3, port_prefix="p")
        a2 = random_port_automaton(rng, max_states=3, max_ports=3,
                                   port_prefix="p" if rng.random() < 0.5 else "r")
        assert pa_product(a1, a2) == oracle_pa_product(a1, a2)


def test_pa_product_of_gamma_automata_is_composed_model():
    g1 = {frozenset(), frozenset({"a"})}
    g2 = {frozenset(), frozenset({"b"})}
    prod = pa_product(gamma_automaton(g1, {"a"}), gamma_automaton(g2, {"b"}))
    labels = {n for _, n, _ in prod.transitions}
    assert labels == {frozenset(), frozenset({"a"}), frozenset({"b"}), frozenset({"a", "b"})}


def test_pa_product_with_renamed_self():
    a = alternator(1)
    b = alternator(2)
    prod = pa_product(a, b)
    labels = {n for _, n, _ in prod.transitions}
    # disjoint interfaces: interleaving plus joint labels
    assert frozenset({"b1"}) in labels and frozenset({"b2"}) in labels
    assert frozenset({"b1", "b2"}) in labels
    assert prod == oracle_pa_product(a, b)


def test_foolproof_mutex_product():
    prod = pa_product(pa_product(fig4a(), alternator(1)), alternator(2))
    reachable = pa_reachable_part(prod)
    assert len(reachable.states) == 3
    assert pa_isomorphic(pa_flatten_states(reachable), fig4c())


# ---------------------------------------------------------------------------
# hiding

def test_hide_nothing_is_identity():
    a = sync("A", "B")
    assert ca_hide(a, frozenset()) == a


def test_hide_all_nodes_of_sync():
    hidden = ca_hide(sync("A", "B"), {"A", "B"})
    assert hidden.nodes == frozenset()
    ((_, n, g, _),) = hidden.transitions
    assert n == frozenset()
    assert dc_equivalent(g, TOP, set(), SINGLETON_DOMAIN)


def test_hide_preserves_structure_counts():
    rng = random.Random(2)
    for _ in range(30):
        base = random_port_automaton(rng, max_states=3, max_ports=3)
        a = ConstraintAutomaton(
            base.states, base.initial, base.nodes, D2,
            frozenset(
                (q, n, random_guard(rng, sorted(n), D2), t) for q, n, t in base.transitions
            ),
        )
        hidden = ca_hide(a, set(itertools.islice(sorted(a.nodes), 2)))
        assert hidden.states == a.states
        assert len(hidden.transitions) == len(a.transitions)


def test_hiding_nonshared_distributes_over_product():
    rng = random.Random(8)
    for _ in range(40):
        a1 = random_port_automaton(rng, max_states=3, max_ports=3, port_prefix="s")
        a2 = random_port_automaton(rng, max_states=3, max_ports=3, port_prefix="t")
        private = sorted(a1.nodes - a2.nodes)
        if not private:
            continue
        p = {private[0]}
        left = interpret_pa(pa_hide(pa_product(a1, a2), p))
        right = interpret_pa(pa_product(pa_hide(a1, p), a2))
        assert bisimilar(left, right) is not None


def test_product_commutative_associative_up_to_renaming():
    rng = random.Random(31)
    for _ in range(20):
        a = random_port_automaton(rng, max_states=2, max_ports=2, port_prefix="a")
        b = random_port_automaton(rng, max_states=2, max_ports=2, port_prefix="b")
        c = random_port_automaton(rng, max_states=2, max_ports=2, port_prefix="a")
        ab = interpret_pa(pa_flatten_states(pa_product(a, b)))
        ba = interpret_pa(pa_flatten_states(pa_product(b, a)))
        assert bisimilar(ab, ba) is not None
        left = interpret_pa(pa_flatten_states(pa_product(pa_product(a, b), c)))
        right = interpret_pa(pa_flatten_states(pa_product(a, pa_product(b, c))))
        assert bisimilar(left, right) is not None


# ---------------------------------------------------------------------------
# interpretations

def test_interpret_pa_is_identity_on_structure():
    a = fig4a()
    lts = interpret_pa(a)
    assert lts.states == a.states
    assert lts.initial == a.initial
    assert lts.transitions == a.transitions
    assert {lab for _, lab, _ in lts.transitions} == {
        frozenset({"b1"}), frozenset({"b2"}), frozenset({"f1"}), frozenset({"f2"})
    }
    empty = PortAutomaton(frozenset({"q"}), "q", frozenset(), frozenset())
    lts2 = interpret_pa(empty)
    assert len(lts2.states) == 1 and not lts2.transitions


def test_interpret_pa_injective_on_transitions():
    a1 = fig4a()
    a2 = PortAutomaton(a1.states, a1.initial, a1.nodes,
                       frozenset(t for t in a1.transitions if t[1] != frozenset({"b2"})))
    assert interpret_pa(a1).transitions != interpret_pa(a2).transitions
    assert interpret_pa(a1).transitions == interpret_pa(fig4a()).transitions


def test_interpret_ca_stateless_checks():
    # a polarized view of a two-state automaton is rejected outright
    with pytest.raises(NotStateless):
        polarize(fifo1("a*", "b_*", D2))


def test_interpret_ca_mixed_nodes_rejected():
    auto = ConstraintAutomaton(
        frozenset({"q"}), "q", frozenset({"a*", "m", "b_*"}), D2,
        frozenset({("q", frozenset({"a*", "m"}), TOP, "q")}),
    )
    with pytest.raises(MixedNodesPresent):
        interpret_ca(polarize(auto))


def test_interpret_ca_transitionless_and_sync():
    empty = polarize(ConstraintAutomaton(frozenset({"q"}), "q", frozenset(), D2, frozenset()))
    lts = interpret_ca(empty)
    assert len(lts.states) == 1 and not lts.transitions
    assert lts.alphabet.ports == frozenset()

    wire = ConstraintAutomaton(
        frozenset({"q"}), "q", frozenset({"a*", "a_*"}), D2,
        frozenset({("q", frozenset({"a*", "a_*"}), EqPort("a*", "a_*"), "q")}),
    )
    flows = interpret_ca(polarize(wire)).labels()
    assert flows == frozenset(
        {Assignment.of({"a*": 0, "a_*": 0}), Assignment.of({"a*": 1, "a_*": 1})}
    )


def test_ca_to_pa_drops_tautological_guards():
    a = ca_to_pa(sync("A", "B"))
    assert a.transitions == frozenset({("q", frozenset({"A", "B"}), "q")})
    dead = ConstraintAutomaton(
        frozenset({"q"}), "q", frozenset({"A"}), SINGLETON_DOMAIN,
        frozenset({("q", frozenset({"A"}), EqConst("A", 7), "q")}),
    )
    assert not ca_to_pa(dead).transitions


def test_flatten_state_name():
    assert flatten_state_name("((0,0),0)") == "(0,0,0)"
    assert flatten_state_name("(a,b)") == "(a,b)"
    assert flatten_state_name("plain") == "plain"
    assert flatten_state_name(flatten_state_name("((a,b),(c,d))")) == "(a,b,c,d)"
