"""Tests for BIP components, architectures, application and composition."""

import itertools
import random

import pytest

from coordbridge import (
    BipArchitecture,
    BipComponent,
    GammaSet,
    arch_apply,
    arch_compose,
    bisimilar,
    component_to_lts,
    dummy_component,
    interpret_arch,
)
from coordbridge.errors import (
    CoordinatorPortsOverlap,
    DomainTooLarge,
    InterfaceNotCovered,
    NotDisconnected,
)
from coordbridge.generators import random_arch_prime

from helpers import a12, c12, gamma12, fig4e, oracle_gamma_compose, worker
from coordbridge import interpret_pa


def test_arch_apply_mutual_exclusion():
    system = arch_apply(a12(), [worker(1), worker(2)])
    # constituent order: coordinator, then the two workers
    assert system.initial == "(free,sleep,sleep)"
    both_working = [q for q in system.states if q.count("work") == 2]
    assert both_working == []
    # lock state tracks the workers
    assert "(taken,work,sleep)" in system.states
    assert "(taken,sleep,work)" in system.states


def test_arch_apply_full_product_keeps_unreachable_states():
    system = arch_apply(a12(), [worker(1), worker(2)], full=True)
    assert "(free,work,work)" in system.states
    lts = component_to_lts(system)
    from coordbridge import check_unreachable

    result = check_unreachable(lts, lambda q: q.count("work") == 2)
    assert result.holds


def test_arch_apply_unconstrained_is_component_behaviour():
    # the empty interaction is allowed, so observable idling appears at
    # every state; a component that already idles is reproduced exactly
    b1 = worker(1)
    idling = BipComponent(
        b1.states, b1.initial, b1.ports,
        b1.transitions | frozenset((q, frozenset(), q) for q in b1.states),
        name=b1.name,
    )
    free_for_all = BipArchitecture(
        coordinators=(),
        interface=b1.ports,
        gamma=GammaSet(frozenset(n) for n in _powerset(sorted(b1.ports))),
    )
    applied = arch_apply(free_for_all, [idling])
    assert bisimilar(component_to_lts(applied), component_to_lts(idling)) is not None
    # a component without idling gains exactly the empty self-loops
    plain = arch_apply(free_for_all, [b1])
    nonempty = {(q, n, t) for q, n, t in plain.transitions if n}
    assert nonempty == {(f"({q})", n, f"({t})") for q, n, t in b1.transitions}
    empties = {(q, n, t) for q, n, t in plain.transitions if not n}
    assert empties == {(f"({q})", frozenset(), f"({q})") for q in b1.states}


def _powerset(items):
    out = []
    for r in range(len(items) + 1):
        out.extend(itertools.combinations(items, r))
    return out


def test_arch_apply_rule_discipline():
    # every empty-labeled step either keeps all constituents in place or
    # changes exactly one of them
    idle_coord = BipComponent(
        states=frozenset({"x0", "x1"}),
        initial="x0",
        ports=frozenset({"t"}),
        transitions=frozenset({("x0", frozenset(), "x0"), ("x0", frozenset({"t"}), "x1")}),
        name="Idler",
    )
    arch = BipArchitecture(
        coordinators=(idle_coord,),
        interface=frozenset({"t", "u"}),
        gamma=GammaSet([frozenset(), frozenset({"t", "u"})]),
    )
    mover = BipComponent(
        states=frozenset({"m0", "m1"}),
        initial="m0",
        ports=frozenset({"u"}),
        transitions=frozenset({("m0", frozenset({"u"}), "m1"), ("m0", frozenset(), "m0")}),
        name="Mover",
    )
    system = arch_apply(arch, [mover])
    for src, label, dst in system.transitions:
        if label:
            continue
        before = src.strip("()").split(",")
        after = dst.strip("()").split(",")
        changed = sum(1 for x, y in zip(before, after) if x != y)
        assert changed <= 1


def test_arch_apply_validation():
    shared = BipComponent(
        states=frozenset({"s"}), initial="s", ports=frozenset({"b12"}),
        transitions=frozenset(), name="Clash",
    )
    with pytest.raises(NotDisconnected):
        arch_apply(a12(), [shared])
    with pytest.raises(InterfaceNotCovered):
        arch_apply(a12(), [worker(1)])  # b2, f2 uncovered


def test_arch_compose_neutral_element():
    neutral = BipArchitecture((), frozenset(), GammaSet([frozenset()]))
    left = a12()
    combined = arch_compose(left, neutral)
    assert combined.gamma.materialize() == gamma12()
    assert combined.interface == left.interface


def test_arch_compose_disjoint_interfaces():
    a = BipArchitecture((), frozenset({"a"}), GammaSet([frozenset(), frozenset({"a"})]))
    b = BipArchitecture((), frozenset({"b"}), GammaSet([frozenset(), frozenset({"b"})]))
    combined = arch_compose(a, b)
    expected = oracle_gamma_compose(
        a.gamma.materialize(), b.gamma.materialize(), {"a"}, {"b"}
    )
    assert combined.gamma.materialize() == expected
    assert expected == {
        frozenset(), frozenset({"a"}), frozenset({"b"}), frozenset({"a", "b"})
    }


def test_arch_compose_matches_filtration_oracle():
    rng = random.Random(17)
    for _ in range(30):
        a1 = random_arch_prime(rng, prefix="l", max_dangling=2, max_ports_per_coordinator=2)
        a2 = random_arch_prime(rng, prefix="r", max_dangling=2, max_ports_per_coordinator=2)
        combined = arch_compose(a1, a2)
        expected = oracle_gamma_compose(
            a1.gamma.materialize(), a2.gamma.materialize(), a1.interface, a2.interface
        )
        assert combined.gamma.materialize() == expected
        # refiltration: every member satisfies the defining predicate
        for n in combined.gamma.materialize():
            assert n & a1.interface in a1.gamma.materialize()
            assert n & a2.interface in a2.gamma.materialize()


def test_arch_compose_coordinator_overlap_rejected():
    left = a12()
    clash = BipArchitecture(
        coordinators=(c12(),),
        interface=frozenset({"b12", "f12"}),
        gamma=GammaSet([frozenset()]),
    )
    with pytest.raises(CoordinatorPortsOverlap):
        arch_compose(left, clash)


def test_arch_compose_commutative_associative():
    rng = random.Random(23)
    for _ in range(10):
        archs = [
            random_arch_prime(rng, prefix=p, max_dangling=2, max_ports_per_coordinator=2)
            for p in ("x", "y", "z")
        ]
        ab = arch_compose(archs[0], archs[1])
        ba = arch_compose(archs[1], archs[0])
        assert ab.gamma.materialize() == ba.gamma.materialize()
        assert set(ab.coordinators) == set(ba.coordinators)
        left = arch_compose(arch_compose(archs[0], archs[1]), archs[2])
        right = arch_compose(archs[0], arch_compose(archs[1], archs[2]))
        assert left.gamma.materialize() == right.gamma.materialize()
        assert left.interface == right.interface


def test_dummy_component_sizes():
    no_dangling = BipArchitecture(
        coordinators=(c12(),),
        interface=frozenset({"b12", "f12"}),
        gamma=GammaSet([frozenset()]),
    )
    assert not dummy_component(no_dangling).transitions

    one = BipArchitecture((), frozenset({"x"}), GammaSet([frozenset()]))
    d = dummy_component(one)
    assert {n for _, n, _ in d.transitions} == {frozenset({"x"})}

    d12 = dummy_component(a12())
    assert d12.ports == frozenset({"b1", "b2", "f1", "f2"})
    assert len(d12.transitions) == 2 ** 4 - 1

    wide = BipArchitecture((), frozenset(f"p{i}" for i in range(20)), GammaSet([frozenset()]))
    with pytest.raises(DomainTooLarge):
        dummy_component(wide)


def test_interpret_arch_no_coordinators():
    arch = BipArchitecture((), frozenset({"a"}), GammaSet([frozenset(), frozenset({"a"})]))
    lts = interpret_arch(arch)
    assert len(lts.states) == 1
    assert lts.labels() == {frozenset(), frozenset({"a"})}


def test_interpret_arch_mutex_is_translated_automaton():
    lts = interpret_arch(a12())
    target = interpret_pa(fig4e())
    w = bisimilar(lts, target)
    assert w is not None


def test_interpret_arch_hides_coordinator_ports():
    lts = interpret_arch(a12())
    coord_ports = {"b12", "f12"}
    for _, label, _ in lts.transitions:
        assert not label & coord_ports


def test_gamma_set_intensional():
    gamma = GammaSet.paired_powerset({"a", "b"}, lambda p: p + "'")
    assert frozenset() in gamma
    assert frozenset({"a", "a'"}) in gamma
    assert frozenset({"a", "b'"}) not in gamma
    assert frozenset({"a"}) not in gamma
    members = gamma.materialize()
    assert len(members) == 4
    explicit = GammaSet(members)
    assert gamma == explicit
