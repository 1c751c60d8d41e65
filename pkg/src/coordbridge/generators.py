"""Seeded random model generators for property suites.

Every generator takes a ``random.Random`` so suites are reproducible from
a seed.  The default parameters keep instances at desk scale; the
well-formed generators respect the side conditions of the composition
theorems by construction, and the adversarial variants deliberately break
them so class checks can be exercised.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable

from . import constraints as dc
from .bip import BipArchitecture, BipComponent, GammaSet
from .interactions import InteractionModel, SimpleConnector
from .lts import LabeledTransitionSystem, PortSetAlphabet
from .reo import ConstraintAutomaton, PolarizedCA, PortAutomaton, polarize, sink_node, source_node
from .values import FiniteDataDomain


def _port_names(prefix: str, count: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(count)]


def random_subset(rng: random.Random, pool: Iterable) -> frozenset:
    items = sorted(pool)
    return frozenset(x for x in items if rng.random() < 0.5)


def random_port_automaton(
    rng: random.Random,
    max_states: int = 4,
    max_ports: int = 4,
    port_prefix: str = "p",
    density: float = 0.35,
    pa_prime: bool = False,
) -> PortAutomaton:
    n_states = rng.randint(1, max_states)
    n_ports = rng.randint(1, max_ports)
    states = [f"s{i}" for i in range(n_states)]
    ports = _port_names(port_prefix, n_ports)
    transitions = set()
    for src in states:
        for dst in states:
            if rng.random() < density:
                label = random_subset(rng, ports)
                if not label and not pa_prime:
                    transitions.add((src, label, dst))
                elif label:
                    transitions.add((src, label, dst))
    if pa_prime:
        for q in states:
            transitions.add((q, frozenset(), q))
    return PortAutomaton(
        states=frozenset(states),
        initial="s0",
        nodes=frozenset(ports),
        transitions=frozenset(transitions),
        name=f"rand_pa_{port_prefix}",
    )


def random_pa_prime(rng: random.Random, max_states: int = 4, max_ports: int = 4,
                    port_prefix: str = "p") -> PortAutomaton:
    return random_port_automaton(rng, max_states, max_ports, port_prefix, pa_prime=True)


def random_component(
    rng: random.Random,
    ports: list[str],
    max_states: int = 4,
    density: float = 0.4,
    allow_empty_moves: bool = False,
) -> BipComponent:
    n_states = rng.randint(1, max_states)
    states = [f"c{i}" for i in range(n_states)]
    transitions = set()
    for src in states:
        for dst in states:
            if rng.random() < density:
                label = random_subset(rng, ports)
                if not label:
                    if allow_empty_moves or src == dst:
                        transitions.add((src, label, dst))
                else:
                    transitions.add((src, label, dst))
    return BipComponent(
        states=frozenset(states),
        initial="c0",
        ports=frozenset(ports),
        transitions=frozenset(transitions),
        name=f"C_{ports[0]}" if ports else "C",
    )


def random_arch_prime(
    rng: random.Random,
    prefix: str = "a",
    max_coordinators: int = 2,
    max_ports_per_coordinator: int = 4,
    max_dangling: int = 3,
    max_interactions: int = 8,
) -> BipArchitecture:
    """Architecture whose coordinators never change state on empty labels.

    The interaction model always contains the empty interaction, so the
    result satisfies the side conditions of the composition results.
    """
    n_coord = rng.randint(0, max_coordinators)
    coordinators = []
    used = 0
    for i in range(n_coord):
        n_ports = rng.randint(1, max_ports_per_coordinator)
        ports = _port_names(f"{prefix}c{i}_", n_ports)
        coordinators.append(random_component(rng, ports, allow_empty_moves=False))
        used += n_ports
    dangling = _port_names(f"{prefix}d", rng.randint(1, max_dangling))
    interface = sorted(set(itertools.chain(dangling, *(c.ports for c in coordinators))))
    interactions = {frozenset()}
    for _ in range(rng.randint(1, max_interactions)):
        n = random_subset(rng, interface)
        if n:
            interactions.add(n)
    return BipArchitecture(
        coordinators=tuple(coordinators),
        interface=frozenset(interface),
        gamma=GammaSet(interactions),
        name=f"rand_arch_{prefix}",
    )


def random_adversarial_arch(rng: random.Random, prefix: str = "x") -> BipArchitecture:
    """Architecture with a coordinator that changes state on an empty label."""
    arch = random_arch_prime(rng, prefix=prefix, max_coordinators=2)
    ports = _port_names(f"{prefix}bad_", 2)
    bad = BipComponent(
        states=frozenset({"u0", "u1"}),
        initial="u0",
        ports=frozenset(ports),
        transitions=frozenset(
            {("u0", frozenset(), "u1"), ("u0", frozenset(ports), "u1"),
             ("u1", frozenset({ports[0]}), "u0")}
        ),
        name="C_bad",
    )
    return BipArchitecture(
        coordinators=arch.coordinators + (bad,),
        interface=arch.interface | bad.ports,
        gamma=GammaSet(set(arch.gamma.materialize()) | {frozenset(ports)}),
        name=arch.name,
    )


def random_composable_pair(
    rng: random.Random,
) -> tuple[BipArchitecture, BipArchitecture]:
    """Pair meeting the composition side conditions by construction.

    Coordinator port sets are disjoint and neither architecture's
    coordinators own ports of the other's interface; interfaces may share
    dangling ports.
    """
    a1 = random_arch_prime(rng, prefix="l")
    a2 = random_arch_prime(rng, prefix="r")
    if rng.random() < 0.5:
        # share a dangling port to exercise interface overlap
        shared = sorted(a1.dangling_ports)[0]
        interface2 = a2.interface | {shared}
        interactions = set(a2.gamma.materialize())
        ordered = sorted(interactions, key=lambda n: (len(n), tuple(sorted(n))))
        extra = {n | {shared} for n in ordered[:3] if n}
        return a1, BipArchitecture(
            coordinators=a2.coordinators,
            interface=frozenset(interface2),
            gamma=GammaSet(interactions | extra),
            name=a2.name,
        )
    return a1, a2


def random_violating_pair(rng: random.Random) -> tuple[BipArchitecture, BipArchitecture, str]:
    """Pair violating the side conditions: a coordinator port of the first
    architecture appears in the second interface.  Returns the shared port."""
    a1 = random_arch_prime(rng, prefix="l", max_coordinators=2)
    while not a1.coordinators:
        a1 = random_arch_prime(rng, prefix="l", max_coordinators=2)
    shared = sorted(a1.coordinators[0].ports)[0]
    a2 = random_arch_prime(rng, prefix="r")
    interactions = set(a2.gamma.materialize())
    interactions.add(frozenset({shared}))
    a2 = BipArchitecture(
        coordinators=a2.coordinators,
        interface=a2.interface | {shared},
        gamma=GammaSet(interactions),
        name=a2.name,
    )
    return a1, a2, shared


def random_guard(
    rng: random.Random, nodes: list[str], dom: FiniteDataDomain, depth: int = 2
) -> dc.DataConstraint:
    """Random constraint AST whose free ports stay within ``nodes``."""
    choice = rng.random()
    if depth <= 0 or choice < 0.25 or not nodes:
        if not nodes or rng.random() < 0.3:
            return dc.TOP
        return dc.EqConst(rng.choice(nodes), rng.choice(dom.values))
    if choice < 0.4:
        return dc.Not(random_guard(rng, nodes, dom, depth - 1))
    if choice < 0.6:
        return dc.And(
            random_guard(rng, nodes, dom, depth - 1),
            random_guard(rng, nodes, dom, depth - 1),
        )
    if choice < 0.7:
        fresh = "z"
        return dc.Exists(fresh, random_guard(rng, nodes + [fresh], dom, depth - 1))
    if choice < 0.8 and len(nodes) >= 2:
        return dc.EqPort(rng.choice(nodes), rng.choice(nodes))
    if choice < 0.9:
        size = rng.randint(1, len(dom.values))
        return dc.InSet(rng.choice(nodes), tuple(sorted(rng.sample(dom.values, size))))
    if len(nodes) >= 2:
        target = rng.choice(nodes)
        args = tuple(rng.sample(nodes, 2))
        return dc.FunEq(target, rng.choice(["max", "min"]), args)
    return dc.EqConst(rng.choice(nodes), rng.choice(dom.values))


def random_polarized_ca(
    rng: random.Random,
    max_ports: int = 3,
    max_domain: int = 3,
    max_transitions: int = 4,
) -> PolarizedCA:
    """Random stateless polarized automaton over a small integer domain."""
    n_ports = rng.randint(1, max_ports)
    ports = _port_names("v", n_ports)
    dom = FiniteDataDomain("D", tuple(range(rng.randint(1, max_domain))) or (0,))
    nodes = [source_node(p) for p in ports] + [sink_node(p) for p in ports]
    transitions = set()
    for _ in range(rng.randint(1, max_transitions)):
        n = random_subset(rng, nodes)
        if not n:
            continue
        guard = random_guard(rng, sorted(n), dom)
        transitions.add(("q", n, guard, "q"))
    automaton = ConstraintAutomaton(
        states=frozenset({"q"}),
        initial="q",
        nodes=frozenset(nodes),
        domain=dom,
        transitions=frozenset(transitions),
        name="rand_ca",
    )
    return polarize(automaton, name="rand_ca")


def random_interaction_model(
    rng: random.Random,
    max_connectors: int = 3,
    max_ports: int = 3,
    max_domain: int = 3,
) -> InteractionModel:
    """Random model with extensional, possibly relational, transfer tables."""
    dom = FiniteDataDomain("D", tuple(range(rng.randint(1, max_domain))) or (0,))
    pool = _port_names("m", max_ports)
    connectors = []
    for i in range(rng.randint(1, max_connectors)):
        size = rng.randint(1, len(pool))
        bottom = tuple(sorted(rng.sample(pool, size)))
        locals_ = ("l",)
        slots = 1 + len(locals_)
        up: dict = {}
        down: dict = {}
        for key in itertools.product(dom.values, repeat=len(bottom)):
            if rng.random() < 0.25:
                continue  # guard-false entry
            n_out = rng.randint(1, 2)
            outcomes = []
            for _ in range(n_out):
                outcome = tuple(rng.choice(dom.values) for _ in range(slots))
                outcomes.append(outcome)
                if outcome not in down:
                    down[outcome] = tuple(rng.choice(dom.values) for _ in bottom)
            up[key] = tuple(dict.fromkeys(outcomes))
        connectors.append(
            SimpleConnector(
                top=f"w{i}",
                bottom=bottom,
                locals_=locals_,
                guard=dc.TOP,
                up=up,
                down=down,
                domains={p: dom for p in bottom},
            )
        )
    return InteractionModel(tuple(connectors), name="rand_im")


def random_lts(
    rng: random.Random,
    max_states: int = 5,
    max_ports: int = 3,
    density: float = 0.3,
) -> LabeledTransitionSystem:
    n_states = rng.randint(1, max_states)
    states = [f"t{i}" for i in range(n_states)]
    ports = _port_names("q", rng.randint(1, max_ports))
    transitions = set()
    for src in states:
        for dst in states:
            if rng.random() < density:
                transitions.add((src, random_subset(rng, ports), dst))
    return LabeledTransitionSystem(
        states=frozenset(states),
        initial="t0",
        alphabet=PortSetAlphabet(frozenset(ports)),
        transitions=frozenset(transitions),
    )


def random_lts_pair(rng: random.Random) -> tuple[LabeledTransitionSystem, LabeledTransitionSystem]:
    """Pairs biased toward interesting cases: related systems half the time."""
    first = random_lts(rng)
    if rng.random() < 0.5:
        return first, random_lts(rng)
    # perturb a copy: rename states and sometimes drop or add a transition
    mapping = {q: f"u{i}" for i, q in enumerate(sorted(first.states))}
    transitions = {(mapping[a], lab, mapping[b]) for a, lab, b in first.transitions}
    if transitions and rng.random() < 0.5:
        transitions.discard(sorted(transitions, key=repr)[0])
    second = LabeledTransitionSystem(
        states=frozenset(mapping.values()),
        initial=mapping[first.initial],
        alphabet=first.alphabet,
        transitions=frozenset(transitions),
    )
    return first, second
