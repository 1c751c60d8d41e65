"""Port automata and constraint automata with their composition operators.

Constraint automata label transitions with a set of synchronously firing
nodes and a data constraint over the data observed at them.  Port automata
are the restriction to a singleton data domain, where every satisfiable
guard collapses to Top and is elided.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from . import constraints as dc
from .constraints import DataConstraint, TOP, dc_and, dc_hide, free_ports
from .errors import (
    ArityError,
    DomainMismatch,
    MixedNodesPresent,
    NotStateless,
)
from .lts import AssignmentAlphabet, LabeledTransitionSystem, PortSetAlphabet
from .values import FiniteDataDomain

SINGLETON_DOMAIN = FiniteDataDomain("unit", (0,))


def source_node(port: str) -> str:
    return port + "*"


def sink_node(port: str) -> str:
    return port + "_*"


def is_sink_node(node: str) -> bool:
    return node.endswith("_*")


def is_source_node(node: str) -> bool:
    return node.endswith("*") and not is_sink_node(node)


def node_base(node: str) -> str:
    """Bidirectional port a polarized node name stands for."""
    if is_sink_node(node):
        return node[:-2]
    if is_source_node(node):
        return node[:-1]
    return node


def pair_state(q1: str, q2: str) -> str:
    return f"({q1},{q2})"


def tuple_state(parts: Iterable[str]) -> str:
    return "(" + ",".join(parts) + ")"


def flatten_state_name(state: str) -> str:
    """Collapse nested product tuples: "((a,b),c)" becomes "(a,b,c)"."""
    if "(" not in state:
        return state
    return "(" + state.replace("(", "").replace(")", "") + ")"


@dataclass(frozen=True)
class PortAutomaton:
    states: frozenset[str]
    initial: str
    nodes: frozenset[str]
    transitions: frozenset[tuple[str, frozenset[str], str]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not among the states")
        for src, ports, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"dangling transition endpoint {src!r} -> {dst!r}")
            if not ports <= self.nodes:
                raise ValueError(f"transition fires unknown nodes {sorted(ports - self.nodes)}")


@dataclass(frozen=True)
class ConstraintAutomaton:
    states: frozenset[str]
    initial: str
    nodes: frozenset[str]
    domain: FiniteDataDomain
    transitions: frozenset[tuple[str, frozenset[str], DataConstraint, str]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not among the states")
        for src, ports, guard, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"dangling transition endpoint {src!r} -> {dst!r}")
            if not ports <= self.nodes:
                raise ValueError(f"transition fires unknown nodes {sorted(ports - self.nodes)}")
            loose = free_ports(guard) - ports
            if loose:
                raise ValueError(f"guard mentions non-firing nodes {sorted(loose)}")


@dataclass(frozen=True)
class PolarizedCA:
    """A stateless constraint automaton with a source/mixed/sink node split.

    Source and sink nodes follow the duplicated-name convention: a
    bidirectional port p appears as the input node p* and the output node
    p_*.  Mixed nodes are internal and carry neither suffix.
    """

    automaton: ConstraintAutomaton
    sources: frozenset[str]
    mixed: frozenset[str]
    sinks: frozenset[str]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        cells = [self.sources, self.mixed, self.sinks]
        union = self.sources | self.mixed | self.sinks
        if union != self.automaton.nodes or sum(map(len, cells)) != len(union):
            raise ValueError("polarity cells must partition the node set")
        if len(self.automaton.states) != 1:
            raise NotStateless("a polarized automaton must have exactly one state")
        bad_src = [n for n in self.sources if not is_source_node(n)]
        bad_snk = [n for n in self.sinks if not is_sink_node(n)]
        bad_mix = [n for n in self.mixed if is_source_node(n) or is_sink_node(n)]
        problems = bad_src + bad_snk + bad_mix
        if problems:
            raise ValueError(f"nodes violate the polarity naming convention: {sorted(problems)}")


def is_stateless(automaton) -> bool:
    return len(automaton.states) == 1


def is_port_automaton(automaton) -> bool:
    """True for port automata and for CAs over a singleton domain."""
    if isinstance(automaton, PortAutomaton):
        return True
    return len(automaton.domain.values) == 1


def pa_product(a1: PortAutomaton, a2: PortAutomaton) -> PortAutomaton:
    """Synchronous product of port automata.

    Transitions firing shared nodes must agree on them and join; a
    transition whose node set is disjoint from the other automaton's
    interface (including the empty set) may fire alone while the other
    side stays put.
    """
    transitions = set()
    for (q1, n1, t1), (q2, n2, t2) in itertools.product(a1.transitions, a2.transitions):
        if n1 & a2.nodes == n2 & a1.nodes:
            transitions.add((pair_state(q1, q2), n1 | n2, pair_state(t1, t2)))
    for q1, n1, t1 in a1.transitions:
        if not n1 & a2.nodes:
            for q2 in a2.states:
                transitions.add((pair_state(q1, q2), n1, pair_state(t1, q2)))
    for q2, n2, t2 in a2.transitions:
        if not n2 & a1.nodes:
            for q1 in a1.states:
                transitions.add((pair_state(q1, q2), n2, pair_state(q1, t2)))
    return PortAutomaton(
        states=frozenset(pair_state(q1, q2) for q1 in a1.states for q2 in a2.states),
        initial=pair_state(a1.initial, a2.initial),
        nodes=a1.nodes | a2.nodes,
        transitions=frozenset(transitions),
    )


def ca_product(a1: ConstraintAutomaton, a2: ConstraintAutomaton) -> ConstraintAutomaton:
    """Synchronous product of constraint automata; joint guards are conjoined."""
    if a1.domain != a2.domain:
        raise DomainMismatch(
            f"cannot compose automata over domains {a1.domain.name!r} and {a2.domain.name!r}"
        )
    transitions = set()
    for (q1, n1, g1, t1), (q2, n2, g2, t2) in itertools.product(a1.transitions, a2.transitions):
        if n1 & a2.nodes == n2 & a1.nodes:
            transitions.add((pair_state(q1, q2), n1 | n2, dc_and(g1, g2), pair_state(t1, t2)))
    for q1, n1, g1, t1 in a1.transitions:
        if not n1 & a2.nodes:
            for q2 in a2.states:
                transitions.add((pair_state(q1, q2), n1, g1, pair_state(t1, q2)))
    for q2, n2, g2, t2 in a2.transitions:
        if not n2 & a1.nodes:
            for q1 in a1.states:
                transitions.add((pair_state(q1, q2), n2, g2, pair_state(q1, t2)))
    return ConstraintAutomaton(
        states=frozenset(pair_state(q1, q2) for q1 in a1.states for q2 in a2.states),
        initial=pair_state(a1.initial, a2.initial),
        nodes=a1.nodes | a2.nodes,
        domain=a1.domain,
        transitions=frozenset(transitions),
    )


def pa_hide(a: PortAutomaton, ports: Iterable[str]) -> PortAutomaton:
    hidden = frozenset(ports)
    return PortAutomaton(
        states=a.states,
        initial=a.initial,
        nodes=a.nodes - hidden,
        transitions=frozenset((q, n - hidden, t) for q, n, t in a.transitions),
        name=a.name,
    )


def ca_hide(a: ConstraintAutomaton, ports: Iterable[str]) -> ConstraintAutomaton:
    """Remove nodes from the interface, existentially quantifying their data.

    Only the transition labels change; the state structure is preserved.
    """
    hidden = frozenset(ports)
    return ConstraintAutomaton(
        states=a.states,
        initial=a.initial,
        nodes=a.nodes - hidden,
        domain=a.domain,
        transitions=frozenset(
            (q, n - hidden, dc_hide(g, hidden & n), t) for q, n, g, t in a.transitions
        ),
        name=a.name,
    )


def polarized_hide(pca: PolarizedCA, ports: Iterable[str]) -> PolarizedCA:
    hidden = frozenset(ports)
    return PolarizedCA(
        automaton=ca_hide(pca.automaton, hidden),
        sources=pca.sources - hidden,
        mixed=pca.mixed - hidden,
        sinks=pca.sinks - hidden,
        name=pca.name,
    )


def _reachable(states, initial, transitions, key):
    out = {q: [] for q in states}
    for t in transitions:
        out[t[0]].append(t)
    seen = {initial}
    frontier = deque([initial])
    while frontier:
        q = frontier.popleft()
        for t in out[q]:
            dst = t[-1]
            if dst not in seen:
                seen.add(dst)
                frontier.append(dst)
    return seen


def pa_reachable_part(a: PortAutomaton) -> PortAutomaton:
    seen = _reachable(a.states, a.initial, a.transitions, None)
    return PortAutomaton(
        states=frozenset(seen),
        initial=a.initial,
        nodes=a.nodes,
        transitions=frozenset(t for t in a.transitions if t[0] in seen),
        name=a.name,
    )


def ca_reachable_part(a: ConstraintAutomaton) -> ConstraintAutomaton:
    seen = _reachable(a.states, a.initial, a.transitions, None)
    return ConstraintAutomaton(
        states=frozenset(seen),
        initial=a.initial,
        nodes=a.nodes,
        domain=a.domain,
        transitions=frozenset(t for t in a.transitions if t[0] in seen),
        name=a.name,
    )


def pa_rename_states(a: PortAutomaton, mapping) -> PortAutomaton:
    rn = lambda q: mapping.get(q, q) if isinstance(mapping, dict) else mapping(q)
    return PortAutomaton(
        states=frozenset(rn(q) for q in a.states),
        initial=rn(a.initial),
        nodes=a.nodes,
        transitions=frozenset((rn(q), n, rn(t)) for q, n, t in a.transitions),
        name=a.name,
    )


def pa_flatten_states(a: PortAutomaton) -> PortAutomaton:
    """Canonicalize left-associated product state names to flat tuples."""
    return pa_rename_states(a, flatten_state_name)


def pa_isomorphic(a1: PortAutomaton, a2: PortAutomaton) -> bool:
    """Equality up to a bijective renaming of states."""
    if a1.nodes != a2.nodes or len(a1.states) != len(a2.states):
        return False
    if len(a1.transitions) != len(a2.transitions):
        return False
    states1 = sorted(a1.states)
    trans2 = a2.transitions
    for perm in itertools.permutations(sorted(a2.states)):
        rn = dict(zip(states1, perm))
        if rn[a1.initial] != a2.initial:
            continue
        if frozenset((rn[q], n, rn[t]) for q, n, t in a1.transitions) == trans2:
            return True
    return False


def interpret_pa(a: PortAutomaton) -> LabeledTransitionSystem:
    """Read a port automaton as an LTS over the powerset of its nodes."""
    return LabeledTransitionSystem(
        states=a.states,
        initial=a.initial,
        alphabet=PortSetAlphabet(a.nodes),
        transitions=frozenset(a.transitions),
        name=a.name,
    )


def used_polarity(pca: PolarizedCA) -> tuple[frozenset[str], frozenset[str]]:
    """Source and sink nodes that occur on some transition."""
    src_used, snk_used = set(), set()
    for _, n, _, _ in pca.automaton.transitions:
        src_used |= n & pca.sources
        snk_used |= n & pca.sinks
    return frozenset(src_used), frozenset(snk_used)


def interpret_ca(pca: PolarizedCA, bound: int | None = None) -> LabeledTransitionSystem:
    """Unfold a stateless polarized automaton into assignment-labeled steps.

    Every transition labeled (N, g) becomes one transition per total data
    assignment that fires exactly N under g.  The alphabet ranges over the
    duplicated port set of the smallest bidirectional port set covering
    the used source and sink nodes.
    """
    a = pca.automaton
    if len(a.states) != 1:
        raise NotStateless("interpretation is defined for stateless automata")
    mixed_used = set()
    for _, n, _, _ in a.transitions:
        mixed_used |= n & pca.mixed
    if mixed_used:
        raise MixedNodesPresent(f"hide mixed nodes first: {sorted(mixed_used)}")
    src_used, snk_used = used_polarity(pca)
    ports = {node_base(n) for n in src_used} | {node_base(n) for n in snk_used}
    two_p = frozenset(source_node(p) for p in ports) | frozenset(sink_node(p) for p in ports)
    (state,) = a.states
    transitions = set()
    for _, n, g, _ in a.transitions:
        for delta in dc.delta_set(n, g, two_p, a.domain, bound=bound):
            transitions.add((state, delta, state))
    return LabeledTransitionSystem(
        states=a.states,
        initial=state,
        alphabet=AssignmentAlphabet(two_p, a.domain.values),
        transitions=frozenset(transitions),
        name=pca.name,
    )


def _stateless(nodes, loops, domain, name=""):
    return ConstraintAutomaton(
        states=frozenset({"q"}),
        initial="q",
        nodes=frozenset(nodes),
        domain=domain,
        transitions=frozenset(("q", frozenset(n), TOP, "q") for n in loops),
        name=name,
    )


def sync(a: str, b: str, domain: FiniteDataDomain = SINGLETON_DOMAIN) -> ConstraintAutomaton:
    return _stateless({a, b}, [{a, b}], domain, "Sync")


def lossy_sync(a: str, b: str, domain: FiniteDataDomain = SINGLETON_DOMAIN) -> ConstraintAutomaton:
    return _stateless({a, b}, [{a, b}, {a}], domain, "LossySync")


def sync_drain(a: str, b: str, domain: FiniteDataDomain = SINGLETON_DOMAIN) -> ConstraintAutomaton:
    return _stateless({a, b}, [{a, b}], domain, "SyncDrain")


def fifo1(a: str, b: str, domain: FiniteDataDomain = SINGLETON_DOMAIN) -> ConstraintAutomaton:
    return ConstraintAutomaton(
        states=frozenset({"q0", "q1"}),
        initial="q0",
        nodes=frozenset({a, b}),
        domain=domain,
        transitions=frozenset(
            {("q0", frozenset({a}), TOP, "q1"), ("q1", frozenset({b}), TOP, "q0")}
        ),
        name="FIFO1",
    )


def merge_replicate_node(
    inputs: Iterable[str], outputs: Iterable[str], domain: FiniteDataDomain = SINGLETON_DOMAIN
) -> ConstraintAutomaton:
    """Reo node: one input at a time propagates to all outputs."""
    ins, outs = list(inputs), list(outputs)
    if not ins or not outs:
        raise ArityError("a node needs at least one input and one output")
    loops = [{b, *outs} for b in ins]
    return _stateless(set(ins) | set(outs), loops, domain, "Node")


_PRIMITIVES = {"sync": sync, "lossysync": lossy_sync, "syncdrain": sync_drain, "fifo1": fifo1}


def primitive(kind: str, *nodes, domain: FiniteDataDomain = SINGLETON_DOMAIN) -> ConstraintAutomaton:
    """Build a channel or node from the primitive library by name."""
    key = kind.lower()
    if key == "node":
        if len(nodes) != 2:
            raise ArityError("node takes an input list and an output list")
        return merge_replicate_node(nodes[0], nodes[1], domain)
    if key not in _PRIMITIVES:
        raise ArityError(f"unknown primitive kind {kind!r}")
    if len(nodes) != 2:
        raise ArityError(f"{kind} takes exactly two nodes, got {len(nodes)}")
    return _PRIMITIVES[key](nodes[0], nodes[1], domain)


def ca_to_pa(a: ConstraintAutomaton) -> PortAutomaton:
    """Drop guards of an automaton over a singleton domain."""
    if len(a.domain.values) != 1:
        raise DomainMismatch("only singleton-domain automata reduce to port automata")
    kept = set()
    value = a.domain.values[0]
    for q, n, g, t in a.transitions:
        if dc.dc_eval(g, {p: value for p in n}, a.domain):
            kept.add((q, n, t))
    return PortAutomaton(a.states, a.initial, a.nodes, frozenset(kept), a.name)


def pa_to_ca(a: PortAutomaton, domain: FiniteDataDomain = SINGLETON_DOMAIN) -> ConstraintAutomaton:
    return ConstraintAutomaton(
        states=a.states,
        initial=a.initial,
        nodes=a.nodes,
        domain=domain,
        transitions=frozenset((q, n, TOP, t) for q, n, t in a.transitions),
        name=a.name,
    )


def polarize(a: ConstraintAutomaton, name: str = "") -> PolarizedCA:
    """Classify nodes of a stateless automaton by their name suffix."""
    sources = frozenset(n for n in a.nodes if is_source_node(n))
    sinks = frozenset(n for n in a.nodes if is_sink_node(n))
    mixed = a.nodes - sources - sinks
    return PolarizedCA(a, sources, mixed, sinks, name=name or a.name)
