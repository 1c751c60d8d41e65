"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately re-derive results by brute force so library
operations are checked against a second, simpler computation.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from coordbridge import (
    Assignment,
    BipArchitecture,
    BipComponent,
    GammaSet,
    LabeledTransitionSystem,
    PortAutomaton,
    PortSetAlphabet,
)
from coordbridge import dsl

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load_corpus(name: str) -> dsl.ModelDocument:
    return dsl.parse_file(CORPUS / f"{name}.coord")


# ---------------------------------------------------------------------------
# paper figures, built programmatically (cross-checked against the corpus)

def fig4a() -> PortAutomaton:
    return PortAutomaton(
        states=frozenset({"0", "1"}),
        initial="0",
        nodes=frozenset({"b1", "b2", "f1", "f2"}),
        transitions=frozenset(
            {
                ("0", frozenset({"b1"}), "1"),
                ("0", frozenset({"b2"}), "1"),
                ("1", frozenset({"f1"}), "0"),
                ("1", frozenset({"f2"}), "0"),
            }
        ),
        name="BipLikeMutex",
    )


def alternator(i: int) -> PortAutomaton:
    b, f = f"b{i}", f"f{i}"
    return PortAutomaton(
        states=frozenset({"0", "1"}),
        initial="0",
        nodes=frozenset({b, f}),
        transitions=frozenset({("0", frozenset({b}), "1"), ("1", frozenset({f}), "0")}),
        name=f"Alternator{i}",
    )


def fig4c() -> PortAutomaton:
    return PortAutomaton(
        states=frozenset({"(0,0,0)", "(1,1,0)", "(0,1,1)"}),
        initial="(0,0,0)",
        nodes=frozenset({"b1", "b2", "f1", "f2"}),
        transitions=frozenset(
            {
                ("(0,0,0)", frozenset({"b1"}), "(1,1,0)"),
                ("(0,0,0)", frozenset({"b2"}), "(0,1,1)"),
                ("(1,1,0)", frozenset({"f1"}), "(0,0,0)"),
                ("(0,1,1)", frozenset({"f2"}), "(0,0,0)"),
            }
        ),
        name="FoolproofMutex",
    )


def fig4e() -> PortAutomaton:
    empty = frozenset()
    return PortAutomaton(
        states=frozenset({"free", "taken"}),
        initial="free",
        nodes=frozenset({"b1", "b2", "f1", "f2"}),
        transitions=frozenset(
            {
                ("free", empty, "free"),
                ("taken", empty, "taken"),
                ("free", frozenset({"b1"}), "taken"),
                ("free", frozenset({"b2"}), "taken"),
                ("taken", frozenset({"f1"}), "free"),
                ("taken", frozenset({"f2"}), "free"),
            }
        ),
        name="ReoA12",
    )


def c12() -> BipComponent:
    return BipComponent(
        states=frozenset({"free", "taken"}),
        initial="free",
        ports=frozenset({"b12", "f12"}),
        transitions=frozenset(
            {("free", frozenset({"b12"}), "taken"), ("taken", frozenset({"f12"}), "free")}
        ),
        name="C12",
    )


def worker(i: int) -> BipComponent:
    b, f = f"b{i}", f"f{i}"
    return BipComponent(
        states=frozenset({"sleep", "work"}),
        initial="sleep",
        ports=frozenset({b, f}),
        transitions=frozenset(
            {("sleep", frozenset({b}), "work"), ("work", frozenset({f}), "sleep")}
        ),
        name=f"B{i}",
    )


def gamma12() -> frozenset[frozenset[str]]:
    return frozenset(
        {
            frozenset(),
            frozenset({"b1", "b12"}),
            frozenset({"b2", "b12"}),
            frozenset({"f1", "f12"}),
            frozenset({"f2", "f12"}),
        }
    )


def a12() -> BipArchitecture:
    return BipArchitecture(
        coordinators=(c12(),),
        interface=frozenset({"b1", "b2", "b12", "f1", "f2", "f12"}),
        gamma=GammaSet(gamma12()),
        name="A12",
    )


# ---------------------------------------------------------------------------
# oracles

def naive_bisimilar(l1: LabeledTransitionSystem, l2: LabeledTransitionSystem):
    """Greatest-fixpoint bisimulation by refinement from the full relation."""
    if l1.alphabet != l2.alphabet:
        return None
    out1 = {q: [] for q in l1.states}
    out2 = {q: [] for q in l2.states}
    for q, lab, t in l1.transitions:
        out1[q].append((lab, t))
    for q, lab, t in l2.transitions:
        out2[q].append((lab, t))
    relation = {(q1, q2) for q1 in l1.states for q2 in l2.states}
    changed = True
    while changed:
        changed = False
        for q1, q2 in sorted(relation):
            ok = all(
                any(lab2 == lab1 and (t1, t2) in relation for lab2, t2 in out2[q2])
                for lab1, t1 in out1[q1]
            ) and all(
                any(lab1 == lab2 and (t1, t2) in relation for lab1, t1 in out1[q1])
                for lab2, t2 in out2[q2]
            )
            if not ok:
                relation.discard((q1, q2))
                changed = True
    if (l1.initial, l2.initial) not in relation:
        return None
    return frozenset(relation)


def oracle_pa_product(a1: PortAutomaton, a2: PortAutomaton) -> PortAutomaton:
    """Literal rule-by-rule product, written independently of the library.

    All candidate transition pairs, including stay-put placeholders, are
    enumerated and filtered by the two product rules.
    """
    states = {f"({q1},{q2})" for q1 in a1.states for q2 in a2.states}
    transitions = set()
    moves1 = list(a1.transitions) + [(q, None, q) for q in a1.states]
    moves2 = list(a2.transitions) + [(q, None, q) for q in a2.states]
    for (q1, n1, t1), (q2, n2, t2) in itertools.product(moves1, moves2):
        if n1 is None and n2 is None:
            continue
        if n1 is not None and n2 is not None:
            if n1 & a2.nodes == n2 & a1.nodes:
                transitions.add((f"({q1},{q2})", n1 | n2, f"({t1},{t2})"))
        elif n1 is not None:
            if not n1 & a2.nodes:
                transitions.add((f"({q1},{q2})", n1, f"({t1},{q2})"))
        else:
            if not n2 & a1.nodes:
                transitions.add((f"({q1},{q2})", n2, f"({q1},{t2})"))
    return PortAutomaton(
        states=frozenset(states),
        initial=f"({a1.initial},{a2.initial})",
        nodes=a1.nodes | a2.nodes,
        transitions=frozenset(transitions),
    )


def oracle_gamma_compose(gamma1, gamma2, p1, p2) -> frozenset[frozenset[str]]:
    """Combined interaction model by filtration over all subsets."""
    universe = sorted(set(p1) | set(p2))
    out = set()
    for r in range(len(universe) + 1):
        for combo in itertools.combinations(universe, r):
            n = frozenset(combo)
            if n & frozenset(p1) in gamma1 and n & frozenset(p2) in gamma2:
                out.add(n)
    return frozenset(out)


def monitor_product(
    lts: LabeledTransitionSystem, monitor: PortAutomaton
) -> LabeledTransitionSystem:
    """Synchronize an LTS with a monitor automaton over the monitor's nodes.

    A step labeled N forces the monitor to take an N-restricted step when
    they share ports, and leaves it in place otherwise.
    """
    mon_out = {q: [] for q in monitor.states}
    for q, lab, t in monitor.transitions:
        mon_out[q].append((lab, t))
    states = set()
    transitions = set()
    for (q, label, t) in lts.transitions:
        part = label & monitor.nodes
        for m in monitor.states:
            if part:
                for lab, m2 in mon_out[m]:
                    if lab == part:
                        transitions.add(((q, m), label, (t, m2)))
            else:
                transitions.add(((q, m), label, (t, m)))
    for q in lts.states:
        for m in monitor.states:
            states.add((q, m))
    name = lambda pair: f"({pair[0]}|{pair[1]})"
    return LabeledTransitionSystem(
        states=frozenset(name(s) for s in states),
        initial=name((lts.initial, monitor.initial)),
        alphabet=lts.alphabet,
        transitions=frozenset((name(a), lab, name(b)) for a, lab, b in transitions),
    )


def lts_of_portsets(states, initial, ports, transitions) -> LabeledTransitionSystem:
    return LabeledTransitionSystem(
        states=frozenset(states),
        initial=initial,
        alphabet=PortSetAlphabet(frozenset(ports)),
        transitions=frozenset((q, frozenset(n), t) for q, n, t in transitions),
    )
