"""Labeled transition systems with one initial state.

This is the common semantic domain in which all connector models are
compared.  Labels are either port sets (data-agnostic alphabet) or total
data assignments over a duplicated port set (data-sensitive alphabet).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from .errors import AlphabetMismatch, NotSingleState
from .values import Assignment, Datum, datum_key

Label = Union[frozenset, Assignment]
Transition = tuple[str, Label, str]


@dataclass(frozen=True)
class PortSetAlphabet:
    """All subsets of a finite port set."""

    ports: frozenset[str]

    def conforms(self, label: Label) -> bool:
        return isinstance(label, frozenset) and label <= self.ports


@dataclass(frozen=True)
class AssignmentAlphabet:
    """All total maps from a duplicated port set to data-or-VOID.

    With no ports the alphabet is the single empty assignment whatever the
    domain, so the values are canonicalized away in that case.
    """

    ports: frozenset[str]
    values: tuple[Datum, ...]

    def __post_init__(self):
        canonical = () if not self.ports else tuple(sorted(set(self.values), key=datum_key))
        object.__setattr__(self, "values", canonical)

    def conforms(self, label: Label) -> bool:
        if not isinstance(label, Assignment):
            return False
        if label.ports() != self.ports:
            return False
        from .values import VOID

        return all(v is VOID or v in self.values for _, v in label.items)


Alphabet = Union[PortSetAlphabet, AssignmentAlphabet]


def label_sort_key(label: Label):
    if isinstance(label, frozenset):
        return (0, len(label), tuple(sorted(label)))
    return (1, label.sort_key())


def format_label(label: Label) -> str:
    if isinstance(label, frozenset):
        return "{" + ",".join(sorted(label)) + "}"
    return str(label)


@dataclass(frozen=True)
class LabeledTransitionSystem:
    states: frozenset[str]
    initial: str
    alphabet: Alphabet
    transitions: frozenset[Transition]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not among the states")
        for src, label, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition endpoint outside the state set: {src!r} -> {dst!r}")
            if not self.alphabet.conforms(label):
                raise ValueError(f"label {format_label(label)} does not fit the alphabet")

    def successors(self, state: str) -> list[tuple[Label, str]]:
        return [(label, dst) for src, label, dst in self.transitions if src == state]

    def labels(self) -> frozenset:
        return frozenset(label for _, label, _ in self.transitions)


@dataclass(frozen=True)
class BisimulationWitness:
    """A relation witnessing bisimilarity of two systems."""

    relation: frozenset[tuple[str, str]]


def _outgoing(lts: LabeledTransitionSystem) -> dict[str, list[tuple[Label, str]]]:
    table: dict[str, list[tuple[Label, str]]] = {q: [] for q in lts.states}
    for src, label, dst in lts.transitions:
        table[src].append((label, dst))
    return table


def bisimilar(
    l1: LabeledTransitionSystem, l2: LabeledTransitionSystem
) -> BisimulationWitness | None:
    """Greatest bisimulation between two systems, if their initial states relate.

    Computed by partition refinement on the disjoint union of the state
    spaces; the returned relation is the full greatest fixpoint restricted
    to pairs of states of the two systems.  Systems over different port
    universes are not bisimilar by definition, so None is returned; mixing
    a port-set alphabet with an assignment alphabet raises AlphabetMismatch.
    """
    if type(l1.alphabet) is not type(l2.alphabet):
        raise AlphabetMismatch(
            f"cannot compare {type(l1.alphabet).__name__} with {type(l2.alphabet).__name__}"
        )
    if l1.alphabet != l2.alphabet:
        return None

    out1 = _outgoing(l1)
    out2 = _outgoing(l2)
    nodes = [(0, q) for q in sorted(l1.states)] + [(1, q) for q in sorted(l2.states)]
    succ = {}
    for q, moves in out1.items():
        succ[(0, q)] = [(label, (0, dst)) for label, dst in moves]
    for q, moves in out2.items():
        succ[(1, q)] = [(label, (1, dst)) for label, dst in moves]

    block = {node: 0 for node in nodes}
    while True:
        signatures = {
            node: frozenset((label_sort_key(label), block[dst]) for label, dst in succ[node])
            for node in nodes
        }
        groups: dict[tuple, list] = {}
        for node in nodes:
            groups.setdefault((block[node], signatures[node]), []).append(node)
        if len(groups) == len(set(block.values())):
            break
        new_block = {}
        for idx, key in enumerate(sorted(groups, key=repr)):
            for node in groups[key]:
                new_block[node] = idx
        block = new_block

    if block[(0, l1.initial)] != block[(1, l2.initial)]:
        return None
    relation = frozenset(
        (q1, q2)
        for q1 in l1.states
        for q2 in l2.states
        if block[(0, q1)] == block[(1, q2)]
    )
    return BisimulationWitness(relation)


def verify_witness(
    l1: LabeledTransitionSystem,
    l2: LabeledTransitionSystem,
    witness: BisimulationWitness,
) -> bool:
    """Check the transfer condition of a claimed bisimulation relation."""
    rel = witness.relation
    if (l1.initial, l2.initial) not in rel:
        return False
    out1 = _outgoing(l1)
    out2 = _outgoing(l2)
    for q1, q2 in rel:
        for label, q1p in out1[q1]:
            if not any(lab == label and (q1p, q2p) in rel for lab, q2p in out2[q2]):
                return False
        for label, q2p in out2[q2]:
            if not any(lab == label and (q1p, q2p) in rel for lab, q1p in out1[q1]):
                return False
    return True


def reachable_part(lts: LabeledTransitionSystem) -> LabeledTransitionSystem:
    """Restriction of the system to states reachable from the initial one."""
    out = _outgoing(lts)
    seen = {lts.initial}
    frontier = deque([lts.initial])
    while frontier:
        q = frontier.popleft()
        for _, dst in out[q]:
            if dst not in seen:
                seen.add(dst)
                frontier.append(dst)
    return LabeledTransitionSystem(
        states=frozenset(seen),
        initial=lts.initial,
        alphabet=lts.alphabet,
        transitions=frozenset(t for t in lts.transitions if t[0] in seen),
        name=lts.name,
    )


def lts_identical(l1: LabeledTransitionSystem, l2: LabeledTransitionSystem) -> bool:
    """Equality of single-state systems: same alphabet, same label sets."""
    if len(l1.states) != 1 or len(l2.states) != 1:
        raise NotSingleState("lts_identical is defined for single-state systems only")
    return l1.alphabet == l2.alphabet and l1.labels() == l2.labels()


@dataclass(frozen=True)
class ReachabilityResult:
    holds: bool
    trace: tuple[Label, ...] | None = None

    def __bool__(self):
        return self.holds


def check_unreachable(
    lts: LabeledTransitionSystem, bad: Callable[[str], bool]
) -> ReachabilityResult:
    """BFS check that no reachable state satisfies ``bad``.

    On failure the result carries a shortest label trace from the initial
    state to an offending state.
    """
    if bad(lts.initial):
        return ReachabilityResult(False, ())
    out = _outgoing(lts)
    parent: dict[str, tuple[str, Label] | None] = {lts.initial: None}
    frontier = deque([lts.initial])
    while frontier:
        q = frontier.popleft()
        for label, dst in sorted(out[q], key=lambda m: (label_sort_key(m[0]), m[1])):
            if dst in parent:
                continue
            parent[dst] = (q, label)
            if bad(dst):
                trace = []
                cur = dst
                while parent[cur] is not None:
                    prev, lab = parent[cur]
                    trace.append(lab)
                    cur = prev
                return ReachabilityResult(False, tuple(reversed(trace)))
            frontier.append(dst)
    return ReachabilityResult(True, None)
