"""Data-agnostic BIP: components, architectures, application and composition.

An architecture pairs a set of coordinating components with an interaction
model over its interface; applying it to operand components builds the
coordinated composite.  Its observable behaviour is obtained by applying
it to a dummy component over the dangling ports and hiding the
coordinator ports.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    CoordinatorPortsOverlap,
    DomainTooLarge,
    InterfaceNotCovered,
    NotDisconnected,
)
from .lts import LabeledTransitionSystem, PortSetAlphabet
from .reo import tuple_state

DUMMY_STATE = "qD"
GAMMA_ENUM_BOUND = 16  # interface size cap for explicit powerset-style enumeration


@dataclass(frozen=True)
class BipComponent:
    states: frozenset[str]
    initial: str
    ports: frozenset[str]
    transitions: frozenset[tuple[str, frozenset[str], str]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not among the states")
        for src, label, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"dangling transition endpoint {src!r} -> {dst!r}")
            if not label <= self.ports:
                raise ValueError(f"transition uses unknown ports {sorted(label - self.ports)}")


def component_to_lts(c: BipComponent) -> LabeledTransitionSystem:
    return LabeledTransitionSystem(
        states=c.states,
        initial=c.initial,
        alphabet=PortSetAlphabet(c.ports),
        transitions=frozenset(c.transitions),
        name=c.name,
    )


class GammaSet:
    """An interaction model: a set of interactions (subsets of an interface).

    Small models are stored explicitly.  Models of the shape produced by
    automaton-to-architecture translation (all paired sets N and their
    duplicates) can be kept intensionally as a predicate plus generator,
    which avoids materializing an exponential family just to test
    membership.
    """

    __slots__ = ("_explicit", "_predicate", "_generator", "_universe")

    def __init__(
        self,
        interactions: Iterable[Iterable[str]] | None = None,
        *,
        predicate: Callable[[frozenset[str]], bool] | None = None,
        generator: Callable[[], Iterator[frozenset[str]]] | None = None,
        universe: frozenset[str] | None = None,
    ):
        if interactions is not None:
            self._explicit: frozenset[frozenset[str]] | None = frozenset(
                frozenset(n) for n in interactions
            )
            self._predicate = None
            self._generator = None
            self._universe = None
        else:
            if predicate is None or generator is None or universe is None:
                raise ValueError("intensional GammaSet needs predicate, generator and universe")
            self._explicit = None
            self._predicate = predicate
            self._generator = generator
            self._universe = universe

    @staticmethod
    def explicit(interactions: Iterable[Iterable[str]]) -> "GammaSet":
        return GammaSet(interactions)

    @staticmethod
    def paired_powerset(base: Iterable[str], partner: Callable[[str], str]) -> "GammaSet":
        """All sets N over ``base`` joined with their partner-renamed copies."""
        ports = tuple(sorted(base))
        universe = frozenset(ports) | frozenset(partner(p) for p in ports)

        def member(n: frozenset[str]) -> bool:
            if not n <= universe:
                return False
            chosen = n & frozenset(ports)
            return n == chosen | frozenset(partner(p) for p in chosen)

        def generate() -> Iterator[frozenset[str]]:
            for r in range(len(ports) + 1):
                for combo in itertools.combinations(ports, r):
                    yield frozenset(combo) | frozenset(partner(p) for p in combo)

        return GammaSet(predicate=member, generator=generate, universe=universe)

    @property
    def is_explicit(self) -> bool:
        return self._explicit is not None

    def __contains__(self, interaction: Iterable[str]) -> bool:
        n = frozenset(interaction)
        if self._explicit is not None:
            return n in self._explicit
        return self._predicate(n)

    def __iter__(self) -> Iterator[frozenset[str]]:
        if self._explicit is not None:
            return iter(sorted(self._explicit, key=lambda n: (len(n), tuple(sorted(n)))))
        return self._generator()

    def materialize(self, bound: int | None = None) -> frozenset[frozenset[str]]:
        if self._explicit is not None:
            return self._explicit
        limit = 2 ** GAMMA_ENUM_BOUND if bound is None else bound
        out = set()
        for n in self._generator():
            out.add(n)
            if len(out) > limit:
                raise DomainTooLarge(f"interaction model larger than {limit} members")
        return frozenset(out)

    def __eq__(self, other):
        if not isinstance(other, GammaSet):
            return NotImplemented
        return self.materialize() == other.materialize()

    def __hash__(self):
        return hash(self.materialize())

    def __repr__(self):
        if self._explicit is not None:
            return f"GammaSet({len(self._explicit)} interactions)"
        return "GammaSet(intensional)"


def _as_gamma(gamma) -> GammaSet:
    return gamma if isinstance(gamma, GammaSet) else GammaSet(gamma)


@dataclass(frozen=True)
class BipArchitecture:
    coordinators: tuple[BipComponent, ...]
    interface: frozenset[str]
    gamma: GammaSet
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gamma", _as_gamma(self.gamma))
        seen: set[str] = set()
        for c in self.coordinators:
            overlap = seen & c.ports
            if overlap:
                raise NotDisconnected(f"coordinator ports {sorted(overlap)} are shared")
            seen |= c.ports
        if not seen <= self.interface:
            raise ValueError(
                f"coordinator ports {sorted(seen - self.interface)} outside the interface"
            )
        if self.gamma.is_explicit:
            for n in self.gamma:
                if not n <= self.interface:
                    raise ValueError(
                        f"interaction {sorted(n)} mentions ports outside the interface"
                    )

    @property
    def coordinator_ports(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for c in self.coordinators:
            out |= c.ports
        return out

    @property
    def dangling_ports(self) -> frozenset[str]:
        return self.interface - self.coordinator_ports


def _check_disconnected(components: Sequence[BipComponent]) -> None:
    seen: set[str] = set()
    for c in components:
        overlap = seen & c.ports
        if overlap:
            raise NotDisconnected(f"constituents share ports {sorted(overlap)}")
        seen |= c.ports


def _nonempty_moves(c: BipComponent) -> dict[str, list[tuple[frozenset[str], str]]]:
    table: dict[str, list[tuple[frozenset[str], str]]] = {q: [] for q in c.states}
    for src, label, dst in c.transitions:
        if label:
            table[src].append((label, dst))
    return table


def _empty_moves(c: BipComponent) -> dict[str, list[str]]:
    table: dict[str, list[str]] = {q: [] for q in c.states}
    for src, label, dst in c.transitions:
        if not label:
            table[src].append(dst)
    return table


def arch_apply(
    arch: BipArchitecture,
    operands: Sequence[BipComponent],
    *,
    full: bool = False,
) -> BipComponent:
    """Apply an architecture to operand components.

    The composite steps either by one constituent taking an empty-labeled
    transition on its own, or by an interaction whose restriction to the
    interface belongs to the interaction model, with every constituent
    that owns part of it firing synchronously.  Only the reachable part of
    the product is materialized unless ``full`` is set.
    """
    constituents = tuple(arch.coordinators) + tuple(operands)
    _check_disconnected(constituents)
    all_ports = frozenset().union(*(c.ports for c in constituents)) if constituents else frozenset()
    if not arch.interface <= all_ports:
        raise InterfaceNotCovered(
            f"interface ports {sorted(arch.interface - all_ports)} belong to no constituent"
        )
    moves = [_nonempty_moves(c) for c in constituents]
    idle = [_empty_moves(c) for c in constituents]
    interface = arch.interface
    gamma = arch.gamma

    def steps(vector: tuple[str, ...]):
        out = []
        for i, c in enumerate(constituents):
            for dst in idle[i][vector[i]]:
                target = vector[:i] + (dst,) + vector[i + 1 :]
                out.append((frozenset(), target))
        options = [[None] + moves[i][vector[i]] for i in range(len(constituents))]
        for combo in itertools.product(*options):
            label: frozenset[str] = frozenset()
            target = list(vector)
            for i, choice in enumerate(combo):
                if choice is not None:
                    label |= choice[0]
                    target[i] = choice[1]
            if label & interface in gamma:
                out.append((label, tuple(target)))
        return out

    initial = tuple(c.initial for c in constituents)
    transitions = set()
    if full:
        spaces = [sorted(c.states) for c in constituents]
        vectors = list(itertools.product(*spaces))
    else:
        seen = {initial}
        frontier = deque([initial])
        vectors = [initial]
        while frontier:
            vec = frontier.popleft()
            for _, target in steps(vec):
                if target not in seen:
                    seen.add(target)
                    frontier.append(target)
                    vectors.append(target)
    for vec in vectors:
        for label, target in steps(vec):
            transitions.add((tuple_state(vec), label, tuple_state(target)))
    return BipComponent(
        states=frozenset(tuple_state(v) for v in vectors),
        initial=tuple_state(initial),
        ports=all_ports,
        transitions=frozenset(transitions),
        name=arch.name,
    )


def arch_compose(a1: BipArchitecture, a2: BipArchitecture) -> BipArchitecture:
    """Combine two architectures; their interaction models are conjoined.

    The combined model contains exactly the port sets whose restriction to
    either interface belongs to that side's model.  Candidates are unions
    of member interactions, then refiltered against the definition.
    """
    if a1.coordinator_ports & a2.coordinator_ports:
        raise CoordinatorPortsOverlap(
            f"shared coordinator ports {sorted(a1.coordinator_ports & a2.coordinator_ports)}"
        )
    g1 = a1.gamma.materialize()
    g2 = a2.gamma.materialize()
    candidates = {n1 | n2 for n1 in g1 for n2 in g2}
    combined = frozenset(
        n for n in candidates if n & a1.interface in g1 and n & a2.interface in g2
    )
    return BipArchitecture(
        coordinators=tuple(a1.coordinators) + tuple(a2.coordinators),
        interface=a1.interface | a2.interface,
        gamma=GammaSet(combined),
        name=f"{a1.name}+{a2.name}" if a1.name or a2.name else "",
    )


def dummy_component(arch: BipArchitecture, bound: int = GAMMA_ENUM_BOUND) -> BipComponent:
    """Single-state component that offers every nonempty dangling interaction."""
    dangling = sorted(arch.dangling_ports)
    if len(dangling) > bound:
        raise DomainTooLarge(
            f"{len(dangling)} dangling ports exceed the explicit enumeration bound {bound}"
        )
    loops = set()
    for r in range(1, len(dangling) + 1):
        for combo in itertools.combinations(dangling, r):
            loops.add((DUMMY_STATE, frozenset(combo), DUMMY_STATE))
    return BipComponent(
        states=frozenset({DUMMY_STATE}),
        initial=DUMMY_STATE,
        ports=frozenset(dangling),
        transitions=frozenset(loops),
        name="dummy",
    )


def interpret_arch(arch: BipArchitecture) -> LabeledTransitionSystem:
    """Observable behaviour of an architecture.

    The architecture is applied to a dummy component over its dangling
    ports and coordinator ports are hidden from the labels.  The dummy is
    treated implicitly: it can always follow the dangling part of an
    interaction and never idles, so interactions are drawn directly from
    the interaction model.
    """
    coordinators = arch.coordinators
    coord_ports = arch.coordinator_ports
    dangling = arch.dangling_ports
    moves = [_nonempty_moves(c) for c in coordinators]
    idle = [_empty_moves(c) for c in coordinators]

    def steps(vector: tuple[str, ...]):
        out = []
        for i in range(len(coordinators)):
            for dst in idle[i][vector[i]]:
                out.append((frozenset(), vector[:i] + (dst,) + vector[i + 1 :]))
        for interaction in arch.gamma:
            per_constituent: list[list[tuple[str, ...]]] = []
            feasible = True
            for i, c in enumerate(coordinators):
                part = interaction & c.ports
                if not part:
                    per_constituent.append([vector[i]])
                    continue
                targets = [dst for label, dst in moves[i][vector[i]] if label == part]
                if not targets:
                    feasible = False
                    break
                per_constituent.append(targets)
            if not feasible:
                continue
            if not interaction - coord_ports <= dangling:
                continue
            for combo in itertools.product(*per_constituent):
                out.append((interaction, tuple(combo)))
        return out

    initial = tuple(c.initial for c in coordinators)
    seen = {initial}
    frontier = deque([initial])
    order = [initial]
    edges = []
    while frontier:
        vec = frontier.popleft()
        for label, target in steps(vec):
            edges.append((vec, label, target))
            if target not in seen:
                seen.add(target)
                frontier.append(target)
                order.append(target)

    def state_name(vec: tuple[str, ...]) -> str:
        return tuple_state(vec + (DUMMY_STATE,))

    return LabeledTransitionSystem(
        states=frozenset(state_name(v) for v in order),
        initial=state_name(initial),
        alphabet=PortSetAlphabet(arch.interface - coord_ports),
        transitions=frozenset(
            (state_name(src), label - coord_ports, state_name(dst)) for src, label, dst in edges
        ),
        name=arch.name,
    )
