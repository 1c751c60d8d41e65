"""Translations between the Reo-side and BIP-side connector models.

Data-agnostic direction: architectures become port automata by composing
the coordinators with a one-state encoding of the interaction model and
hiding the coordinator ports; port automata become architectures by
duplicating their nodes and using the automaton itself as coordinator.

Data-sensitive direction: each transition of a stateless polarized
automaton becomes one simple connector whose up relation solves the data
constraint, and each simple connector becomes one transition whose guard
pins exactly the connector's dataflows.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

from . import constraints as dc
from .bip import BipArchitecture, BipComponent, GammaSet, arch_compose, interpret_arch
from .constraints import DataConstraint, guard_text
from .errors import (
    FreshNameExhausted,
    InteractionOutOfInterface,
    NotStateless,
    PrimeCollision,
    StateChangingEmpty,
)
from .interactions import InteractionModel, SimpleConnector, delta_alpha, interpret_im
from .lts import BisimulationWitness, bisimilar, lts_identical
from .reo import (
    ConstraintAutomaton,
    PolarizedCA,
    PortAutomaton,
    ca_hide,
    interpret_ca,
    interpret_pa,
    node_base,
    pa_hide,
    pa_product,
    sink_node,
    source_node,
)
from .values import VOID, FiniteDataDomain


# ---------------------------------------------------------------------------
# data-agnostic translations


def gamma_automaton(gamma, ports) -> PortAutomaton:
    """One-state port automaton with a self-loop per interaction."""
    ports = frozenset(ports)
    interactions = gamma.materialize() if isinstance(gamma, GammaSet) else frozenset(
        frozenset(n) for n in gamma
    )
    for n in interactions:
        if not n <= ports:
            raise InteractionOutOfInterface(
                f"interaction {sorted(n)} leaves the interface {sorted(ports)}"
            )
    return PortAutomaton(
        states=frozenset({"q"}),
        initial="q",
        nodes=ports,
        transitions=frozenset(("q", n, "q") for n in interactions),
    )


def component_to_pa(c: BipComponent) -> PortAutomaton:
    """A BIP component read as a port automaton over the same port names."""
    return PortAutomaton(c.states, c.initial, c.ports, frozenset(c.transitions), c.name)


def pa_to_component(a: PortAutomaton, name: str = "") -> BipComponent:
    return BipComponent(a.states, a.initial, a.nodes, frozenset(a.transitions), name or a.name)


def reo_a(arch: BipArchitecture) -> PortAutomaton:
    """Translate an architecture into a port automaton.

    Coordinators are embedded unchanged, composed left to right with the
    interaction-model automaton, and the coordinator ports are hidden.
    """
    acc = None
    for c in arch.coordinators:
        pa = component_to_pa(c)
        acc = pa if acc is None else pa_product(acc, pa)
    gamma_pa = gamma_automaton(arch.gamma, arch.interface)
    acc = gamma_pa if acc is None else pa_product(acc, gamma_pa)
    return pa_hide(acc, arch.coordinator_ports)


def prime_suffix(nodes, avoid=frozenset(), limit: int = 64) -> str:
    """Shortest prime suffix whose application avoids all given names."""
    taken = set(nodes) | set(avoid)
    for k in range(1, limit + 1):
        suffix = "'" * k
        if all(n + suffix not in taken for n in nodes):
            return suffix
    raise PrimeCollision(f"no prime suffix up to length {limit} avoids {len(taken)} names")


def bip_a(a: PortAutomaton, avoid=frozenset(), gamma_bound: int = 16) -> BipArchitecture:
    """Translate a port automaton into an architecture.

    The automaton itself coordinates: its nodes are duplicated by priming,
    the primed copy drives the coordinator, and the interaction model
    synchronizes every node set with its primed copy.  The model is kept
    intensional once the node count makes explicit enumeration wasteful.
    """
    suffix = prime_suffix(a.nodes, avoid)
    prime = lambda n: n + suffix
    primed = frozenset(prime(n) for n in a.nodes)
    coordinator = BipComponent(
        states=a.states,
        initial=a.initial,
        ports=primed,
        transitions=frozenset((q, frozenset(prime(n) for n in lab), t) for q, lab, t in a.transitions),
        name=(a.name or "C") + suffix,
    )
    if len(a.nodes) <= gamma_bound:
        nodes = sorted(a.nodes)
        members = []
        for r in range(len(nodes) + 1):
            for combo in itertools.combinations(nodes, r):
                members.append(frozenset(combo) | frozenset(prime(n) for n in combo))
        gamma = GammaSet(members)
    else:
        gamma = GammaSet.paired_powerset(a.nodes, prime)
    return BipArchitecture(
        coordinators=(coordinator,),
        interface=a.nodes | primed,
        gamma=gamma,
        name=a.name,
    )


# ---------------------------------------------------------------------------
# restricted classes


@dataclass(frozen=True)
class ClassReport:
    subject: str
    cls: str
    member: bool
    violations: tuple[str, ...]

    def __post_init__(self):
        if self.member != (not self.violations):
            raise ValueError("membership flag inconsistent with the violation list")


def in_pa_prime(a: PortAutomaton) -> ClassReport:
    """Empty-labeled transitions must be exactly the self-loops."""
    violations = []
    looped = set()
    for q, label, t in sorted(a.transitions):
        if label:
            continue
        if q == t:
            looped.add(q)
        else:
            violations.append(f"state-changing empty transition {q} -> {t}")
    for q in sorted(a.states - looped):
        violations.append(f"missing empty self-loop at {q}")
    return ClassReport(a.name or "pa", "PA'", not violations, tuple(violations))


def in_arch_prime(arch: BipArchitecture) -> ClassReport:
    """No coordinator may change state on an empty-labeled transition."""
    violations = []
    for i, c in enumerate(arch.coordinators):
        who = c.name or f"coordinator[{i}]"
        for q, label, t in sorted(c.transitions):
            if not label and q != t:
                violations.append(f"{who}: state-changing empty transition {q} -> {t}")
    return ClassReport(arch.name or "arch", "Arch'", not violations, tuple(violations))


def add_empty_selfloops(a: PortAutomaton) -> PortAutomaton:
    """Add an empty self-loop at every state; idempotent."""
    for q, label, t in a.transitions:
        if not label and q != t:
            raise StateChangingEmpty(f"cannot repair empty transition {q} -> {t}")
    loops = frozenset((q, frozenset(), q) for q in a.states)
    return PortAutomaton(a.states, a.initial, a.nodes, a.transitions | loops, a.name)


def decouple_shared_port(
    a1: BipArchitecture, a2: BipArchitecture, port: str
) -> tuple[BipArchitecture, BipArchitecture]:
    """Free a port owned by a coordinator of the first architecture.

    When ``port`` is both a coordinator port of the first architecture and
    an interface port of the second, a fresh dangling port is added to the
    first and synchronized with ``port`` in every interaction containing
    it, and the second architecture renames ``port`` to the fresh name.
    Non-violating pairs are returned unchanged.
    """
    if port not in a1.coordinator_ports or port not in a2.interface:
        return a1, a2
    taken = a1.interface | a2.interface
    fresh = None
    for k in range(1, 65):
        candidate = port + "'" * k
        if candidate not in taken:
            fresh = candidate
            break
    if fresh is None:
        raise FreshNameExhausted(f"no fresh name derived from {port!r} available")
    gamma1 = frozenset(
        n | {fresh} if port in n else n for n in a1.gamma.materialize()
    )
    new_a1 = BipArchitecture(
        coordinators=a1.coordinators,
        interface=a1.interface | {fresh},
        gamma=GammaSet(gamma1),
        name=a1.name,
    )

    def rename(n: str) -> str:
        return fresh if n == port else n

    coords2 = tuple(
        BipComponent(
            states=c.states,
            initial=c.initial,
            ports=frozenset(rename(p) for p in c.ports),
            transitions=frozenset(
                (q, frozenset(rename(p) for p in lab), t) for q, lab, t in c.transitions
            ),
            name=c.name,
        )
        for c in a2.coordinators
    )
    gamma2 = frozenset(frozenset(rename(p) for p in n) for n in a2.gamma.materialize())
    new_a2 = BipArchitecture(
        coordinators=coords2,
        interface=frozenset(rename(p) for p in a2.interface),
        gamma=GammaSet(gamma2),
        name=a2.name,
    )
    return new_a1, new_a2


# ---------------------------------------------------------------------------
# data-sensitive translations


def _top_port_name(n: frozenset[str], g) -> str:
    digest = hashlib.sha256()
    digest.update(",".join(sorted(n)).encode())
    digest.update(b"|")
    digest.update(guard_text(g).encode())
    return "w" + digest.hexdigest()[:10]


def _transition_connector(
    n: frozenset[str],
    g,
    sources: frozenset[str],
    sinks: frozenset[str],
    domain: FiniteDataDomain,
    bound: int | None = None,
) -> SimpleConnector:
    """Simple connector realizing one stateless transition (N, g)."""
    src_in = sorted(n & sources)
    snk_in = sorted(n & sinks)
    bottom = tuple(sorted({node_base(x) for x in n}))
    locals_ = tuple(f"y_{node_base(x)}" for x in snk_in)
    up_ports = [node_base(x) for x in src_in]
    down_ports = [node_base(x) for x in snk_in]

    base_guard = dc.dc_hide(g, set(n) - set(src_in))
    g_src = dc.dc_eliminate_quantifiers(base_guard, domain, bound=bound)
    guard = dc.rename_ports(g_src, {x: node_base(x) for x in src_in})

    up_table: dict[tuple, tuple] = {}
    down_table: dict[tuple, tuple] = {}
    w_fill = domain.values[0]
    for combo in itertools.product(domain.values, repeat=len(src_in)):
        src_vals = dict(zip(src_in, combo))
        outcomes = []
        for snk_combo in itertools.product(domain.values, repeat=len(snk_in)):
            delta = dict(src_vals)
            delta.update(zip(snk_in, snk_combo))
            if dc.dc_eval(g, delta, domain):
                outcomes.append((w_fill,) + snk_combo)
        if not outcomes:
            continue
        key = tuple(
            src_vals[source_node(p)] if p in up_ports else VOID for p in bottom
        )
        up_table[key] = tuple(outcomes)
        for outcome in outcomes:
            if outcome in down_table:
                continue
            snk_vals = dict(zip(snk_in, outcome[1:]))
            down_table[outcome] = tuple(
                snk_vals[sink_node(p)] if p in down_ports else VOID for p in bottom
            )
    return SimpleConnector(
        top=_top_port_name(n, g),
        bottom=bottom,
        locals_=locals_,
        guard=guard,
        up=up_table,
        down=down_table,
        domains={p: domain for p in bottom},
    )


def bip_b(pca: PolarizedCA, bound: int | None = None) -> InteractionModel:
    """Translate a stateless polarized automaton into an interaction model.

    Mixed nodes are hidden first; every remaining transition label becomes
    one simple connector whose up relation enumerates the solutions of the
    data constraint for each source assignment.
    """
    if len(pca.automaton.states) != 1:
        raise NotStateless("only stateless automata translate to interaction models")
    hidden = ca_hide(pca.automaton, pca.mixed)
    connectors = []
    for _, n, g, _ in sorted(hidden.transitions, key=lambda t: (sorted(t[1]), guard_text(t[2]))):
        connectors.append(
            _transition_connector(n, g, pca.sources, pca.sinks, hidden.domain, bound)
        )
    return InteractionModel(tuple(connectors), name=pca.name)


def _connector_transition(alpha: SimpleConnector, d_gamma) -> tuple[frozenset[str], DataConstraint]:
    """Node set and guard of the transition encoding one connector."""
    n = frozenset(source_node(p) for p in alpha.up_ports()) | frozenset(
        sink_node(p) for p in alpha.down_ports()
    )
    flows = delta_alpha(alpha, sorted(alpha.bottom), d_gamma)
    guard = dc.solutions_constraint(flow.restrict(n) for flow in flows)
    return n, guard


def reo_b(model: InteractionModel) -> PolarizedCA:
    """Translate an interaction model into a stateless polarized automaton.

    Every connector yields one self-loop whose firing set covers the ports
    it moves data through and whose guard is the canonical disjunction of
    its dataflows.
    """
    ports = sorted(model.ports)
    sources = frozenset(source_node(p) for p in ports)
    sinks = frozenset(sink_node(p) for p in ports)
    values = model.domain_values()
    domain = FiniteDataDomain("D", values) if values else FiniteDataDomain("D", (0,))
    transitions = set()
    for alpha in model.connectors:
        n, guard = _connector_transition(alpha, domain if values else None)
        transitions.add(("q", n, guard, "q"))
    automaton = ConstraintAutomaton(
        states=frozenset({"q"}),
        initial="q",
        nodes=sources | sinks,
        domain=domain,
        transitions=frozenset(transitions),
        name=model.name,
    )
    return PolarizedCA(automaton, sources, frozenset(), sinks, name=model.name)


# ---------------------------------------------------------------------------
# theorem checks


@dataclass(frozen=True)
class TheoremVerdict:
    """Structured outcome of one preservation or compositionality check."""

    theorem: str
    applicable: bool
    holds: bool
    reasons: tuple[str, ...] = ()
    witnesses: tuple[BisimulationWitness, ...] = field(default=(), compare=False)
    details: tuple[tuple[str, object], ...] = ()

    def __bool__(self):
        return self.applicable and self.holds


def _verdict(theorem, checks, reasons=(), details=()):
    witnesses = tuple(w for _, w in checks if w is not None)
    holds = all(ok for ok, _ in checks)
    return TheoremVerdict(
        theorem=theorem,
        applicable=True,
        holds=holds,
        reasons=tuple(reasons),
        witnesses=witnesses,
        details=tuple(details),
    )


def _inapplicable(theorem, reasons):
    return TheoremVerdict(theorem, False, False, tuple(reasons))


def check_commutation_pa(a: PortAutomaton) -> TheoremVerdict:
    """Round trip through BIP preserves a port automaton's behaviour."""
    report = in_pa_prime(a)
    if not report.member:
        return _inapplicable("theorem-1-pa", report.violations)
    witness = bisimilar(interpret_arch(bip_a(a)), interpret_pa(a))
    return _verdict("theorem-1-pa", [(witness is not None, witness)])


def check_commutation_arch(arch: BipArchitecture) -> TheoremVerdict:
    """Round trip through Reo preserves an architecture's behaviour."""
    report = in_arch_prime(arch)
    if not report.member:
        return _inapplicable("theorem-1-arch", report.violations)
    witness = bisimilar(interpret_pa(reo_a(arch)), interpret_arch(arch))
    return _verdict("theorem-1-arch", [(witness is not None, witness)])


def check_theorem_1(a: PortAutomaton, arch: BipArchitecture) -> TheoremVerdict:
    left = check_commutation_pa(a)
    right = check_commutation_arch(arch)
    if not left.applicable or not right.applicable:
        return _inapplicable("theorem-1", left.reasons + right.reasons)
    return TheoremVerdict(
        "theorem-1",
        True,
        left.holds and right.holds,
        (),
        left.witnesses + right.witnesses,
    )


def _composition_side_conditions(a1: BipArchitecture, a2: BipArchitecture) -> list[str]:
    reasons = []
    if a1.coordinator_ports & a2.interface:
        reasons.append(
            f"coordinator ports of the first architecture meet the second interface: "
            f"{sorted(a1.coordinator_ports & a2.interface)}"
        )
    if a2.coordinator_ports & a1.interface:
        reasons.append(
            f"coordinator ports of the second architecture meet the first interface: "
            f"{sorted(a2.coordinator_ports & a1.interface)}"
        )
    if frozenset() not in a1.gamma:
        reasons.append("first interaction model lacks the empty interaction")
    if frozenset() not in a2.gamma:
        reasons.append("second interaction model lacks the empty interaction")
    return reasons


def check_lemma_1(a1: BipArchitecture, a2: BipArchitecture) -> TheoremVerdict:
    """Interaction-model encoding commutes with composition."""
    reasons = []
    if a1.coordinator_ports & a2.coordinator_ports:
        reasons.append("coordinator port sets overlap")
    if frozenset() not in a1.gamma:
        reasons.append("first interaction model lacks the empty interaction")
    if frozenset() not in a2.gamma:
        reasons.append("second interaction model lacks the empty interaction")
    if reasons:
        return _inapplicable("lemma-1", reasons)
    combined = arch_compose(a1, a2)
    left = interpret_pa(gamma_automaton(combined.gamma, combined.interface))
    right = interpret_pa(
        pa_product(
            gamma_automaton(a1.gamma, a1.interface),
            gamma_automaton(a2.gamma, a2.interface),
        )
    )
    witness = bisimilar(left, right)
    return _verdict("lemma-1", [(witness is not None, witness)])


def check_theorem_2(a1: BipArchitecture, a2: BipArchitecture) -> TheoremVerdict:
    """Architecture-to-automaton translation distributes over composition."""
    reasons = _composition_side_conditions(a1, a2)
    for arch in (a1, a2):
        report = in_arch_prime(arch)
        if not report.member:
            reasons.extend(report.violations)
    if reasons:
        return _inapplicable("theorem-2", reasons)
    left = interpret_pa(reo_a(arch_compose(a1, a2)))
    right = interpret_pa(pa_product(reo_a(a1), reo_a(a2)))
    witness = bisimilar(left, right)
    return _verdict("theorem-2", [(witness is not None, witness)])


def check_theorem_3(p1: PortAutomaton, p2: PortAutomaton) -> TheoremVerdict:
    """Automaton-to-architecture translation distributes over composition."""
    reasons = []
    for a in (p1, p2):
        report = in_pa_prime(a)
        if not report.member:
            reasons.extend(f"{report.subject}: {v}" for v in report.violations)
    if reasons:
        return _inapplicable("theorem-3", reasons)
    b1 = bip_a(p1)
    b2 = bip_a(p2, avoid=b1.interface)
    left = interpret_arch(arch_compose(b1, b2))
    right = interpret_arch(bip_a(pa_product(p1, p2)))
    witness = bisimilar(left, right)
    return _verdict("theorem-3", [(witness is not None, witness)])


def transition_flow_equalities(pca: PolarizedCA, bound: int | None = None):
    """Per-transition comparison of automaton and connector dataflow sets."""
    hidden = ca_hide(pca.automaton, pca.mixed)
    model = bip_b(pca, bound)
    ports = sorted(model.ports)
    two_p = model.duplicated_ports()
    domain = hidden.domain
    results = []
    for _, n, g, _ in sorted(hidden.transitions, key=lambda t: (sorted(t[1]), guard_text(t[2]))):
        alpha = _transition_connector(n, g, pca.sources, pca.sinks, domain, bound)
        automaton_side = dc.delta_set(n, g, two_p, domain, bound=bound)
        connector_side = delta_alpha(alpha, ports, domain)
        results.append((n, automaton_side == connector_side))
    return results


def connector_flow_equalities(model: InteractionModel, bound: int | None = None):
    """Per-connector comparison of connector and automaton dataflow sets."""
    ports = sorted(model.ports)
    values = model.domain_values()
    domain = FiniteDataDomain("D", values) if values else None
    results = []
    for alpha in model.connectors:
        n, guard = _connector_transition(alpha, domain)
        connector_side = delta_alpha(alpha, ports, domain)
        automaton_side = dc.delta_set(n, guard, model.duplicated_ports(), domain, bound=bound)
        results.append((alpha.top, automaton_side == connector_side))
    return results


def check_theorem_4_ca(pca: PolarizedCA, bound: int | None = None) -> TheoremVerdict:
    """Automaton-to-model translation preserves the dataflow semantics."""
    identical = lts_identical(interpret_im(bip_b(pca, bound)), interpret_ca(pca, bound))
    per_transition = transition_flow_equalities(pca, bound)
    checks = [(identical, None)] + [(ok, None) for _, ok in per_transition]
    details = tuple((f"transition {sorted(n)}", ok) for n, ok in per_transition)
    return _verdict("theorem-4-ca", checks, details=details)


def check_theorem_4_im(model: InteractionModel, bound: int | None = None) -> TheoremVerdict:
    """Model-to-automaton translation preserves the dataflow semantics."""
    identical = lts_identical(interpret_ca(reo_b(model), bound), interpret_im(model))
    per_connector = connector_flow_equalities(model, bound)
    checks = [(identical, None)] + [(ok, None) for _, ok in per_connector]
    details = tuple((f"connector {top}", ok) for top, ok in per_connector)
    return _verdict("theorem-4-im", checks, details=details)
