"""Data-sensitive BIP: interaction expressions and interaction models.

A simple connector owns one top port and a set of bottom ports.  When it
fires, the values offered at the bottom ports flow upward through a
relation into the top port and local variables, and the downward function
redistributes values to the bottom ports.  Up relations and down
functions are kept extensionally, as finite tables, which makes the
induced dataflow set directly enumerable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union

from . import constraints as dc
from .constraints import DataConstraint, TOP, free_ports
from .errors import DomainTooLarge, NotSimple
from .lts import AssignmentAlphabet, LabeledTransitionSystem
from .values import (
    VOID,
    Assignment,
    FiniteDataDomain,
    MaybeDatum,
    domain_union,
    enumeration_bound,
)
from .reo import sink_node, source_node

UpKey = tuple  # values aligned with the bottom port tuple; VOID allowed
Outcome = tuple  # values aligned with (top,) + locals
TransferFn = Callable[[dict], Union[dict, Iterable[dict]]]


@dataclass(frozen=True)
class InteractionExpression:
    """General interaction expression, kept only for validation and storage."""

    top: frozenset[str]
    bottom: frozenset[str]
    locals_: frozenset[str]
    guard: DataConstraint
    up_reads: frozenset[str]
    up: TransferFn
    down: TransferFn
    domains: Mapping[str, FiniteDataDomain]


@dataclass(frozen=True)
class SimpleConnector:
    """A single-top-port interaction expression with extensional transfers.

    ``up`` maps each admissible bottom assignment (a value tuple aligned
    with ``bottom``, VOID marking ports that offer no data) to one or more
    outcomes over the top port and locals.  ``down`` maps an outcome to
    the values written back to the bottom ports, VOID where nothing is
    written.
    """

    top: str
    bottom: tuple[str, ...]
    locals_: tuple[str, ...]
    guard: DataConstraint
    up: dict[UpKey, tuple[Outcome, ...]]
    down: dict[Outcome, tuple]
    domains: dict[str, FiniteDataDomain]

    def __post_init__(self):
        if self.top in self.bottom:
            raise NotSimple([f"top port {self.top!r} is also a bottom port"])
        if tuple(sorted(self.bottom)) != self.bottom:
            raise ValueError("bottom ports must be sorted")
        loose = free_ports(self.guard) - set(self.bottom)
        if loose:
            raise NotSimple([f"guard reads non-bottom variables {sorted(loose)}"])

    def up_ports(self) -> frozenset[str]:
        """Bottom ports that offer data upward (non-VOID in some up key).

        A connector whose up relation is empty can never fire, but it still
        spans its whole support structurally.
        """
        if not self.up:
            return frozenset(self.bottom)
        used = set()
        for key in self.up:
            for port, value in zip(self.bottom, key):
                if value is not VOID:
                    used.add(port)
        return frozenset(used)

    def down_ports(self) -> frozenset[str]:
        """Bottom ports that receive data downward."""
        if not self.up:
            return frozenset(self.bottom)
        used = set()
        for values in self.down.values():
            for port, value in zip(self.bottom, values):
                if value is not VOID:
                    used.add(port)
        return frozenset(used)

    def eval_domain(self) -> FiniteDataDomain:
        return domain_union(
            (self.domains[p] for p in self.bottom), name="D"
        ) if self.bottom else FiniteDataDomain("D", (0,))


def _normalize_outcomes(raw, slots: tuple[str, ...]) -> tuple[Outcome, ...]:
    if isinstance(raw, Mapping):
        raw = [raw]
    outcomes = []
    for entry in raw:
        outcomes.append(tuple(entry.get(s, VOID) for s in slots))
    return tuple(outcomes)


def connector_from_functions(
    top: str,
    bottom: Iterable[str],
    guard: DataConstraint,
    up: TransferFn,
    down: TransferFn,
    domains: Mapping[str, FiniteDataDomain],
    locals_: Iterable[str] = (),
    bound: int | None = None,
) -> SimpleConnector:
    """Tabulate callable transfers pointwise over the bottom-port domains.

    The up table is keyed by every guard-satisfying assignment of data to
    all bottom ports; such a connector fires atomically on its whole
    support.
    """
    bottom = tuple(sorted(bottom))
    locals_ = tuple(sorted(locals_))
    slots = (top,) + locals_
    doms = {p: domains[p] for p in bottom}
    union = domain_union(doms.values(), "D") if bottom else None
    limit = enumeration_bound() if bound is None else bound
    n_keys = 1
    for p in bottom:
        n_keys *= len(doms[p].values)
    if n_keys > limit:
        raise DomainTooLarge(f"{n_keys} bottom assignments exceed the bound of {limit}")
    up_table: dict[UpKey, tuple[Outcome, ...]] = {}
    down_table: dict[Outcome, tuple] = {}
    for combo in itertools.product(*(doms[p].values for p in bottom)):
        bottom_values = dict(zip(bottom, combo))
        if not dc.dc_eval(guard, bottom_values, union):
            continue
        outcomes = _normalize_outcomes(up(bottom_values), slots)
        if not outcomes:
            continue
        up_table[combo] = outcomes
        for outcome in outcomes:
            if outcome in down_table:
                continue
            written = down(dict(zip(slots, outcome)))
            down_table[outcome] = tuple(written.get(p, VOID) for p in bottom)
    return SimpleConnector(top, bottom, locals_, guard, up_table, down_table, dict(doms))


def validate_simple(expr: InteractionExpression) -> SimpleConnector:
    """Checked downcast of an interaction expression to a simple connector."""
    reasons = []
    if len(expr.top) != 1:
        reasons.append(f"expected a single top port, got {sorted(expr.top)}")
    top = next(iter(sorted(expr.top)), "")
    if top in expr.bottom:
        reasons.append(f"top port {top!r} occurs among the bottom ports")
    guard_locals = free_ports(expr.guard) & expr.locals_
    if guard_locals:
        reasons.append(f"guard involves local variables {sorted(guard_locals)}")
    up_locals = expr.up_reads & expr.locals_
    if up_locals:
        reasons.append(f"upward transfer involves local variables {sorted(up_locals)}")
    stray = (free_ports(expr.guard) | expr.up_reads) - expr.bottom - expr.locals_
    if stray:
        reasons.append(f"reads from outside the bottom ports: {sorted(stray)}")
    if reasons:
        raise NotSimple(reasons)
    return connector_from_functions(
        top,
        expr.bottom,
        expr.guard,
        expr.up,
        expr.down,
        expr.domains,
        locals_=expr.locals_,
    )


@dataclass(frozen=True)
class InteractionModel:
    """A set of simple connectors with pairwise distinct top ports."""

    connectors: tuple[SimpleConnector, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.connectors, key=lambda c: c.top))
        object.__setattr__(self, "connectors", ordered)
        tops = [c.top for c in ordered]
        if len(set(tops)) != len(tops):
            raise ValueError(f"duplicate top ports in the interaction model: {tops}")
        domains: dict[str, FiniteDataDomain] = {}
        for c in ordered:
            for p, dom in c.domains.items():
                if p in domains and domains[p] != dom:
                    raise ValueError(f"port {p!r} declared with two different domains")
                domains[p] = dom

    @property
    def ports(self) -> frozenset[str]:
        out: set[str] = set()
        for c in self.connectors:
            out.update(c.bottom)
        return frozenset(out)

    def domain_values(self) -> tuple:
        seen: dict = {}
        for c in self.connectors:
            for p in c.bottom:
                for v in c.domains[p].values:
                    seen.setdefault(v, None)
        return tuple(seen)

    def data_domain(self) -> FiniteDataDomain:
        values = self.domain_values()
        if not values:
            raise ValueError("an empty interaction model has no data domain")
        return FiniteDataDomain("D", values)

    def duplicated_ports(self) -> frozenset[str]:
        return frozenset(source_node(p) for p in self.ports) | frozenset(
            sink_node(p) for p in self.ports
        )


def delta_alpha(
    alpha: SimpleConnector,
    p_gamma: Iterable[str],
    d_gamma: FiniteDataDomain | None = None,
) -> frozenset[Assignment]:
    """All dataflows of one connector, as total assignments over 2P.

    Ports outside the connector's support carry VOID.  A dataflow pairs an
    up-table entry whose bottom values satisfy the guard with the downward
    values of one of its outcomes; values outside a port's own domain are
    excluded.
    """
    ports = sorted(set(p_gamma))
    if not set(alpha.bottom) <= set(ports):
        raise ValueError(
            f"connector ports {sorted(set(alpha.bottom) - set(ports))} outside the model"
        )
    silent = {}
    for p in ports:
        if p not in alpha.bottom:
            silent[source_node(p)] = VOID
            silent[sink_node(p)] = VOID
    eval_dom = d_gamma if d_gamma is not None else (
        alpha.eval_domain() if alpha.bottom else None
    )

    def typed(port: str, value: MaybeDatum) -> bool:
        return value is VOID or value in alpha.domains[port]

    out = []
    for key, outcomes in alpha.up.items():
        up_values = dict(zip(alpha.bottom, key))
        if not all(typed(p, v) for p, v in up_values.items()):
            continue
        if not dc.dc_eval(alpha.guard, up_values, eval_dom):
            continue
        for outcome in outcomes:
            written = alpha.down.get(outcome)
            if written is None:
                continue
            down_values = dict(zip(alpha.bottom, written))
            if not all(typed(p, v) for p, v in down_values.items()):
                continue
            delta = dict(silent)
            for p in alpha.bottom:
                delta[source_node(p)] = up_values[p]
                delta[sink_node(p)] = down_values[p]
            out.append(Assignment.of(delta))
    return frozenset(out)


def interpret_im(model: InteractionModel) -> LabeledTransitionSystem:
    """Single-state system whose labels are all dataflows of the model."""
    ports = model.ports
    values = model.domain_values()
    two_p = model.duplicated_ports()
    d_gamma = FiniteDataDomain("D", values) if values else None
    labels: set[Assignment] = set()
    for alpha in model.connectors:
        labels |= delta_alpha(alpha, ports, d_gamma)
    return LabeledTransitionSystem(
        states=frozenset({"q"}),
        initial="q",
        alphabet=AssignmentAlphabet(two_p, values),
        transitions=frozenset(("q", delta, "q") for delta in labels),
        name=model.name,
    )


def max_connector(domain: FiniteDataDomain, a: str = "a", b: str = "b", top: str = "w") -> SimpleConnector:
    """Connector that reads two values and hands the maximum back to both."""
    return connector_from_functions(
        top,
        (a, b),
        TOP,
        up=lambda v: {"l": max(v[a], v[b])},
        down=lambda o: {a: o["l"], b: o["l"]},
        domains={a: domain, b: domain},
        locals_=("l",),
    )


def identity_connector(domain: FiniteDataDomain, port: str = "p", top: str = "w") -> SimpleConnector:
    """Connector that passes a single port's value through the top port."""
    return connector_from_functions(
        top,
        (port,),
        TOP,
        up=lambda v: {top: v[port]},
        down=lambda o: {port: o[top]},
        domains={port: domain},
    )
