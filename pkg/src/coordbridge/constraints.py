"""Finite-domain data constraints over port variables.

The constraint language has top, negation, conjunction, existential
quantification of a port variable and equality with a constant, relaxed
with port-to-port equality, set membership and application of named
finite functions.  Satisfaction is decided by direct evaluation; all
solution-space operations enumerate the finite domain.

A port carrying VOID fails every atomic predicate that mentions it, so
constraints are total on partial dataflows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import DomainTooLarge, UnboundPort
from .values import (
    VOID,
    Assignment,
    Datum,
    FiniteDataDomain,
    datum_key,
    enumeration_bound,
)


class DataConstraint:
    """Base class of the constraint AST."""

    __slots__ = ()


@dataclass(frozen=True)
class Top(DataConstraint):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Not(DataConstraint):
    operand: DataConstraint

    def __str__(self):
        return f"!({self.operand})"


@dataclass(frozen=True)
class And(DataConstraint):
    left: DataConstraint
    right: DataConstraint

    def __str__(self):
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class Exists(DataConstraint):
    port: str
    operand: DataConstraint

    def __str__(self):
        return f"(exists {self.port}. {self.operand})"


@dataclass(frozen=True)
class EqConst(DataConstraint):
    port: str
    value: Datum

    def __str__(self):
        return f"d[{self.port}]=={self.value}"


@dataclass(frozen=True)
class EqPort(DataConstraint):
    left: str
    right: str

    def __str__(self):
        return f"d[{self.left}]==d[{self.right}]"


@dataclass(frozen=True)
class InSet(DataConstraint):
    port: str
    values: tuple[Datum, ...]

    def __str__(self):
        body = ",".join(str(v) for v in self.values)
        return f"d[{self.port}] in {{{body}}}"


@dataclass(frozen=True)
class FunEq(DataConstraint):
    """d[port] equals function(args); the function is looked up by name."""

    port: str
    function: str
    args: tuple[str, ...]

    def __str__(self):
        return f"{self.function}({','.join(self.args)})==d[{self.port}]"


TOP = Top()
BOTTOM = Not(TOP)


def dc_and(*constraints: DataConstraint) -> DataConstraint:
    """Conjunction that drops redundant Top operands."""
    useful = [g for g in constraints if g != TOP]
    if not useful:
        return TOP
    out = useful[0]
    for g in useful[1:]:
        out = And(out, g)
    return out


def dc_or(*constraints: DataConstraint) -> DataConstraint:
    """Disjunction, derived as the negated conjunction of negations."""
    if not constraints:
        return BOTTOM
    if len(constraints) == 1:
        return constraints[0]
    negated = [Not(g) for g in constraints]
    conj = negated[0]
    for g in negated[1:]:
        conj = And(conj, g)
    return Not(conj)


def dc_not(constraint: DataConstraint) -> DataConstraint:
    return Not(constraint)


def free_ports(g: DataConstraint) -> frozenset[str]:
    """Ports occurring in ``g`` outside any enclosing binder."""
    if isinstance(g, Top):
        return frozenset()
    if isinstance(g, Not):
        return free_ports(g.operand)
    if isinstance(g, And):
        return free_ports(g.left) | free_ports(g.right)
    if isinstance(g, Exists):
        return free_ports(g.operand) - {g.port}
    if isinstance(g, EqConst):
        return frozenset({g.port})
    if isinstance(g, EqPort):
        return frozenset({g.left, g.right})
    if isinstance(g, InSet):
        return frozenset({g.port})
    if isinstance(g, FunEq):
        return frozenset({g.port, *g.args})
    raise TypeError(f"not a data constraint: {g!r}")


def rename_ports(g: DataConstraint, mapping: Mapping[str, str]) -> DataConstraint:
    """Rename free port occurrences; bound occurrences are left alone."""
    if isinstance(g, Top):
        return g
    if isinstance(g, Not):
        return Not(rename_ports(g.operand, mapping))
    if isinstance(g, And):
        return And(rename_ports(g.left, mapping), rename_ports(g.right, mapping))
    if isinstance(g, Exists):
        inner = {k: v for k, v in mapping.items() if k != g.port}
        if g.port in inner.values():
            raise ValueError(f"renaming would capture binder {g.port!r}")
        return Exists(g.port, rename_ports(g.operand, inner))
    if isinstance(g, EqConst):
        return EqConst(mapping.get(g.port, g.port), g.value)
    if isinstance(g, EqPort):
        return EqPort(mapping.get(g.left, g.left), mapping.get(g.right, g.right))
    if isinstance(g, InSet):
        return InSet(mapping.get(g.port, g.port), g.values)
    if isinstance(g, FunEq):
        return FunEq(
            mapping.get(g.port, g.port),
            g.function,
            tuple(mapping.get(a, a) for a in g.args),
        )
    raise TypeError(f"not a data constraint: {g!r}")


FunctionImpl = Callable[..., Datum]

#: Named finite functions usable in FunEq constraints.  New entries may be
#: registered at setup time; lookups treat the table as read-only.
DEFAULT_FUNCTIONS: dict[str, FunctionImpl] = {
    "max": lambda *xs: max(xs),
    "min": lambda *xs: min(xs),
    "id": lambda x: x,
}


def register_function(name: str, impl: FunctionImpl) -> None:
    DEFAULT_FUNCTIONS[name] = impl


def apply_function(name: str, args, functions=None) -> Datum:
    """Look a function up (callable or value table) and apply it."""
    table = DEFAULT_FUNCTIONS if functions is None else functions
    try:
        impl = table[name]
    except KeyError:
        raise UnboundPort(f"unknown function {name!r}") from None
    if callable(impl):
        return impl(*args)
    return impl[tuple(args)]


def _lookup(delta: Mapping, port: str):
    try:
        return delta[port]
    except KeyError:
        raise UnboundPort(f"port {port!r} not covered by the assignment") from None


def _eval(g: DataConstraint, delta: dict, dom, functions) -> bool:
    if isinstance(g, Top):
        return True
    if isinstance(g, Not):
        return not _eval(g.operand, delta, dom, functions)
    if isinstance(g, And):
        return _eval(g.left, delta, dom, functions) and _eval(g.right, delta, dom, functions)
    if isinstance(g, Exists):
        if dom is None:
            raise ValueError("evaluating an Exists constraint needs a data domain")
        saved = delta.get(g.port, _MISSING)
        try:
            for v in dom.values:
                delta[g.port] = v
                if _eval(g.operand, delta, dom, functions):
                    return True
            return False
        finally:
            if saved is _MISSING:
                delta.pop(g.port, None)
            else:
                delta[g.port] = saved
    if isinstance(g, EqConst):
        v = _lookup(delta, g.port)
        return v is not VOID and v == g.value
    if isinstance(g, EqPort):
        a = _lookup(delta, g.left)
        b = _lookup(delta, g.right)
        return a is not VOID and b is not VOID and a == b
    if isinstance(g, InSet):
        v = _lookup(delta, g.port)
        return v is not VOID and v in g.values
    if isinstance(g, FunEq):
        target = _lookup(delta, g.port)
        if target is VOID:
            return False
        args = [_lookup(delta, a) for a in g.args]
        if any(a is VOID for a in args):
            return False
        return apply_function(g.function, args, functions) == target
    raise TypeError(f"not a data constraint: {g!r}")


_MISSING = object()


def dc_eval(
    g: DataConstraint,
    delta: Assignment | Mapping,
    dom: FiniteDataDomain | None = None,
    functions: Mapping[str, FunctionImpl] | None = None,
) -> bool:
    """Decide whether the assignment satisfies the constraint.

    ``dom`` is only needed when ``g`` contains quantifiers.  Raises
    UnboundPort when a free port of ``g`` is missing from ``delta``.
    """
    if isinstance(delta, Assignment):
        delta = delta.as_dict()
    else:
        delta = dict(delta)
    return _eval(g, delta, dom, functions)


def _check_bound(n_candidates: int, bound: int | None) -> None:
    limit = enumeration_bound() if bound is None else bound
    if n_candidates > limit:
        raise DomainTooLarge(
            f"{n_candidates} candidate assignments exceed the bound of {limit}"
        )


def dc_solutions(
    nodes: Iterable[str],
    g: DataConstraint,
    dom: FiniteDataDomain,
    functions: Mapping[str, FunctionImpl] | None = None,
    bound: int | None = None,
) -> frozenset[Assignment]:
    """All assignments of domain values to ``nodes`` satisfying ``g``."""
    names = sorted(set(nodes))
    missing = free_ports(g) - set(names)
    if missing:
        raise UnboundPort(f"free ports {sorted(missing)} outside the node set")
    _check_bound(len(dom.values) ** len(names), bound)
    out = []
    for combo in itertools.product(dom.values, repeat=len(names)):
        delta = dict(zip(names, combo))
        if _eval(g, delta, dom, functions):
            out.append(Assignment.of(delta))
    return frozenset(out)


def delta_set(
    n: Iterable[str],
    g: DataConstraint,
    two_p: Iterable[str],
    dom: FiniteDataDomain,
    functions: Mapping[str, FunctionImpl] | None = None,
    bound: int | None = None,
) -> frozenset[Assignment]:
    """Total assignments over ``two_p`` realizing a transition labeled (n, g).

    Firing ports ``n`` carry domain values, every other port carries VOID,
    and the whole assignment satisfies ``g``.
    """
    firing = sorted(set(n))
    universe = set(two_p)
    stray = set(firing) - universe
    if stray:
        raise ValueError(f"firing ports {sorted(stray)} outside the duplicated port set")
    _check_bound(len(dom.values) ** len(firing), bound)
    silent = {p: VOID for p in universe - set(firing)}
    out = []
    for combo in itertools.product(dom.values, repeat=len(firing)):
        delta = dict(zip(firing, combo))
        delta.update(silent)
        if _eval(g, delta, dom, functions):
            out.append(Assignment.of(delta))
    return frozenset(out)


def dc_hide(g: DataConstraint, ports: Iterable[str]) -> DataConstraint:
    """Existentially quantify the given ports in ``g``."""
    out = g
    for p in sorted(set(ports), reverse=True):
        out = Exists(p, out)
    return out


def dc_equivalent(
    g1: DataConstraint,
    g2: DataConstraint,
    nodes: Iterable[str],
    dom: FiniteDataDomain,
    functions: Mapping[str, FunctionImpl] | None = None,
    bound: int | None = None,
) -> bool:
    """True iff both constraints admit the same solutions over ``nodes``."""
    a = dc_solutions(nodes, g1, dom, functions, bound)
    b = dc_solutions(nodes, g2, dom, functions, bound)
    return a == b


def assignment_constraint(delta: Assignment) -> DataConstraint:
    """The conjunction of equalities pinning exactly this assignment."""
    conjuncts = [
        EqConst(port, value)
        for port, value in delta.items
        if value is not VOID
    ]
    return dc_and(*conjuncts) if conjuncts else TOP


def solutions_constraint(solutions: Iterable[Assignment]) -> DataConstraint:
    """Canonical disjunction of full assignments."""
    ordered = sorted(solutions, key=lambda a: a.sort_key())
    return dc_or(*[assignment_constraint(d) for d in ordered])


def dc_eliminate_quantifiers(
    g: DataConstraint,
    dom: FiniteDataDomain,
    functions: Mapping[str, FunctionImpl] | None = None,
    bound: int | None = None,
) -> DataConstraint:
    """Quantifier-free constraint with the same solutions over free ports.

    Realized by enumeration into a canonical disjunction of full
    assignments; closed constraints collapse to Top or its negation.
    """
    names = sorted(free_ports(g))
    if not names:
        return TOP if _eval(g, {}, dom, functions) else BOTTOM
    sols = dc_solutions(names, g, dom, functions, bound)
    return solutions_constraint(sols)


def guard_text(g: DataConstraint) -> str:
    """Deterministic textual form of a guard (used for hashing and DSL output)."""
    return str(g)


def datum_sort_key(value):
    return datum_key(value)
