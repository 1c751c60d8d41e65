"""Data values, assignments and finite data domains.

Ports exchange data items drawn from a finite domain.  The distinguished
value ``VOID`` marks the absence of dataflow at a port; it belongs to no
domain.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

DEFAULT_ENUM_BOUND = 10 ** 6
ENUM_BOUND_ENV = "COORDBRIDGE_ENUM_BOUND"


class _Void:
    """Singleton marker for "no data observed at this port"."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "VOID"

    def __str__(self):
        return "-"

    def __reduce__(self):
        return (_Void, ())


VOID = _Void()

Datum = Union[int, str]
#: A datum or the VOID marker.
MaybeDatum = Union[int, str, _Void]


def datum_key(value: MaybeDatum):
    """Total, deterministic sort key over mixed-type data values."""
    if value is VOID:
        return (0, "")
    return (1, type(value).__name__, repr(value))


def enumeration_bound() -> int:
    """Candidate bound for exhaustive enumerations (env-overridable)."""
    raw = os.environ.get(ENUM_BOUND_ENV)
    if raw is None:
        return DEFAULT_ENUM_BOUND
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_ENUM_BOUND


@dataclass(frozen=True)
class FiniteDataDomain:
    """A named, ordered finite set of data items."""

    name: str
    values: tuple[Datum, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError(f"domain {self.name!r} must be nonempty")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"domain {self.name!r} has duplicate values")
        if any(v is VOID for v in self.values):
            raise ValueError("VOID cannot be a domain value")

    def __contains__(self, value) -> bool:
        return value in self.values

    def __len__(self) -> int:
        return len(self.values)


def domain_union(domains: Iterable[FiniteDataDomain], name: str = "D") -> FiniteDataDomain:
    """Union of several domains, keeping first-occurrence order."""
    seen: dict[Datum, None] = {}
    for dom in domains:
        for v in dom.values:
            seen.setdefault(v, None)
    if not seen:
        raise ValueError("union of no domains is empty")
    return FiniteDataDomain(name, tuple(seen))


@dataclass(frozen=True)
class Assignment:
    """An immutable map from port names to data values (or VOID).

    Items are stored sorted by port name, so equal assignments compare and
    hash equal regardless of construction order.
    """

    items: tuple[tuple[str, MaybeDatum], ...]

    @staticmethod
    def of(mapping: Mapping[str, MaybeDatum] | Iterable[tuple[str, MaybeDatum]]) -> "Assignment":
        pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
        return Assignment(tuple(sorted(pairs, key=lambda kv: kv[0])))

    def __getitem__(self, port: str) -> MaybeDatum:
        for name, value in self.items:
            if name == port:
                return value
        raise KeyError(port)

    def get(self, port: str, default=None):
        for name, value in self.items:
            if name == port:
                return value
        return default

    def __contains__(self, port: str) -> bool:
        return any(name == port for name, _ in self.items)

    def ports(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.items)

    def as_dict(self) -> dict[str, MaybeDatum]:
        return dict(self.items)

    def restrict(self, ports: Iterable[str]) -> "Assignment":
        keep = set(ports)
        return Assignment(tuple(p for p in self.items if p[0] in keep))

    def merged(self, other: "Assignment") -> "Assignment":
        out = self.as_dict()
        out.update(other.as_dict())
        return Assignment.of(out)

    def sort_key(self):
        return tuple((name, datum_key(value)) for name, value in self.items)

    def __str__(self):
        body = ",".join(f"{name}={value}" for name, value in self.items)
        return "{" + body + "}"
