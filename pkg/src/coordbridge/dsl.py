"""Textual surface syntax for the five model kinds.

A document is ``<kind> <name> { ...statements... }`` where kind is one of
``pa``, ``ca``, ``component``, ``arch`` or ``im``.  Statements end with a
semicolon and ``#`` starts a line comment.  Examples:

    pa Alternator {
      nodes b, f;
      states s0*, s1;
      s0 -{b}-> s1;
      s1 -{f}-> s0;
    }

    ca Wire {
      domain D = {0, 1};
      nodes a*, b_*;
      states q*;
      q -{a*,b_*} | d[a*]==d[b_*] -> q;
    }

    arch Mutex {
      component C { ports t; states free*, taken; free -{t}-> taken; }
      interface t, u;
      gamma {}, {t,u};
    }

    im Max {
      domain D = {0, 1, 2};
      conn w <- {a, b} locals l | guard: true up: l := max(a, b)
        down: a := l, b := l;
    }

A star suffix in a ``states`` declaration marks the initial state.  Node
polarity uses name suffixes: ``p*`` is a source (input) node and ``p_*``
a sink (output) node.  Data values are decimal integers or identifiers;
``-`` denotes the absence of data in transfer tables.  Upward and
downward transfers are written either as assignments evaluated pointwise
over the domain or as explicit ``table { key -> out | ... }`` entries.

Serialization is canonical (sorted states, ports, labels and entries), so
equal models print byte-identically, and parsing a serialized document
reproduces it structurally.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable

from . import constraints as dc
from .bip import BipArchitecture, BipComponent, GammaSet
from .constraints import DataConstraint
from .errors import CoordBridgeError, DslError
from .interactions import InteractionModel, SimpleConnector
from .lts import LabeledTransitionSystem, format_label
from .reo import ConstraintAutomaton, PolarizedCA, PortAutomaton
from .values import VOID, FiniteDataDomain

KINDS = ("pa", "ca", "component", "arch", "im")

FILE_EXTENSION = ".coord"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int
    offset: int
    length: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class ModelDocument:
    kind: str
    name: str
    model: object


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<comment>\#[^\n]*)
  | (?P<ws>\s+)
  | (?P<sym2>->|<-|:=|==|&&|-\{)
  | (?P<ident>[A-Za-z0-9_*']+)
  | (?P<sym1>[{}()\[\];,.|!=:-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym" or "eof"
    text: str
    offset: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError([_diag(text, "error", f"unexpected character {text[pos]!r}", pos, 1)])
        pos = m.end()
        if m.lastgroup in ("comment", "ws"):
            continue
        kind = "ident" if m.lastgroup == "ident" else "sym"
        tokens.append(Token(kind, m.group(), m.start()))
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _diag(text: str, severity: str, message: str, offset: int, length: int = 1) -> Diagnostic:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return Diagnostic(severity, message, line, column, offset, min(length, max(len(text) - offset, 0)) or 1)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    # -- token plumbing

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, message: str, token: Token | None = None):
        tok = token or self.current
        raise DslError([_diag(self.text, "error", message, tok.offset, len(tok.text))])

    def accept(self, text: str) -> Token | None:
        if self.current.text == text and self.current.kind != "eof":
            tok = self.current
            self.pos += 1
            return tok
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            got = self.current.text or "end of input"
            self.fail(f"expected {text!r}, found {got!r}")
        return tok

    def ident(self, what: str = "identifier") -> Token:
        if self.current.kind != "ident":
            got = self.current.text or "end of input"
            self.fail(f"expected {what}, found {got!r}")
        tok = self.current
        self.pos += 1
        return tok

    # -- shared pieces

    def value(self):
        """A datum: decimal integer or identifier."""
        tok = self.ident("data value")
        return int(tok.text) if tok.text.isdigit() else tok.text

    def maybe_void_value(self):
        if self.accept("-"):
            return VOID
        return self.value()

    def name_list(self) -> list[str]:
        names = [self.ident("name").text]
        while self.accept(","):
            names.append(self.ident("name").text)
        return names

    def state_token(self) -> str:
        """A state name, possibly a parenthesized tuple of state names."""
        if self.current.text == "(":
            self.expect("(")
            parts = [self.state_token()]
            while self.accept(","):
                parts.append(self.state_token())
            self.expect(")")
            return "(" + ",".join(parts) + ")"
        return self.ident("state name").text

    def port_set(self) -> frozenset[str]:
        self.expect("{")
        ports = []
        if self.current.text != "}":
            ports = self.name_list()
        self.expect("}")
        return frozenset(ports)

    def domain_decl(self) -> FiniteDataDomain:
        name = self.ident("domain name").text
        self.expect("=")
        self.expect("{")
        values = [self.value()]
        while self.accept(","):
            values.append(self.value())
        self.expect("}")
        self.expect(";")
        return FiniteDataDomain(name, tuple(values))

    # -- guard expressions

    def guard(self) -> DataConstraint:
        if self.accept("exists"):
            port = self.ident("bound port").text
            self.expect(".")
            return dc.Exists(port, self.guard())
        return self.guard_conj()

    def guard_conj(self) -> DataConstraint:
        left = self.guard_unary()
        while self.accept("&&"):
            left = dc.And(left, self.guard_unary())
        return left

    def guard_unary(self) -> DataConstraint:
        if self.accept("!"):
            return dc.Not(self.guard_unary())
        if self.accept("exists"):
            port = self.ident("bound port").text
            self.expect(".")
            return dc.Exists(port, self.guard())
        if self.accept("("):
            inner = self.guard()
            self.expect(")")
            return inner
        return self.guard_atom()

    def guard_atom(self) -> DataConstraint:
        if self.accept("true"):
            return dc.TOP
        tok = self.ident("guard atom")
        if tok.text == "d" and self.current.text == "[":
            self.expect("[")
            port = self.ident("port").text
            self.expect("]")
            if self.accept("in"):
                self.expect("{")
                values = [self.value()]
                while self.accept(","):
                    values.append(self.value())
                self.expect("}")
                return dc.InSet(port, tuple(values))
            self.expect("==")
            if self.current.text == "d" and self.tokens[self.pos + 1].text == "[":
                self.ident()
                self.expect("[")
                other = self.ident("port").text
                self.expect("]")
                return dc.EqPort(port, other)
            return dc.EqConst(port, self.value())
        # function application: f(p, q) == d[r]
        fn = tok.text
        self.expect("(")
        args = self.name_list()
        self.expect(")")
        self.expect("==")
        self.ident("d")
        self.expect("[")
        target = self.ident("port").text
        self.expect("]")
        return dc.FunEq(target, fn, tuple(args))

    # -- automaton-style bodies

    def automaton_body(self, kind: str, name: str):
        ports_kw = "ports" if kind == "component" else "nodes"
        ports: list[str] = []
        states: list[str] = []
        initial: str | None = None
        domain: FiniteDataDomain | None = None
        transitions = []
        while not self.accept("}"):
            if self.current.kind == "eof":
                self.fail("unterminated body")
            if self.accept("domain"):
                if kind != "ca":
                    self.fail("only ca documents declare a domain")
                domain = self.domain_decl()
                continue
            if self.accept(ports_kw):
                ports.extend(self.name_list())
                self.expect(";")
                continue
            if self.accept("states"):
                while True:
                    state = self.state_token()
                    # a trailing star marks the initial state
                    marked = False
                    if not state.startswith("(") and state.endswith("*"):
                        state = state[:-1]
                        marked = True
                        if not state:
                            self.fail("empty state name")
                    elif self.accept("*"):
                        marked = True
                    if marked:
                        if initial is not None:
                            self.fail("more than one initial state")
                        initial = state
                    states.append(state)
                    if not self.accept(","):
                        break
                self.expect(";")
                continue
            # transition: src -{ports} [| guard] -> dst ;
            src = self.state_token()
            self.expect("-{")
            label: list[str] = []
            if self.current.text != "}":
                label = self.name_list()
            self.expect("}")
            guard = dc.TOP
            if self.accept("|"):
                if kind != "ca":
                    self.fail("guards are only allowed in ca documents")
                guard = self.guard()
            self.expect("->")
            dst = self.state_token()
            self.expect(";")
            transitions.append((src, frozenset(label), guard, dst))
        if initial is None:
            self.fail(f"no initial state declared in {name!r}")
        if kind == "ca":
            if domain is None:
                self.fail(f"ca document {name!r} lacks a domain declaration")
            return ConstraintAutomaton(
                states=frozenset(states),
                initial=initial,
                nodes=frozenset(ports),
                domain=domain,
                transitions=frozenset(transitions),
                name=name,
            )
        plain = frozenset((s, lab, t) for s, lab, _, t in transitions)
        if kind == "pa":
            return PortAutomaton(frozenset(states), initial, frozenset(ports), plain, name)
        return BipComponent(frozenset(states), initial, frozenset(ports), plain, name)

    # -- architectures

    def arch_body(self, name: str) -> BipArchitecture:
        coordinators = []
        interface: list[str] = []
        gamma: list[frozenset[str]] = []
        saw_gamma = False
        while not self.accept("}"):
            if self.current.kind == "eof":
                self.fail("unterminated body")
            if self.accept("component"):
                comp_name = self.ident("component name").text
                self.expect("{")
                coordinators.append(self.automaton_body("component", comp_name))
                self.accept(";")
                continue
            if self.accept("interface"):
                interface.extend(self.name_list())
                self.expect(";")
                continue
            if self.accept("gamma"):
                saw_gamma = True
                gamma.append(self.port_set())
                while self.accept(","):
                    gamma.append(self.port_set())
                self.expect(";")
                continue
            self.fail(f"unexpected {self.current.text!r} in architecture body")
        if not saw_gamma:
            self.fail(f"architecture {name!r} declares no interaction model")
        return BipArchitecture(
            coordinators=tuple(sorted(coordinators, key=lambda c: c.name)),
            interface=frozenset(interface),
            gamma=GammaSet(gamma),
            name=name,
        )

    # -- interaction models

    def transfer_table(self, key_width: int, out_width: int):
        """Entries ``v,..,v -> v,..,v`` separated by ``|``."""
        self.expect("{")
        entries = []
        while self.current.text != "}":
            key = tuple(self.maybe_void_value() for _ in self._counted(key_width))
            self.expect("->")
            out = tuple(self.maybe_void_value() for _ in self._counted(out_width))
            entries.append((key, out))
            if not self.accept("|"):
                break
        self.expect("}")
        return entries

    def _counted(self, width: int):
        for i in range(width):
            if i:
                self.expect(",")
            yield i

    def assignments(self, stop_words: set[str]) -> list[tuple[str, tuple]]:
        """``target := fn(args)`` or ``target := name-or-value`` entries."""
        out = []
        while True:
            target = self.ident("assignment target").text
            self.expect(":=")
            head = self.ident("expression").text
            if self.current.text == "(":
                self.expect("(")
                args = self.name_list()
                self.expect(")")
                out.append((target, ("call", head, tuple(args))))
            else:
                out.append((target, ("name", head)))
            if not self.accept(","):
                break
            if self.current.text in stop_words:
                break
        return out

    def conn_decl(self, domain: FiniteDataDomain | None) -> SimpleConnector:
        top = self.ident("top port").text
        self.expect("<-")
        bottom = tuple(sorted(self.port_set()))
        locals_: tuple[str, ...] = ()
        if self.accept("locals"):
            locals_ = tuple(sorted(self.name_list()))
        self.expect("|")
        self.expect("guard")
        self.expect(":")
        guard = self.guard()
        self.expect("up")
        self.expect(":")
        if domain is None:
            self.fail("im documents need a domain declaration before connectors")
        doms = {p: domain for p in bottom}
        if self.accept("table"):
            up_entries = self.transfer_table(len(bottom), 1 + len(locals_))
            up_fn = None
        else:
            up_fn = self.assignments({"down"})
            up_entries = None
        self.expect("down")
        self.expect(":")
        if self.accept("table"):
            down_entries = self.transfer_table(1 + len(locals_), len(bottom))
            down_fn = None
        else:
            down_fn = self.assignments({";"})
            down_entries = None
        self.expect(";")

        slots = (top,) + locals_
        if up_fn is not None:
            inferred = tuple(sorted({t for t, _ in up_fn if t != top}))
            if not locals_:
                locals_ = inferred
                slots = (top,) + locals_
            up_entries = _tabulate_up(up_fn, bottom, slots, guard, domain)
        if down_fn is not None:
            down_entries = _tabulate_down(down_fn, bottom, slots, up_entries, domain)
        up_table: dict = {}
        for key, outcome in up_entries:
            up_table.setdefault(key, [])
            if outcome not in up_table[key]:
                up_table[key].append(outcome)
        down_table = dict(down_entries)
        return SimpleConnector(
            top=top,
            bottom=bottom,
            locals_=locals_,
            guard=guard,
            up={k: tuple(v) for k, v in up_table.items()},
            down=down_table,
            domains=doms,
        )

    def im_body(self, name: str) -> InteractionModel:
        domain: FiniteDataDomain | None = None
        connectors = []
        while not self.accept("}"):
            if self.current.kind == "eof":
                self.fail("unterminated body")
            if self.accept("domain"):
                domain = self.domain_decl()
                continue
            if self.accept("conn"):
                connectors.append(self.conn_decl(domain))
                continue
            self.fail(f"unexpected {self.current.text!r} in interaction model body")
        return InteractionModel(tuple(connectors), name=name)

    # -- entry

    def document(self, expected_kind: str | None = None) -> ModelDocument:
        if self.current.kind == "eof":
            self.fail("empty input")
        kind_tok = self.ident("document kind")
        kind = kind_tok.text
        if kind not in KINDS:
            self.fail(f"unknown document kind {kind!r}", kind_tok)
        if expected_kind is not None and kind != expected_kind:
            self.fail(f"expected a {expected_kind!r} document, found {kind!r}", kind_tok)
        name = self.ident("document name").text
        self.expect("{")
        if kind in ("pa", "ca", "component"):
            model = self.automaton_body(kind, name)
        elif kind == "arch":
            model = self.arch_body(name)
        else:
            model = self.im_body(name)
        if self.current.kind != "eof":
            self.fail(f"trailing input after the document: {self.current.text!r}")
        return ModelDocument(kind, name, model)


def _tabulate_up(assigns, bottom, slots, guard, domain):
    """Evaluate ``target := expr`` upward assignments over the domain."""
    entries = []
    for combo in itertools.product(domain.values, repeat=len(bottom)):
        env = dict(zip(bottom, combo))
        if not dc.dc_eval(guard, env, domain):
            continue
        outcome_env = {}
        for target, expr in assigns:
            outcome_env[target] = _eval_transfer(expr, env)
        outcome = tuple(outcome_env.get(s, VOID) for s in slots)
        entries.append((combo, outcome))
    return entries


def _tabulate_down(assigns, bottom, slots, up_entries, domain):
    """Evaluate downward assignments on every outcome the up table produces."""
    entries = {}
    for _, outcome in up_entries:
        if outcome in entries:
            continue
        env = dict(zip(slots, outcome))
        written = {}
        for target, expr in assigns:
            written[target] = _eval_transfer(expr, env)
        entries[outcome] = tuple(written.get(p, VOID) for p in bottom)
    return list(entries.items())


def _eval_transfer(expr, env):
    if expr[0] == "name":
        name = expr[1]
        if name in env:
            return env[name]
        return int(name) if name.isdigit() else name
    _, fn, args = expr
    values = [env[a] if a in env else (int(a) if a.isdigit() else a) for a in args]
    return dc.apply_function(fn, values)


def parse(text: str, expected_kind: str | None = None) -> ModelDocument:
    """Parse a document, raising DslError with diagnostics on failure."""
    parser = _Parser(text)
    try:
        return parser.document(expected_kind)
    except DslError:
        raise
    except CoordBridgeError as exc:
        raise DslError([_diag(text, "error", str(exc), parser.current.offset)]) from exc
    except ValueError as exc:
        raise DslError([_diag(text, "error", str(exc), parser.current.offset)]) from exc


def parse_file(path, expected_kind: str | None = None) -> ModelDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read(), expected_kind)


def diagnose(text: str, expected_kind: str | None = None) -> list[Diagnostic]:
    """Diagnostics for a document; empty when it parses cleanly."""
    try:
        parse(text, expected_kind)
        return []
    except DslError as exc:
        return list(exc.diagnostics)


# ---------------------------------------------------------------------------
# serialization

def _value_text(value) -> str:
    if value is VOID:
        return "-"
    return str(value)


def _ports_text(ports: Iterable[str]) -> str:
    return ", ".join(sorted(ports))


def _states_decl(states, initial) -> str:
    decorated = [s + "*" if s == initial else s for s in sorted(states)]
    return "  states " + ", ".join(decorated) + ";"


def _label_text(label: frozenset[str]) -> str:
    return ",".join(sorted(label))


def _transition_sort_key(t):
    return (t[0], len(t[1]), tuple(sorted(t[1])), t[-1], dc.guard_text(t[2]) if len(t) == 4 else "")


def _serialize_automaton(kind, name, model) -> str:
    lines = [f"{kind} {name or 'M'} {{"]
    if kind == "ca":
        dom = model.domain
        values = ", ".join(_value_text(v) for v in dom.values)
        lines.append(f"  domain {dom.name} = {{{values}}};")
    ports_kw = "ports" if kind == "component" else "nodes"
    ports = model.ports if kind == "component" else model.nodes
    if ports:
        lines.append(f"  {ports_kw} {_ports_text(ports)};")
    lines.append(_states_decl(model.states, model.initial))
    for t in sorted(model.transitions, key=_transition_sort_key):
        if kind == "ca":
            src, label, guard, dst = t
            lines.append(f"  {src} -{{{_label_text(label)}}} | {dc.guard_text(guard)} -> {dst};")
        else:
            src, label, dst = t
            lines.append(f"  {src} -{{{_label_text(label)}}}-> {dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _serialize_arch(name, arch: BipArchitecture) -> str:
    lines = [f"arch {name or 'A'} {{"]
    for c in sorted(arch.coordinators, key=lambda c: c.name):
        body = _serialize_automaton("component", c.name, c)
        for inner in body.strip().splitlines():
            lines.append("  " + inner)
    lines.append(f"  interface {_ports_text(arch.interface)};")
    interactions = sorted(arch.gamma.materialize(), key=lambda n: (len(n), tuple(sorted(n))))
    body = ", ".join("{" + _label_text(n) + "}" for n in interactions)
    lines.append(f"  gamma {body};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _table_text(entries) -> str:
    parts = []
    for key, out in entries:
        left = ",".join(_value_text(v) for v in key)
        right = ",".join(_value_text(v) for v in out)
        parts.append(f"{left} -> {right}")
    return "table { " + " | ".join(parts) + " }"


def _serialize_im(name, model: InteractionModel) -> str:
    lines = [f"im {name or 'G'} {{"]
    domains = {}
    for c in model.connectors:
        for p, dom in c.domains.items():
            domains[dom.name] = dom
    if len(domains) > 1:
        raise ValueError("im documents support exactly one data domain")
    for dom in domains.values():
        values = ", ".join(_value_text(v) for v in dom.values)
        lines.append(f"  domain {dom.name} = {{{values}}};")
    for c in model.connectors:
        up_entries = []
        for key in sorted(c.up, key=lambda k: tuple(map(dc.datum_sort_key, k))):
            for outcome in c.up[key]:
                up_entries.append((key, outcome))
        down_entries = sorted(
            c.down.items(), key=lambda kv: tuple(map(dc.datum_sort_key, kv[0]))
        )
        locals_decl = f" locals {', '.join(c.locals_)}" if c.locals_ else ""
        lines.append(
            f"  conn {c.top} <- {{{_label_text(frozenset(c.bottom))}}}{locals_decl}"
            f" | guard: {dc.guard_text(c.guard)}"
            f" up: {_table_text(up_entries)}"
            f" down: {_table_text(down_entries)};"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(doc_or_model, kind: str | None = None, name: str | None = None) -> str:
    """Canonical text of a document or bare model."""
    if isinstance(doc_or_model, ModelDocument):
        kind, name, model = doc_or_model.kind, doc_or_model.name, doc_or_model.model
    else:
        model = doc_or_model
        if kind is None:
            kind = _kind_of(model)
        if name is None:
            name = getattr(model, "name", "") or ""
    if kind in ("pa", "ca", "component"):
        return _serialize_automaton(kind, name, model)
    if kind == "arch":
        return _serialize_arch(name, model)
    if kind == "im":
        return _serialize_im(name, model)
    raise ValueError(f"unknown document kind {kind!r}")


def _kind_of(model) -> str:
    if isinstance(model, PortAutomaton):
        return "pa"
    if isinstance(model, PolarizedCA):
        return "ca"
    if isinstance(model, ConstraintAutomaton):
        return "ca"
    if isinstance(model, BipComponent):
        return "component"
    if isinstance(model, BipArchitecture):
        return "arch"
    if isinstance(model, InteractionModel):
        return "im"
    raise ValueError(f"cannot serialize {type(model).__name__}")


def document_of(model, name: str | None = None) -> ModelDocument:
    if isinstance(model, PolarizedCA):
        model = model.automaton
    return ModelDocument(_kind_of(model), name or getattr(model, "name", "") or "M", model)


# ---------------------------------------------------------------------------
# DOT export

def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def export_dot(model_or_doc, name: str | None = None) -> str:
    """Graphviz rendering of a model's states and labeled transitions.

    Architectures and interaction models are rendered through their
    observable-behaviour interpretation.
    """
    model = model_or_doc.model if isinstance(model_or_doc, ModelDocument) else model_or_doc
    title = name or getattr(model, "name", "") or "model"
    if isinstance(model, BipArchitecture):
        from .bip import interpret_arch

        model = interpret_arch(model)
    elif isinstance(model, InteractionModel):
        from .interactions import interpret_im

        model = interpret_im(model)
    elif isinstance(model, PolarizedCA):
        model = model.automaton

    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;"]
    initial = model.initial
    for state in sorted(model.states):
        shape = "doublecircle" if state == initial else "circle"
        lines.append(f"  {_quote(state)} [shape={shape}];")
    if isinstance(model, ConstraintAutomaton):
        edges = [
            (src, f"{{{_label_text(lab)}}}, {dc.guard_text(g)}", dst)
            for src, lab, g, dst in model.transitions
        ]
    elif isinstance(model, LabeledTransitionSystem):
        edges = [(src, format_label(lab), dst) for src, lab, dst in model.transitions]
    else:
        edges = [(src, f"{{{_label_text(lab)}}}", dst) for src, lab, dst in model.transitions]
    for src, label, dst in sorted(edges):
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
