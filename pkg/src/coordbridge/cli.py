"""Command-line front end.

Every subcommand reads and writes the ``.coord`` document format.  Exit
codes: 0 on success (and for properties that hold), 1 when a checked
property is false, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from . import dsl
from .bip import BipArchitecture, BipComponent, arch_apply, arch_compose, component_to_lts, interpret_arch
from .errors import CoordBridgeError, DslError
from .generators import (
    random_adversarial_arch,
    random_arch_prime,
    random_composable_pair,
    random_interaction_model,
    random_pa_prime,
    random_polarized_ca,
    random_violating_pair,
)
from .interactions import InteractionModel, interpret_im
from .lts import LabeledTransitionSystem, bisimilar, format_label, label_sort_key
from .reo import (
    ConstraintAutomaton,
    PortAutomaton,
    ca_hide,
    ca_product,
    interpret_ca,
    interpret_pa,
    pa_hide,
    pa_product,
    polarize,
)
from .translate import (
    bip_a,
    bip_b,
    check_commutation_arch,
    check_commutation_pa,
    check_lemma_1,
    check_theorem_2,
    check_theorem_3,
    check_theorem_4_ca,
    check_theorem_4_im,
    in_arch_prime,
    in_pa_prime,
    reo_a,
    reo_b,
)

OK, PROPERTY_FALSE, USAGE_ERROR = 0, 1, 2


@dataclass
class CommandResult:
    exit_code: int
    report: str
    machine: list[dict] = field(default_factory=list)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coordbridge",
        description="Translate and verify BIP and Reo connector models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=["text", "json-lines"], default="text")
        return p

    p = add("parse", "parse a document and print its canonical form")
    p.add_argument("file")
    p.add_argument("--kind", choices=dsl.KINDS)

    p = add("product", "compose two automata")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output")

    p = add("hide", "hide ports of an automaton")
    p.add_argument("file")
    p.add_argument("-p", "--ports", required=True, help="comma-separated port names")
    p.add_argument("-o", "--output")

    p = add("apply", "apply an architecture to components")
    p.add_argument("arch")
    p.add_argument("components", nargs="+")
    p.add_argument("--full", action="store_true", help="materialize the full product")
    p.add_argument("-o", "--output")

    p = add("compose", "compose two architectures")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output")

    p = add("to-reo", "translate a BIP model to a Reo model")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = add("to-bip", "translate a Reo model to a BIP model")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = add("interpret", "interpret a model as a labeled transition system")
    p.add_argument("file")

    p = add("bisim", "check two models for bisimilarity")
    p.add_argument("left")
    p.add_argument("right")

    p = add("classcheck", "check membership in the restricted classes")
    p.add_argument("file")

    p = add("verify", "check the preservation and compositionality theorems")
    p.add_argument("--theorem", choices=["1", "2", "3", "4"], required=True)
    p.add_argument("--inputs", nargs="*", default=[])
    p.add_argument("--random", action="store_true")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--adversarial", action="store_true",
                   help="generate out-of-class inputs and require their rejection")
    p.add_argument("--bounds", default="",
                   help="generator bounds, e.g. states=4,ports=3,domain=3")

    p = add("dot", "export a model as a Graphviz digraph")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    return parser


def _load(path, expected_kind=None) -> dsl.ModelDocument:
    try:
        return dsl.parse_file(path, expected_kind)
    except FileNotFoundError:
        raise DslError([dsl.Diagnostic("error", f"no such file: {path}", 0, 0, 0, 1)])


def _emit_model(model, output, kind=None, name=None) -> str:
    text = dsl.serialize(model, kind=kind, name=name)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
        return f"wrote {output}"
    return text


def _lts_report(lts: LabeledTransitionSystem) -> tuple[str, list[dict]]:
    lines = [f"states: {len(lts.states)}  transitions: {len(lts.transitions)}"]
    lines.append(f"initial: {lts.initial}")
    machine = [{"type": "lts", "states": sorted(lts.states), "initial": lts.initial}]
    for src, label, dst in sorted(
        lts.transitions, key=lambda t: (t[0], label_sort_key(t[1]), t[2])
    ):
        lines.append(f"  {src} --{format_label(label)}--> {dst}")
        machine.append({"type": "transition", "from": src, "label": format_label(label), "to": dst})
    return "\n".join(lines), machine


def _interpret(doc: dsl.ModelDocument) -> LabeledTransitionSystem:
    model = doc.model
    if isinstance(model, PortAutomaton):
        return interpret_pa(model)
    if isinstance(model, ConstraintAutomaton):
        return interpret_ca(polarize(model))
    if isinstance(model, BipComponent):
        return component_to_lts(model)
    if isinstance(model, BipArchitecture):
        return interpret_arch(model)
    if isinstance(model, InteractionModel):
        return interpret_im(model)
    raise CoordBridgeError(f"cannot interpret a {doc.kind} document")


def _cmd_parse(args) -> CommandResult:
    doc = _load(args.file, args.kind)
    return CommandResult(OK, dsl.serialize(doc), [{"type": "parsed", "kind": doc.kind, "name": doc.name}])


def _cmd_product(args) -> CommandResult:
    left = _load(args.left)
    right = _load(args.right)
    if isinstance(left.model, PortAutomaton) and isinstance(right.model, PortAutomaton):
        result = pa_product(left.model, right.model)
        kind = "pa"
    elif isinstance(left.model, ConstraintAutomaton) and isinstance(right.model, ConstraintAutomaton):
        result = ca_product(left.model, right.model)
        kind = "ca"
    else:
        raise CoordBridgeError("product needs two pa documents or two ca documents")
    name = f"{left.name}_x_{right.name}"
    return CommandResult(OK, _emit_model(result, args.output, kind=kind, name=name))


def _cmd_hide(args) -> CommandResult:
    doc = _load(args.file)
    ports = [p for p in args.ports.split(",") if p]
    if isinstance(doc.model, PortAutomaton):
        result = pa_hide(doc.model, ports)
    elif isinstance(doc.model, ConstraintAutomaton):
        result = ca_hide(doc.model, ports)
    else:
        raise CoordBridgeError("hide applies to pa and ca documents")
    return CommandResult(OK, _emit_model(result, args.output, kind=doc.kind, name=doc.name))


def _cmd_apply(args) -> CommandResult:
    arch = _load(args.arch, "arch").model
    components = [_load(path, "component").model for path in args.components]
    result = arch_apply(arch, components, full=args.full)
    return CommandResult(OK, _emit_model(result, args.output, kind="component", name=result.name or "applied"))


def _cmd_compose(args) -> CommandResult:
    left = _load(args.left, "arch").model
    right = _load(args.right, "arch").model
    result = arch_compose(left, right)
    return CommandResult(OK, _emit_model(result, args.output, kind="arch", name=result.name or "composed"))


def _cmd_to_reo(args) -> CommandResult:
    doc = _load(args.file)
    if isinstance(doc.model, BipArchitecture):
        result = reo_a(doc.model)
        kind = "pa"
    elif isinstance(doc.model, InteractionModel):
        result = reo_b(doc.model).automaton
        kind = "ca"
    else:
        raise CoordBridgeError("to-reo applies to arch and im documents")
    return CommandResult(OK, _emit_model(result, args.output, kind=kind, name=doc.name))


def _cmd_to_bip(args) -> CommandResult:
    doc = _load(args.file)
    if isinstance(doc.model, PortAutomaton):
        result = bip_a(doc.model)
        kind = "arch"
    elif isinstance(doc.model, ConstraintAutomaton):
        result = bip_b(polarize(doc.model))
        kind = "im"
    else:
        raise CoordBridgeError("to-bip applies to pa and ca documents")
    return CommandResult(OK, _emit_model(result, args.output, kind=kind, name=doc.name))


def _cmd_interpret(args) -> CommandResult:
    doc = _load(args.file)
    report, machine = _lts_report(_interpret(doc))
    return CommandResult(OK, report, machine)


def _cmd_bisim(args) -> CommandResult:
    left = _interpret(_load(args.left))
    right = _interpret(_load(args.right))
    witness = bisimilar(left, right)
    if witness is None:
        return CommandResult(PROPERTY_FALSE, "not bisimilar", [{"type": "bisim", "result": False}])
    pairs = sorted(witness.relation)
    lines = ["bisimilar; witness relation:"]
    lines.extend(f"  {a} ~ {b}" for a, b in pairs)
    return CommandResult(
        OK, "\n".join(lines), [{"type": "bisim", "result": True, "witness": [list(p) for p in pairs]}]
    )


def _cmd_classcheck(args) -> CommandResult:
    doc = _load(args.file)
    if isinstance(doc.model, PortAutomaton):
        report = in_pa_prime(doc.model)
    elif isinstance(doc.model, BipArchitecture):
        report = in_arch_prime(doc.model)
    else:
        raise CoordBridgeError("classcheck applies to pa and arch documents")
    lines = [f"{report.subject}: {'member of' if report.member else 'NOT in'} {report.cls}"]
    lines.extend(f"  {v}" for v in report.violations)
    machine = [{
        "type": "classcheck",
        "class": report.cls,
        "member": report.member,
        "violations": list(report.violations),
    }]
    return CommandResult(OK if report.member else PROPERTY_FALSE, "\n".join(lines), machine)


def _parse_bounds(raw: str) -> dict:
    bounds = {}
    for piece in raw.split(","):
        if not piece:
            continue
        key, _, value = piece.partition("=")
        bounds[key.strip()] = int(value)
    return bounds


def _verify_cases(args):
    """Yield (case_id, verdict) pairs for the requested theorem."""
    theorem = args.theorem
    if args.inputs:
        docs = [_load(path) for path in args.inputs]
        if theorem == "1":
            for doc in docs:
                if isinstance(doc.model, PortAutomaton):
                    yield doc.name, check_commutation_pa(doc.model)
                elif isinstance(doc.model, BipArchitecture):
                    yield doc.name, check_commutation_arch(doc.model)
                else:
                    raise CoordBridgeError(f"theorem 1 takes pa or arch inputs, not {doc.kind}")
        elif theorem in ("2", "3"):
            if len(docs) % 2:
                raise CoordBridgeError(f"theorem {theorem} consumes inputs in pairs")
            for left, right in zip(docs[::2], docs[1::2]):
                pair = f"{left.name}+{right.name}"
                if theorem == "2":
                    yield f"lemma1:{pair}", check_lemma_1(left.model, right.model)
                    yield pair, check_theorem_2(left.model, right.model)
                else:
                    yield pair, check_theorem_3(left.model, right.model)
        else:
            for doc in docs:
                if isinstance(doc.model, ConstraintAutomaton):
                    yield doc.name, check_theorem_4_ca(polarize(doc.model))
                elif isinstance(doc.model, InteractionModel):
                    yield doc.name, check_theorem_4_im(doc.model)
                else:
                    raise CoordBridgeError(f"theorem 4 takes ca or im inputs, not {doc.kind}")
        return

    if not args.random:
        raise CoordBridgeError("verify needs --inputs or --random")
    if args.adversarial and theorem == "4":
        raise CoordBridgeError("theorem 4 has no restricted input class to violate")
    bounds = _parse_bounds(args.bounds)
    rng = random.Random(args.seed)
    for i in range(args.cases):
        if theorem == "1":
            if args.adversarial:
                arch = random_adversarial_arch(rng)
                yield f"case{i}", check_commutation_arch(arch)
            elif i % 2 == 0:
                pa = random_pa_prime(
                    rng,
                    max_states=bounds.get("states", 4),
                    max_ports=bounds.get("ports", 4),
                )
                yield f"case{i}", check_commutation_pa(pa)
            else:
                arch = random_arch_prime(rng, max_ports_per_coordinator=bounds.get("ports", 4))
                yield f"case{i}", check_commutation_arch(arch)
        elif theorem == "2":
            if args.adversarial:
                a1, a2, _ = random_violating_pair(rng)
                yield f"case{i}", check_theorem_2(a1, a2)
            else:
                a1, a2 = random_composable_pair(rng)
                yield f"lemma1:case{i}", check_lemma_1(a1, a2)
                yield f"case{i}", check_theorem_2(a1, a2)
        elif theorem == "3":
            p1 = random_pa_prime(rng, port_prefix="g")
            if args.adversarial:
                p2 = random_pa_prime(rng, port_prefix="h")
                p2 = PortAutomaton(
                    p2.states | {"sX"},
                    p2.initial,
                    p2.nodes,
                    p2.transitions | {(p2.initial, frozenset(), "sX")},
                    p2.name,
                )
            else:
                p2 = random_pa_prime(rng, port_prefix="h")
            yield f"case{i}", check_theorem_3(p1, p2)
        else:
            if i % 2 == 0:
                pca = random_polarized_ca(
                    rng,
                    max_ports=bounds.get("ports", 3),
                    max_domain=bounds.get("domain", 3),
                )
                yield f"case{i}", check_theorem_4_ca(pca)
            else:
                im = random_interaction_model(
                    rng,
                    max_ports=bounds.get("ports", 3),
                    max_domain=bounds.get("domain", 3),
                )
                yield f"case{i}", check_theorem_4_im(im)


def _cmd_verify(args) -> CommandResult:
    lines = []
    machine = []
    total = held = rejected = failed = 0
    for case_id, verdict in _verify_cases(args):
        total += 1
        if not verdict.applicable:
            rejected += 1
            status = "rejected (side conditions)"
        elif verdict.holds:
            held += 1
            status = "holds"
        else:
            failed += 1
            status = "FAILS"
        lines.append(f"[{verdict.theorem}] {case_id}: {status}")
        for reason in verdict.reasons:
            lines.append(f"    {reason}")
        entry = {
            "type": "case",
            "id": case_id,
            "theorem": verdict.theorem,
            "applicable": verdict.applicable,
            "holds": verdict.holds,
            "reasons": list(verdict.reasons),
        }
        if verdict.details:
            entry["details"] = [[str(k), bool(v)] for k, v in verdict.details]
        machine.append(entry)

    if args.adversarial:
        ok = failed == 0 and held == 0 and rejected == total
        summary = f"{rejected}/{total} out-of-class cases rejected"
    else:
        ok = failed == 0 and rejected == 0
        summary = f"{held}/{total} cases hold"
    lines.append(summary)
    machine.append({
        "type": "summary", "total": total, "held": held,
        "rejected": rejected, "failed": failed, "ok": ok,
    })
    return CommandResult(OK if ok else PROPERTY_FALSE, "\n".join(lines), machine)


def _cmd_dot(args) -> CommandResult:
    doc = _load(args.file)
    text = dsl.export_dot(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        return CommandResult(OK, f"wrote {args.output}")
    return CommandResult(OK, text)


_COMMANDS = {
    "parse": _cmd_parse,
    "product": _cmd_product,
    "hide": _cmd_hide,
    "apply": _cmd_apply,
    "compose": _cmd_compose,
    "to-reo": _cmd_to_reo,
    "to-bip": _cmd_to_bip,
    "interpret": _cmd_interpret,
    "bisim": _cmd_bisim,
    "classcheck": _cmd_classcheck,
    "verify": _cmd_verify,
    "dot": _cmd_dot,
}


def run(argv) -> CommandResult:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(USAGE_ERROR if exc.code else OK, "")
    try:
        result = _COMMANDS[args.command](args)
    except DslError as exc:
        report = "\n".join(str(d) for d in exc.diagnostics)
        return CommandResult(USAGE_ERROR, report,
                             [{"type": "error", "diagnostics": [str(d) for d in exc.diagnostics]}])
    except CoordBridgeError as exc:
        return CommandResult(USAGE_ERROR, f"error: {exc}", [{"type": "error", "message": str(exc)}])
    if getattr(args, "format", "text") == "json-lines":
        payload = "\n".join(json.dumps(entry, sort_keys=True) for entry in result.machine)
        return CommandResult(result.exit_code, payload, result.machine)
    return result


def main(argv=None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    if result.report:
        print(result.report)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
