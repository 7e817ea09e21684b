"""Command-line front end. Each subcommand loads model files, calls one
library function and prints its result.

Exit codes: 0 success, 1 usage, 2 invalid input, 3 negative result (empty
synthesis result, inadmissible attack, infeasible supervisor), 4 capacity.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import fixtures
from .attack import ENABLEMENTS, MODES, AttackSpec, synthesize_absra, verify_absra
from .automaton import check_supervisor_feasibility
from .dot import emit_dot
from .errors import CapacityError, ConfigError, DomainError, ValidationError
from .modelio import emit_model, parse_model, read_attack_spec, read_model
from .robust import DIFFERENCE_MODES, min_protected, synthesize_robust
from .transducer import fmt_output, fmt_pair

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NEGATIVE, EXIT_CAPACITY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _names(text: str | None) -> list[str]:
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def _spec(args, plant) -> AttackSpec:
    spec = read_attack_spec(args.relation) if getattr(args, "relation", None) else AttackSpec()
    changes = {}
    if args.n is not None:
        changes["n"] = args.n
    if getattr(args, "mode", None):
        changes["feasibility_mode"] = args.mode
    if getattr(args, "enablement", None):
        changes["enablement"] = args.enablement
    if changes:
        spec = AttackSpec(changes.get("n", spec.n), spec.protected, spec.relation,
                          changes.get("feasibility_mode", spec.feasibility_mode),
                          changes.get("enablement", spec.enablement))
    protect = set(_names(getattr(args, "protect", None))) | set(spec.protected)
    for ev in protect:
        if ev not in plant.alphabet:
            raise ValidationError(f"protected event {ev!r} is not in the plant alphabet")
    if protect:
        spec = spec.with_protected(plant.alphabet, protect)
    return spec


def _write(machine, args, spec=None):
    if getattr(args, "out", None):
        emit_model(machine, args.out, spec)
    if getattr(args, "dot", None):
        emit_dot(machine, args.dot)


def cmd_synthesize_attack(args) -> int:
    g, s = parse_model(args.plant), parse_model(args.supervisor)
    spec = _spec(args, g)
    out = synthesize_absra(g, s, spec)
    print(f"iterations: {out.iterations}")
    print(f"candidate_states: {out.candidate_states}")
    _write(out.recognizer, args, spec)
    if out.empty:
        print("attack: empty")
        return EXIT_NEGATIVE
    a = out.recognizer
    print(f"attack: {a.n_states} states, "
          f"{sum(len(r) for r in a.delta)} transitions")
    w = out.witness
    print("witness: " + " ".join(fmt_pair(x) for x in w))
    print("plant string: " + " ".join(x[0] for x in w))
    print("observed: " + " ".join(fmt_output(x[1]) for x in w if x[1]))
    return EXIT_OK


def cmd_verify_attack(args) -> int:
    g, s = parse_model(args.plant), parse_model(args.supervisor)
    mf = read_model(args.attack)
    if mf.machine is None:
        raise ValidationError(f"{args.attack}: no attack transducer")
    spec = mf.spec or AttackSpec(n=getattr(mf.machine, "bound", 1))
    if args.relation:
        spec = read_attack_spec(args.relation)
    if args.mode or args.enablement:
        spec = AttackSpec(spec.n, spec.protected, spec.relation,
                          args.mode or spec.feasibility_mode,
                          args.enablement or spec.enablement)
    report = verify_absra(mf.machine, g, s, spec)
    print("\n".join(report.lines()))
    return EXIT_OK if report.is_absra else EXIT_NEGATIVE


def cmd_synthesize_robust(args) -> int:
    g, e = parse_model(args.plant), parse_model(args.requirement)
    spec = _spec(args, g)
    out = synthesize_robust(g, e, spec, mode=args.difference, max_rounds=args.max_rounds)
    _write(out.supervisor, args)
    print(f"rounds: {out.rounds}")
    if out.empty:
        print("supervisor: empty" + (" (attack removal stalled)" if out.stalled else ""))
        return EXIT_NEGATIVE
    sup = out.supervisor
    print(f"supervisor: {sup.n_states} states, {sum(len(r) for r in sup.delta)} transitions")
    print(f"residual_attack_empty: {'yes' if out.residual_attack_empty else 'no'}")
    return EXIT_OK


def cmd_min_protect(args) -> int:
    g, e = parse_model(args.plant), parse_model(args.requirement)
    spec = _spec(args, g)
    out = min_protected(g, e, spec, mode=args.difference, max_rounds=args.max_rounds)
    if args.verbose:
        for subset, result, residual in out.trace:
            print(f"  {{{','.join(subset)}}}: {result}" + ("" if residual else " (residual attack)"))
    print(f"subsets_examined: {out.subsets_examined}")
    if not out.feasible:
        print("protected: none works")
        return EXIT_NEGATIVE
    order = [ev.name for ev in g.alphabet if ev.name in out.protected_set]
    print("protected: " + (",".join(order) if order else "(none)"))
    _write(out.supervisor, args)
    return EXIT_OK


def cmd_check_supervisor(args) -> int:
    g, s = parse_model(args.plant), parse_model(args.supervisor)
    rep = check_supervisor_feasibility(s, g)
    for a, b in rep.consistency:
        print(f"inconsistent: {' '.join(map(str, a)) or 'ε'} | {' '.join(map(str, b)) or 'ε'}")
    for w in rep.legality:
        print(f"illegal: {' '.join(map(str, w)) or 'ε'}")
    print("feasible and legal" if rep.ok else "not feasible/legal")
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_export_dot(args) -> int:
    m = parse_model(args.model)
    text = emit_dot(m, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


FIXTURES = {
    "tank-plant": lambda: (fixtures.tank_plant(), None),
    "tank-supervisor": lambda: (fixtures.tank_supervisor(), None),
    "tank-requirement": lambda: (fixtures.tank_requirement(), None),
    "tank-relation": lambda: (None, AttackSpec(relation=fixtures.tank_relation())),
    "tank-low-report-attack": lambda: (fixtures.low_report_attack(), None),
}


def cmd_fixture(args) -> int:
    machine, spec = FIXTURES[args.name]()
    text = emit_model(machine, args.out, spec)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="absra", description="Sensor-alteration attack synthesis and "
                                         "attack-robust supervisory control.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def attack_opts(sp, relation=True):
        sp.add_argument("--n", type=int, default=None, help="output length bound (default 1)")
        sp.add_argument("--protect", help="comma-separated protected events")
        if relation:
            sp.add_argument("--relation", help="file with an [attack_spec] section")
        sp.add_argument("--mode", choices=MODES, help="enablement comparison")
        sp.add_argument("--enablement", choices=ENABLEMENTS,
                        help="read enablement from the initial attack or the candidate")

    sp = sub.add_parser("synthesize-attack", help="supremal attack against a closed loop")
    sp.add_argument("--plant", required=True)
    sp.add_argument("--supervisor", required=True)
    attack_opts(sp)
    sp.add_argument("--out")
    sp.add_argument("--dot")
    sp.set_defaults(func=cmd_synthesize_attack)

    sp = sub.add_parser("verify-attack", help="check the four attack properties")
    sp.add_argument("--plant", required=True)
    sp.add_argument("--supervisor", required=True)
    sp.add_argument("--attack", required=True)
    sp.add_argument("--relation")
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--enablement", choices=ENABLEMENTS)
    sp.set_defaults(func=cmd_verify_attack)

    for name, func, helptext in (("synthesize-robust", cmd_synthesize_robust,
                                  "supervisor with no admissible attack"),
                                 ("min-protect", cmd_min_protect,
                                  "smallest protected event set")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--plant", required=True)
        sp.add_argument("--requirement", required=True)
        attack_opts(sp)
        sp.add_argument("--difference", choices=DIFFERENCE_MODES, default="closed")
        sp.add_argument("--max-rounds", type=int, default=None,
                        help="stop after this many attack-removal passes")
        sp.add_argument("--out")
        sp.add_argument("--dot")
        if name == "min-protect":
            sp.add_argument("-v", "--verbose", action="store_true")
        sp.set_defaults(func=func)

    sp = sub.add_parser("check-supervisor", help="observation consistency and legality")
    sp.add_argument("--plant", required=True)
    sp.add_argument("--supervisor", required=True)
    sp.set_defaults(func=cmd_check_supervisor)

    sp = sub.add_parser("export-dot", help="render a model file as Graphviz")
    sp.add_argument("--model", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_dot)

    sp = sub.add_parser("fixture", help="write a bundled example model")
    sp.add_argument("name", choices=sorted(FIXTURES))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValidationError, DomainError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
