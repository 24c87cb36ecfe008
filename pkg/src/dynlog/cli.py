"""``dynlog`` command line.

Exit status: 0 for success or a positive verdict, 1 for a negative verdict
(not recoverable, adjunction fails, ...), 2 for any error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import limits
from .automaton import fibre, relabel, to_dot
from .dynamics import (
    LOWER,
    UPPER,
    check_adjunction,
    check_inclusion_conditions,
    check_recovery_witnesses,
    labelled_functors,
    recover,
)
from .errors import DynlogError, MissingInput
from .propositions import PropositionAlgebra, subposet
from .report import (
    adjunction_report,
    dump_json,
    functor_report,
    recovery_report,
    states_report,
    synthesis_report,
    witnesses_report,
)
from .synthesis import (
    DOWNSET,
    ULTRAFILTER,
    downset_state_space,
    is_boolean,
    synthesize,
    synthesize_dual,
    ultrafilter_state_space,
)
from .textio import (
    detect_kind,
    format_automaton,
    load_lattice,
    parse_functors,
    parse_poset,
    parse_propositions,
    parse_subposet,
    parse_workspace,
)


def _emit(args, text, data):
    sys.stdout.write(dump_json(data) if args.json else text)


def _workspace(args, need):
    files = [f for f in (getattr(args, "automaton", None), getattr(args, "algebra", None)) if f]
    files += list(getattr(args, "functors", None) or [])
    ws = parse_workspace(files, lattice=args.lattice)
    for piece in need:
        if getattr(ws, piece) is None:
            raise MissingInput(f"this command needs a {piece} file")
    return ws


def cmd_functor(args):
    ws = _workspace(args, ["automaton", "algebra"])
    T, P = labelled_functors(ws.automaton, ws.algebra)
    chosen = {"upper": {"T": T}, "lower": {"P": P}, "both": {"T": T, "P": P}}[args.side]
    _emit(args, *functor_report(chosen, ws.algebra))
    return 0


def cmd_recover(args):
    ws = _workspace(args, ["automaton", "algebra"])
    rep = recover(ws.automaton, ws.algebra, side=args.side)
    _emit(args, *recovery_report(rep))
    return 0 if rep.overall else 1


def cmd_adjoint(args):
    ws = _workspace(args, ["algebra"])
    if ws.functors:
        uppers = [F for F in ws.functors.values() if F.direction == UPPER]
        lowers = [F for F in ws.functors.values() if F.direction == LOWER]
        if len(uppers) != 1 or len(lowers) != 1:
            raise MissingInput("functor files must hold exactly one upper and one lower functor")
        T, P = uppers[0], lowers[0]
    else:
        if ws.automaton is None:
            raise MissingInput("adjoint needs an automaton or functor files")
        T, P = labelled_functors(ws.automaton, ws.algebra)
    res = check_adjunction(P, T)
    inclusion = check_inclusion_conditions(P, T) if res else None
    _emit(args, *adjunction_report(res, inclusion))
    return 0 if res else 1


def cmd_witnesses(args):
    ws = _workspace(args, ["automaton", "algebra"])
    reports = {x: check_recovery_witnesses(fibre(ws.automaton, x), ws.algebra) for x in ws.automaton.inputs}
    text, data = witnesses_report(reports)
    _emit(args, text, data)
    return 0 if data["overall"] else 1


def _load_base(path, lattice_spec):
    """A proposition file gives an algebra; a lattice/poset file an abstract poset."""
    text = Path(path).read_text(encoding="utf-8")
    if detect_kind(text) == "lattice":
        return parse_poset(text, str(path))
    return parse_propositions(text, load_lattice(lattice_spec), str(path))


def _space(base, kind):
    if kind is None:
        kind = ULTRAFILTER if is_boolean(base) else DOWNSET
    return ultrafilter_state_space(base) if kind == ULTRAFILTER else downset_state_space(base)


def cmd_enumerate_states(args):
    base = _load_base(args.algebra, args.lattice)
    _emit(args, *states_report(_space(base, args.space)))
    return 0


def cmd_synthesize(args):
    base = _load_base(args.algebra, args.lattice)
    space = _space(base, args.space)
    emb = space.algebra
    members = parse_subposet(Path(args.subposet).read_text(encoding="utf-8"), args.subposet)
    functors = parse_functors(Path(args.functor).read_text(encoding="utf-8"), emb, args.functor)
    automaton = None
    for name, F in functors.items():
        require = "top" if F.direction == UPPER else "bottom"
        C = subposet(emb, members, require=require)
        run = synthesize if F.direction == UPPER else synthesize_dual
        result = run(C, F, space)
        if automaton is None:
            automaton = result.automaton
        elif automaton != result.automaton:
            raise DynlogError(f"functor {name!r} induces a different automaton")
    if automaton is None:
        raise MissingInput("the functor file defines no functor")

    realization = None
    if isinstance(base, PropositionAlgebra) and not args.canonical_names:
        realization = space.realize(base)
        if realization is not None:
            automaton = relabel(automaton, realization, base.states)
    text, data = synthesis_report(space, automaton, functors, realization)
    if args.out_automaton:
        Path(args.out_automaton).write_text(format_automaton(automaton), encoding="utf-8")
    if args.out_dot:
        Path(args.out_dot).write_text(to_dot(automaton), encoding="utf-8")
    _emit(args, text, data)
    return 0


def cmd_render(args):
    ws = _workspace(args, ["automaton"])
    dot = to_dot(ws.automaton)
    if args.output and args.output != "-":
        Path(args.output).write_text(dot, encoding="utf-8")
    else:
        sys.stdout.write(dot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynlog", description="Dynamic logic of finite automata.")
    parser.add_argument("--cap-states", type=int, help=f"maximum number of states (default {limits.MAX_STATES})")
    parser.add_argument("--cap-algebra", type=int, help=f"maximum algebra size (default {limits.MAX_ALGEBRA})")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, automaton=True, algebra=True):
        if automaton:
            p.add_argument("-a", "--automaton", help="automaton file")
        if algebra:
            p.add_argument("-b", "--algebra", help="propositions file")
        p.add_argument("-m", "--lattice", help="truth lattice file or BOOL2 (default)")
        p.add_argument("--json", action="store_true", help="print a machine-readable report")

    p = sub.add_parser("functor", help="tabulate the labelled transition functors")
    common(p)
    p.add_argument("--side", choices=["upper", "lower", "both"], default="both")
    p.set_defaults(func=cmd_functor)

    p = sub.add_parser("recover", help="recover the automaton from its functors")
    common(p)
    p.add_argument("--side", choices=["upper", "lower", "both"], default="both")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("adjoint", help="check the adjunction and inclusion conditions")
    common(p)
    p.add_argument("-t", "--functors", action="append", help="functor file (one upper, one lower)")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("witnesses", help="search witnesses for recoverability")
    common(p)
    p.set_defaults(func=cmd_witnesses)

    p = sub.add_parser("enumerate-states", help="list canonical states of an algebra or poset")
    common(p, automaton=False)
    p.add_argument("--space", choices=[DOWNSET, ULTRAFILTER])
    p.set_defaults(func=cmd_enumerate_states)

    p = sub.add_parser("synthesize", help="build an automaton from a partial functor")
    common(p, automaton=False)
    p.add_argument("-c", "--subposet", required=True, help="subposet file")
    p.add_argument("-t", "--functor", required=True, help="functor file over the canonical states")
    p.add_argument("--space", choices=[DOWNSET, ULTRAFILTER])
    p.add_argument("--canonical-names", action="store_true", help="keep canonical state names")
    p.add_argument("--out-automaton", help="write the synthesized automaton here")
    p.add_argument("--out-dot", help="write a DOT rendering here")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("render", help="export an automaton as DOT")
    p.add_argument("-a", "--automaton", required=True)
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_render, lattice=None, algebra=None, json=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("synthesize", "enumerate-states") and not args.algebra:
        print("dynlog: error: -b is required", file=sys.stderr)
        return 2
    saved = limits.MAX_STATES, limits.MAX_ALGEBRA
    if args.cap_states is not None:
        limits.MAX_STATES = args.cap_states
    if args.cap_algebra is not None:
        limits.MAX_ALGEBRA = args.cap_algebra
    try:
        return args.func(args)
    except (DynlogError, OSError) as exc:
        print(f"dynlog: error: {exc}", file=sys.stderr)
        return 2
    finally:
        limits.MAX_STATES, limits.MAX_ALGEBRA = saved


if __name__ == "__main__":
    sys.exit(main())
