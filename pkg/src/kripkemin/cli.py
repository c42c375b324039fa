"""Command-line front end.

Exit codes: 0 success / true verdict, 1 false verdict, 2 usage or input
error.  Results go to stdout (or ``-o``); diagnostics go to stderr.
Verdicts are single lines starting with ``RESULT:``.
"""

from __future__ import annotations

import argparse
import sys

from . import bisim, ctl, grammar, kripke, partition, unwind


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Usage(f"{path}: {e.strerror}") from e


def _load(path, complete=False, err=None):
    k, added = kripke.parse_kripke_completing(_read(path), complete)
    for s, t in added:
        print(f"{path}: added self-loop {s} -> {t}", file=err)
    return k, added


def _emit(text, out_path, out):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _completion_note(added):
    return "".join(f"# completed: {s} -> {t}\n" for s, t in added)


def build_parser():
    p = _Parser(prog="kripkemin", description="Minimize and check Kripke structures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kripke_cmd(name, help_text):
        c = sub.add_parser(name, help=help_text)
        c.add_argument("--complete-selfloops", action="store_true",
                       help="give states without successors a self-loop instead of failing")
        return c

    c = kripke_cmd("validate", "parse and validate a .kripke file")
    c.add_argument("file")

    c = kripke_cmd("minimize", "compute the concrete smallest structure")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.add_argument("--map", nargs="?", const="", default=None, metavar="PATH",
                   help="write the block map (default: <output>.map, or stderr without -o)")
    c.add_argument("--stats", action="store_true")

    c = kripke_cmd("bisim", "bisimulation equivalence of two structures")
    c.add_argument("left")
    c.add_argument("right")

    c = kripke_cmd("bisimilar", "bisimilarity of two states of one structure")
    c.add_argument("file")
    c.add_argument("s")
    c.add_argument("t")

    c = sub.add_parser("fold", help="fold a .kgram grammar into a finite structure")
    c.add_argument("file")
    c.add_argument("-o", "--output")

    c = sub.add_parser("unfold", help="materialize a finite prefix of a grammar")
    c.add_argument("file")
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("-o", "--output")

    c = kripke_cmd("unwind", "print the depth-bounded unwinding of a state")
    c.add_argument("file")
    c.add_argument("--state", required=True)
    c.add_argument("--depth", type=int, help="default: number of states")

    c = kripke_cmd("check", "check a CTL formula at the initial states")
    c.add_argument("file")
    c.add_argument("--formula", required=True)

    c = kripke_cmd("dot", "export Graphviz DOT")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    return p


def _cmd_validate(a, out, err):
    k, _ = _load(a.file, a.complete_selfloops, err)
    print(f"RESULT: valid states={len(k.states)} init={len(k.init)} aps={len(k.aps)}", file=out)
    return 0


def _cmd_minimize(a, out, err):
    k, added = _load(a.file, a.complete_selfloops, err)
    m = partition.minimize_detailed(k)
    _emit(_completion_note(added) + kripke.serialize_kripke(m.structure), a.output, out)
    if a.map is not None:
        path = a.map or (f"{a.output}.map" if a.output else None)
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(m.block_map())
        else:
            err.write(m.block_map())
    if a.stats:
        print(
            f"stats: states_before={len(k.states)} reachable={len(m.reachable.states)} "
            f"states_after={len(m.structure.states)} rounds={m.rounds} "
            f"time_ms={m.seconds * 1000:.3f}",
            file=err,
        )
    return 0


def _cmd_bisim(a, out, err):
    k1, _ = _load(a.left, a.complete_selfloops, err)
    k2, _ = _load(a.right, a.complete_selfloops, err)
    ok = bisim.are_equivalent(k1, k2)
    print("RESULT: equivalent" if ok else "RESULT: not-equivalent", file=out)
    return 0 if ok else 1


def _cmd_bisimilar(a, out, err):
    k, _ = _load(a.file, a.complete_selfloops, err)
    ok = bisim.bisimilar_states(k, a.s, a.t)
    print(f"RESULT: {'bisimilar' if ok else 'not-bisimilar'} {a.s} {a.t}", file=out)
    return 0 if ok else 1


def _cmd_fold(a, out, err):
    g = grammar.parse_grammar(_read(a.file))
    _emit(kripke.serialize_kripke(grammar.fold(g)), a.output, out)
    return 0


def _cmd_unfold(a, out, err):
    g = grammar.parse_grammar(_read(a.file))
    _emit(kripke.serialize_kripke(grammar.unfold(g, a.depth)), a.output, out)
    return 0


def _cmd_unwind(a, out, err):
    k, _ = _load(a.file, a.complete_selfloops, err)
    depth = len(k.states) if a.depth is None else a.depth
    out.write(unwind.render(unwind.unwind_tree(k, a.state, depth)))
    return 0


def _cmd_check(a, out, err):
    k, _ = _load(a.file, a.complete_selfloops, err)
    f = ctl.parse_formula(a.formula)
    sat = ctl.sat_set(k, f)
    for s in sorted(k.init):
        print(f"init {s}: {'true' if s in sat else 'false'}", file=out)
    ok = k.init <= sat
    print(f"RESULT: {'holds' if ok else 'fails'} {f}", file=out)
    return 0 if ok else 1


def _cmd_dot(a, out, err):
    k, _ = _load(a.file, a.complete_selfloops, err)
    _emit(kripke.export_dot(k), a.output, out)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "minimize": _cmd_minimize,
    "bisim": _cmd_bisim,
    "bisimilar": _cmd_bisimilar,
    "fold": _cmd_fold,
    "unfold": _cmd_unfold,
    "unwind": _cmd_unwind,
    "check": _cmd_check,
    "dot": _cmd_dot,
}

_INPUT_ERRORS = (
    kripke.KripkeError,
    bisim.BisimError,
    partition.MinimizeError,
    unwind.UnwindError,
    ctl.CtlError,
)


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, out, err)
    except _Usage as e:
        print(f"usage error: {e}", file=err)
        return 2
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=err)
        return 2
    except OSError as e:
        print(f"error: {e}", file=err)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
