"""Command-line interface.

Exit codes: 0 answered (whatever the verdict), 1 usage or parse error,
2 resource limit, 3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .deciders import decide, decide_syntactic
from .errors import FinsemError, InvariantError, ResourceLimitError
from .formula import (IMPLIES, NOT, OR, fragment_name, fragment_of, gen_alpha, letters_of,
                      parse, parse_fragment, to_text)
from .matrix import congruences, evaluate, load_matrix, make_chain, make_three, make_two
from .oracle import DEFAULT_BUDGET, prove_ipc
from .refuter import refute_matrix
from .search import format_corpus, load_corpus, search, standard_corpus
from .sequent import parse_sequent

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_INTERNAL = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _matrix(spec: str):
    """A matrix file, or one of the built-ins ``two``, ``three``, ``chain:N``."""
    path = Path(spec)
    if path.exists():
        return load_matrix(path)
    if spec == "two":
        return make_two()
    if spec == "three":
        return make_three()
    if spec.startswith("chain:") and spec[6:].isdigit():
        return make_chain(int(spec[6:]), {IMPLIES, NOT})
    raise _UsageError(f"no matrix file {spec!r} (built-ins: two, three, chain:N)")


def _emit(out, pairs, porcelain, headline=None):
    if not porcelain and headline is not None:
        print(headline, file=out)
    for key, value in pairs:
        print(f"{key}: {value}", file=out)


def cmd_parse(args, out):
    f = parse(args.formula)
    _emit(out, [("formula", to_text(f, full=args.full)),
                ("fragment", fragment_name(fragment_of(f))),
                ("letters", ",".join(repr(v) for v in letters_of(f)))], args.porcelain)


def cmd_eval(args, out):
    M = _matrix(args.matrix)
    f = parse(args.formula)
    v = {}
    for item in filter(None, (args.assign or "").split(",")):
        if "=" not in item:
            raise _UsageError(f"bad assignment {item!r}; expected p<k>=<element>")
        letter, name = (x.strip() for x in item.split("=", 1))
        v[parse(letter).index] = M.index(name)
    value = evaluate(M, v, f)
    _emit(out, [("value", M.names[value]),
                ("designated", "yes" if value in M.designated else "no")], args.porcelain)


def cmd_decide(args, out):
    s = parse_sequent(args.sequent)
    if args.method == "matrix":
        verdict = decide(s)
    elif args.method == "syntactic":
        verdict = decide_syntactic(s)
    else:
        verdict = prove_ipc(s, budget=args.budget)
    pairs = [("outcome", verdict.outcome), ("method", verdict.method)]
    if verdict.witness is not None:
        pairs.append(("witness", verdict.witness_text()))
    _emit(out, pairs, args.porcelain)


def cmd_prove(args, out):
    verdict = prove_ipc(parse_sequent(args.sequent), budget=args.budget)
    _emit(out, [("outcome", verdict.outcome), ("method", verdict.method)], args.porcelain)


def cmd_gen_alpha(args, out):
    if args.n < 1:
        raise _UsageError("--n must be at least 1")
    f = gen_alpha(args.variant, args.n)
    text = to_text(f, full=args.expanded)
    if args.porcelain:
        _emit(out, [("variant", args.variant), ("n", args.n), ("formula", text)], True)
    else:
        print(text, file=out)


def cmd_refute(args, out):
    if args.chain is not None:
        fragment = {IMPLIES} if args.variant == "arrow" else {OR, NOT}
        M = make_chain(args.chain, fragment)
    else:
        M = _matrix(args.matrix)
    report = refute_matrix(M, args.variant, use_oracle=not args.no_oracle)
    report.replay()
    print(report.porcelain() if args.porcelain else report.text(), file=out)


def cmd_search(args, out):
    fragment = parse_fragment(args.fragment)
    if args.corpus:
        corpus = load_corpus(args.corpus, validate=not args.skip_validation)
    else:
        corpus = standard_corpus(fragment)
    outcome = search(fragment, args.max_size, corpus, workers=args.workers)
    print(outcome.porcelain() if args.porcelain else outcome.table(), file=out)


def cmd_congruences(args, out):
    M = _matrix(args.matrix)
    found = congruences(M)
    if args.porcelain:
        _emit(out, [("count", len(found))] + [("congruence", c.render(M.names)) for c in found],
              True)
    else:
        print(f"{len(found)} congruence(s) of {M.label or 'matrix'}:", file=out)
        for c in found:
            tag = " (trivial)" if c.is_trivial else ""
            print(f"  {c.render(M.names)}{tag}", file=out)


def cmd_corpus(args, out):
    corpus = standard_corpus(parse_fragment(args.fragment), count=args.count, seed=args.seed)
    text = format_corpus(corpus)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(corpus)} entries to {args.out}", file=out)
    else:
        out.write(text)


def build_parser() -> argparse.ArgumentParser:
    # --porcelain is accepted before or after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--porcelain", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable 'key: value' lines only")
    parser = _Parser(prog="finsem", description=__doc__.splitlines()[0])
    parser.add_argument("--porcelain", action="store_true",
                        help="machine-readable 'key: value' lines only")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and re-print a formula")
    p.add_argument("formula")
    p.add_argument("--full", action="store_true", help="parenthesise every binary subformula")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--assign", default="", help="e.g. p1=h,p2=1")
    p.add_argument("formula")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("decide", parents=[common], help="decide a sequent")
    p.add_argument("--sequent", required=True)
    p.add_argument("--method", choices=("matrix", "syntactic", "oracle"), default="matrix")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("prove", parents=[common], help="intuitionistic derivability")
    p.add_argument("--sequent", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("gen-alpha", parents=[common], help="print a pigeonhole formula")
    p.add_argument("--variant", choices=("arrow", "orneg"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--expanded", action="store_true", help="fully parenthesised")
    p.set_defaults(func=cmd_gen_alpha)

    p = sub.add_parser("refute", parents=[common], help="refute a matrix as characteristic")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix")
    src.add_argument("--chain", type=int)
    p.add_argument("--variant", choices=("arrow", "orneg"), required=True)
    p.add_argument("--no-oracle", action="store_true",
                   help="skip the prover check (only honoured for matrices above 3 elements)")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("search", parents=[common], help="bounded characteristic-matrix search")
    p.add_argument("--fragment", required=True, help='e.g. "and,not" or "empty"')
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--corpus", help="corpus file (default: the standard corpus)")
    p.add_argument("--skip-validation", action="store_true",
                   help="trust corpus labels instead of re-proving them")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("congruences", parents=[common], help="list congruences of a matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_congruences)

    p = sub.add_parser("corpus", parents=[common], help="write the standard corpus")
    p.add_argument("--fragment", required=True)
    p.add_argument("--count", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except _UsageError as e:
        print(e, file=err)
        return EXIT_USAGE
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=err)
        return EXIT_LIMIT
    except InvariantError as e:
        print(f"internal error: {e}", file=err)
        return EXIT_INTERNAL
    except (FinsemError, ValueError, OSError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
