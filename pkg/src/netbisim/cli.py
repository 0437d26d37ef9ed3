"""Command-line interface.

Exit codes: 0 equivalent, 1 not-equivalent, 2 unknown, 3 runtime error
(bad input, bound exceeded), 64 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .nets import NetError, NetSystem, enabled, fire, reachable
from .indexed import initial_indexed, reachable_im, im_successors
from .ordered import init_oim, oim_successors, reachable_oim
from .engine import (
    decide_interleaving, decide_oim, decide_oimc, format_refutation,
    format_witness,
)
from .netio import (
    ParseError, export_im_dot, export_oim_dot, export_reachability_dot,
    parse_net,
)
from .oracle import oracle_game
from .randnets import CorpusConfig, random_instance

EXIT_EQUIV = 0
EXIT_NOT_EQUIV = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3
EXIT_USAGE = 64

_OUTCOME_CODE = {
    "equivalent": EXIT_EQUIV,
    "not-equivalent": EXIT_NOT_EQUIV,
    "unknown": EXIT_UNKNOWN,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="netbisim", description=__doc__)
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for corpus runs")
    parser.add_argument("--jobs", type=int, default=1,
                        help="reserved; runs are single-threaded")
    sub = parser.add_subparsers(dest="command", required=True,
                               parser_class=_Parser)

    check = sub.add_parser("check",
                           help="decide equivalence of two markings")
    check.add_argument("--equiv", choices=["fc", "cn", "il"], required=True)
    check.add_argument("--cap", type=int, default=16)
    check.add_argument("--witness", metavar="OUT",
                       help="write the witness or refutation to a file")
    check.add_argument("net")
    check.add_argument("m1")
    check.add_argument("m2")

    oracle = sub.add_parser("oracle",
                            help="play the process-based game")
    oracle.add_argument("--flavor", choices=["fc", "cn"], required=True)
    oracle.add_argument("--depth", type=int, required=True)
    oracle.add_argument("net")
    oracle.add_argument("m1")
    oracle.add_argument("m2")

    explore = sub.add_parser("explore",
                             help="explore a state space")
    explore.add_argument("--what", choices=["markings", "im", "oim"],
                         required=True)
    explore.add_argument("--cap", type=int, default=16)
    explore.add_argument("--dot", metavar="OUT",
                         help="write the graph in DOT format")
    explore.add_argument("net")
    explore.add_argument("marking")

    bound = sub.add_parser("bound",
                           help="verify boundedness and print the least bound")
    bound.add_argument("--cap", type=int, required=True)
    bound.add_argument("net")
    bound.add_argument("marking")

    corpus = sub.add_parser("corpus",
                            help="run the random oracle-agreement suite")
    corpus.add_argument("--count", type=int, default=200)
    corpus.add_argument("--depth", type=int, default=5)
    return parser


def _load(path: str, *marking_names: str):
    with open(path, encoding="utf-8") as fh:
        doc = parse_net(fh.read())
    markings = []
    for name in marking_names:
        if name not in doc.markings:
            raise NetError(f"net {doc.name!r} has no marking {name!r}")
        markings.append(doc.markings[name])
    return (doc, *markings)


def _cmd_check(args) -> int:
    doc, m1, m2 = _load(args.net, args.m1, args.m2)
    decide = {"fc": decide_oim, "cn": decide_oimc,
              "il": decide_interleaving}[args.equiv]
    verdict = decide(doc.net, m1, m2, args.cap)
    print(verdict.outcome)
    if args.witness:
        if verdict.witness is not None:
            text = format_witness(verdict.witness)
        elif verdict.refutation is not None:
            text = format_refutation(verdict.refutation)
        else:
            text = verdict.outcome + "\n"
        with open(args.witness, "w", encoding="utf-8") as fh:
            fh.write(text)
    return _OUTCOME_CODE[verdict.outcome]


def _cmd_oracle(args) -> int:
    doc, m1, m2 = _load(args.net, args.m1, args.m2)
    verdict = oracle_game(doc.net, m1, m2, args.flavor, args.depth)
    print(verdict.outcome)
    return _OUTCOME_CODE[verdict.outcome]


def _cmd_explore(args) -> int:
    doc, m = _load(args.net, args.marking)
    net = doc.net
    if args.what == "markings":
        result = reachable(NetSystem(net, m), args.cap)
        print(f"markings {len(result.markings)}")
        if args.dot:
            edges = [
                (src, tid, fire(net, src, tid))
                for src in result.markings for tid in enabled(net, src)
            ]
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(export_reachability_dot(net, result.markings, edges))
    elif args.what == "im":
        ims = reachable_im(net, initial_indexed(m), args.cap)
        print(f"indexed markings {len(ims)}")
        if args.dot:
            steps = [(k, s) for k in ims for s in im_successors(net, k)]
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(export_im_dot(ims, steps))
    else:
        oims = reachable_oim(net, initial_indexed(m), args.cap)
        print(f"ordered indexed markings {len(oims)}")
        if args.dot:
            steps = [(o, s) for o in oims for s in oim_successors(net, o)]
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(export_oim_dot(oims, steps))
    return EXIT_EQUIV


def _cmd_bound(args) -> int:
    doc, m = _load(args.net, args.marking)
    result = reachable(NetSystem(doc.net, m), args.cap)
    print(result.least_bound)
    return EXIT_EQUIV


def _cmd_corpus(args) -> int:
    rng = random.Random(args.seed)
    config = CorpusConfig()
    disagreements = 0
    for i in range(args.count):
        net, m1, m2 = random_instance(rng, config)
        for flavor, decide in (("fc", decide_oim), ("cn", decide_oimc)):
            oracle = oracle_game(net, m1, m2, flavor, args.depth)
            if oracle.outcome == "unknown":
                continue
            mine = decide(net, m1, m2, config.bound)
            if mine.outcome != oracle.outcome:
                disagreements += 1
                print(f"disagreement on instance {i} ({flavor}): "
                      f"engine={mine.outcome} oracle={oracle.outcome}")
    print(f"checked {args.count} instances, {disagreements} disagreements")
    return EXIT_EQUIV if disagreements == 0 else EXIT_NOT_EQUIV


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    handler = {
        "check": _cmd_check,
        "oracle": _cmd_oracle,
        "explore": _cmd_explore,
        "bound": _cmd_bound,
        "corpus": _cmd_corpus,
    }[args.command]
    try:
        return handler(args)
    except (NetError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
