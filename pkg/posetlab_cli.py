#!/usr/bin/env python3
"""
posetlab command-line interface - batch queries against the lab

Usage examples:
    python posetlab_cli.py params --poset diamond:4
    python posetlab_cli.py la --n 4 --poset chain:2
    python posetlab_cli.py count --poset vee:2 --family full:3 --induced
    python posetlab_cli.py container --t 1 --r 1 --eps 1/8 --family @middle.json
    python posetlab_cli.py --format csv sweep --poset chain:2 --n 8 10 --gamma 0.5 1.5 --seeds 1 2 3

Results go to stdout as JSON (default) or CSV; progress logging goes to
stderr. Exit status: 0 success, 2 invalid input, 3 refused by a size guard.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional

from errors import BadParam, PosetLabError
from lab_config import get_config
from poset_lab import PosetLab
from report_generator import ReportGenerator

logger = logging.getLogger("posetlab")


def _json_argument(text: str) -> Any:
    """Inline JSON or '@file.json'."""
    if text.startswith("@"):
        with open(Path(text[1:]), "r", encoding="utf-8") as f:
            return json.load(f)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadParam(f"invalid JSON argument: {exc}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text}") from exc


def _global_flags(parser: argparse.ArgumentParser, suppress: bool = False) -> None:
    """Flags accepted before or after the verb; after the verb they only override when given."""
    default = lambda value: argparse.SUPPRESS if suppress else value
    parser.add_argument("--seed", type=int, default=default(None), help="seed for every random choice")
    parser.add_argument("--trials", type=int, default=default(10), help="trials for census runs")
    parser.add_argument("--format", choices=("json", "csv"), default=default(None), help="output format")
    parser.add_argument("--threads", type=int, default=default(None), help="worker threads for sweeps")
    parser.add_argument("--verbose", "-v", action="store_true", default=default(False),
                        help="debug logging to stderr")


def build_parser() -> argparse.ArgumentParser:
    # allow_abbrev=False keeps '--t' from reading as a prefix of '--trials' or '--threads'
    parser = argparse.ArgumentParser(prog="posetlab", allow_abbrev=False,
                                     description="Forbidden-subposet laboratory for the Boolean lattice")
    _global_flags(parser)
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, help_text: str, poset=False, family=False, n=False, induced=False):
        p = sub.add_parser(name, help=help_text, parents=[common], allow_abbrev=False)
        if poset:
            p.add_argument("--poset", required=True, help="e.g. chain:3, K:2,1,2, butterfly, @file.json")
        if family:
            p.add_argument("--family", required=True, help="e.g. full:4, middle:6:2, @family.json")
        if n:
            p.add_argument("--n", type=int, required=True, help="ground set size")
        if induced:
            p.add_argument("--induced", action="store_true", help="induced copies only")
        return p

    p = verb("params", "poset parameters e, e*, x, x*, d, d*", poset=True)
    p.add_argument("--no-d", action="store_true", help="skip d and d*")
    verb("free-check", "is the family P-free", poset=True, family=True, induced=True)
    verb("count", "count copies and embeddings", poset=True, family=True, induced=True)
    verb("la", "exact La(n, P)", poset=True, n=True, induced=True)
    verb("min-copies", "minimum copies over families of every size", poset=True, n=True, induced=True)
    verb("m-count", "copies in the e(P)+1 middle levels", poset=True, n=True, induced=True)

    p = verb("container", "run the induced vee container algorithm", family=True)
    p.add_argument("--n", type=int, help="ground set size (checked against the family)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=_fraction, required=True)

    p = verb("chain-stats", "min-max chain partition statistics", family=True)
    p.add_argument("--method", choices=("dp", "walk", "sample"), default="dp")
    p.add_argument("--samples", type=int, default=10000)

    p = verb("diamond-lb", "sum of binom(b(A,C), s) over comparable pairs", family=True)
    p.add_argument("--s", type=int, required=True)

    p = verb("tree-count", "tree counting lemma, height-2 trees or layered witnesses", poset=True)
    p.add_argument("--family", help="family whose comparability graph is searched")
    p.add_argument("--digraph", help='{"nodes": k, "edges": [[u, v], ...]} or @file.json')
    p.add_argument("--layers", type=int, help="build a layered witness with this many layers")
    p.add_argument("--eps-prime", type=_fraction, default=Fraction(1, 8))

    p = verb("random", "removal construction and largest free subfamily in P(n,p)",
             poset=True, n=True, induced=True)
    p.add_argument("--p", type=_fraction, required=True)
    p.add_argument("--seeds", type=int, nargs="*", help="defaults to --seed")

    p = verb("sweep", "largest free subfamily over p = n^-gamma", induced=True)
    p.add_argument("--poset", help="forbidden poset")
    p.add_argument("--n", type=int, nargs="+", help="ground set sizes")
    p.add_argument("--gamma", type=float, nargs="+", help="exponents")
    p.add_argument("--seeds", type=int, nargs="+", default=[])
    p.add_argument("--config", help="experiment config JSON (inline or @file)")

    p = verb("census", "container census over generated vee-free families", n=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=_fraction, required=True)
    p.add_argument("--generator", choices=("greedy", "antichain"), default="greedy")

    p = verb("verify", "re-check a saved container output", family=True)
    p.add_argument("--output", required=True, help="ContainerOutput JSON (inline or @file)")
    return parser


def dispatch(lab: PosetLab, args: argparse.Namespace) -> Any:
    """Run the operation a verb maps to and return its result."""
    verb = args.verb
    if verb == "params":
        return lab.params(args.poset, with_d=not args.no_d)
    if verb == "free-check":
        return lab.free_check(args.poset, args.family, args.induced)
    if verb == "count":
        return lab.count(args.poset, args.family, args.induced)
    if verb == "la":
        result = lab.la(args.n, args.poset, args.induced)
        return {"size": result["size"], "witness": result["witness"], "method": result["method"]}
    if verb == "min-copies":
        return lab.min_copies(args.n, args.poset, args.induced)
    if verb == "m-count":
        return lab.m_count(args.n, args.poset, args.induced)
    if verb == "container":
        family = lab.family(args.family)
        if args.n is not None and args.n != family.ground_n:
            raise BadParam(f"--n {args.n} does not match the family's ground set {family.ground_n}")
        return lab.container(family, args.t, args.r, args.eps)
    if verb == "chain-stats":
        return lab.chain_stats(args.family, args.method, args.samples)
    if verb == "diamond-lb":
        return lab.diamond_lb(args.family, args.s)
    if verb == "tree-count":
        return lab.tree_count(args.poset, args.family, args.digraph, args.layers, args.eps_prime)
    if verb == "random":
        return lab.random(args.n, args.p, args.poset, args.induced, args.seeds or None)
    if verb == "sweep":
        if args.config:
            return lab.sweep_config(_json_argument(args.config))
        if not (args.poset and args.n and args.gamma):
            raise BadParam("sweep needs --config or all of --poset, --n and --gamma")
        return lab.sweep(args.poset, args.induced, args.n, args.gamma, args.seeds)
    if verb == "census":
        return lab.census(args.n, args.t, args.r, args.eps, args.generator, args.trials)
    if verb == "verify":
        return lab.verify(_json_argument(args.output), args.family)
    raise BadParam(f"unknown verb '{verb}'")


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_config()["settings"]["log_level"], logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    reports = ReportGenerator()
    fmt = args.format or get_config()["settings"]["default_format"]
    try:
        lab = PosetLab(seed=args.seed, threads=args.threads)
        result = dispatch(lab, args)
    except PosetLabError as e:
        logger.debug("command failed", exc_info=True)
        print(json.dumps({"error": str(e), "type": type(e).__name__}))
        return e.exit_code
    except (OSError, json.JSONDecodeError) as e:
        print(json.dumps({"error": str(e), "type": type(e).__name__}))
        return 2
    print(reports.render(result, fmt), end="" if fmt == "csv" else "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
