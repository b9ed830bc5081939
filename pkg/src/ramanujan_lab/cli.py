"""Command-line entry point: ``ramanujan-lab <subcommand> ...``.

Every experiment subcommand builds an :class:`ExperimentSpec` from its flags
and hands it to :func:`experiments.run`; ``gen`` only writes a graph.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import ExperimentSpec, SpecError, run
from .graph import (GraphError, _json_default, gen_complete, gen_cycle, gen_hypercube,
                    gen_gq_incidence, gen_petersen, gen_random_regular, save_graph)


def _add_outputs(p: argparse.ArgumentParser, json_flag: str = "--report") -> None:
    p.add_argument(json_flag, dest="json_out", help="write the JSON report here")
    p.add_argument("--csv", dest="csv_out", help="write one CSV row per repetition here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repetitions", type=int, default=1)


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="input", help="edge-list file (u v w per line)")
    p.add_argument("--gen", default="random-regular",
                   choices=["random-regular", "complete", "cycle", "hypercube", "petersen", "gq"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=float)
    p.add_argument("--q", type=int, help="prime order for the gq generator")
    p.add_argument("--girth", type=int, default=3)
    p.add_argument("--dim", type=int, help="hypercube dimension")
    p.add_argument("--graph-seed", type=int)
    p.add_argument("--no-normalize", dest="normalize", action="store_false",
                   help="keep raw weights instead of scaling max weighted degree to 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramanujan-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ab-certify", help="certified lower bound on lambda_n / lambda_2")
    _add_graph_source(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--root", type=int, help="fixed root; default picks the best root")
    _add_outputs(p)

    p = sub.add_parser("game", help="barrier player (or a baseline) against the Hadamard adversary")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--d", type=float, default=8)
    p.add_argument("--player", default="bss", choices=["bss", "uniform", "greedy", "random"])
    _add_outputs(p, "--emit")

    p = sub.add_parser("sparsify", help="sparsify a graph and verify the result")
    _add_graph_source(p)
    p.add_argument("--out", dest="output", help="write the sparsifier edge list here")
    p.add_argument("--player", default="bss")
    _add_outputs(p)

    p = sub.add_parser("laguerre", help="roots of the uniform-scaling polynomial and edge predictions")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--T", type=int, default=32)
    p.add_argument("--S", type=float, default=1.0)
    _add_outputs(p)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("kind", choices=["random-regular", "complete", "cycle", "hypercube", "petersen",
                                    "gq"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--girth", type=int, default=3)
    p.add_argument("--dim", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="run every invariant suite at fixed seeds")
    p.add_argument("--report", dest="json_out")
    p.add_argument("--csv", dest="csv_out")
    return parser


_NOT_PARAMS = {"command", "json_out", "csv_out", "seed", "repetitions"}


def _spec(args: argparse.Namespace) -> ExperimentSpec:
    params = {k: v for k, v in vars(args).items() if k not in _NOT_PARAMS and v is not None}
    if params.get("gen") == "random-regular" and "d" in params:
        params["d"] = int(params["d"])
    return ExperimentSpec(kind=args.command, params=params, seed=getattr(args, "seed", 0),
                          repetitions=getattr(args, "repetitions", 1),
                          json_out=args.json_out, csv_out=args.csv_out)


def _gen(args: argparse.Namespace) -> int:
    if args.kind == "random-regular":
        if args.n is None or args.d is None:
            raise SpecError("random-regular needs --n and --d")
        G = gen_random_regular(args.n, args.d, args.girth, seed=args.seed)
    elif args.kind == "complete":
        G = gen_complete(args.n)
    elif args.kind == "cycle":
        G = gen_cycle(args.n)
    elif args.kind == "hypercube":
        G = gen_hypercube(args.dim)
    elif args.kind == "gq":
        G = gen_gq_incidence(args.q)
    else:
        G = gen_petersen()
    save_graph(G, args.out)
    print(f"wrote {G.n} vertices, {G.m} edges to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            return _gen(args)
        report = run(_spec(args))
    except (SpecError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json_out is None:
        json.dump(report.to_dict(), sys.stdout, indent=2, default=_json_default)
        print()
    else:
        print(f"{args.command}: passed={report.passed} -> {args.json_out}")
    return 0 if report.passed is not False else 1


if __name__ == "__main__":
    sys.exit(main())
