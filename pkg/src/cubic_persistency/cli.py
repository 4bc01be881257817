"""Command-line entry point.

    cubic-persistency generate partition --n 2 --alpha 0.5 --seed 1 --out g.ccc
    cubic-persistency reduce g.ccc --out g.log --reduced g.reduced.ccc
    cubic-persistency exact small.ccc
    cubic-persistency convert-multicut g.ccc --out g.cmc
    cubic-persistency experiment partition --alpha-list 0,0.25,0.5 --out fig.csv
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .engine import ALL_CONDITIONS, EngineConfig, reduce, reduced_instance, stats_line
from .experiments import ExperimentSpec, dumps_csv, run_experiment
from .generators import (GeometricConfig, PartitionConfig, dumps_partition, dumps_points,
                         gen_geometric, gen_partition)
from .instance import InstanceError, dumps_instance, dumps_multicut, read_instance, to_cubic_multicut
from .oracle import TooLargeError, solve_exact


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of integers: {text!r}")


def _k(text: str) -> Optional[int]:
    if text.lower() in ("inf", "infinity", "none"):
        return None
    return int(text)


def _conditions(text: str) -> frozenset[str]:
    names = frozenset(x.strip() for x in text.split(",") if x.strip())
    unknown = names - set(ALL_CONDITIONS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown conditions {sorted(unknown)}; choose from {', '.join(ALL_CONDITIONS)}")
    return names


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(v)


def _engine_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--conditions", type=_conditions, default=frozenset(ALL_CONDITIONS),
                   help="comma separated subset of: " + ", ".join(ALL_CONDITIONS))
    p.add_argument("--slack", type=float, default=0.0)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubic-persistency",
                                     description="Partial optimality for cubic correlation clustering.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic instance")
    g.add_argument("kind", choices=("partition", "geometric"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--pe", type=float, default=1.0)
    g.add_argument("--alpha", type=float, default=0.5)
    g.add_argument("--beta", type=float, default=0.5)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--sigma", type=float, default=0.1)
    g.add_argument("--k", type=_k, default=None, help="neighbour count or 'inf'")
    g.add_argument("--out")
    g.add_argument("--sidecar", help="planted partition or point coordinates")

    r = sub.add_parser("reduce", help="run the persistency engine")
    r.add_argument("instance")
    _engine_args(r)
    r.add_argument("--out", help="event log and stats line")
    r.add_argument("--reduced", help="write the reduced instance here")
    r.add_argument("--no-timing", action="store_true", help="report runtime as 0")

    e = sub.add_parser("exact", help="brute-force minimum of a small instance")
    e.add_argument("instance")
    e.add_argument("--out")

    c = sub.add_parser("convert-multicut", help="write the equivalent cubic multicut instance")
    c.add_argument("instance")
    c.add_argument("--out")

    x = sub.add_parser("experiment", help="parameter sweep as CSV")
    x.add_argument("kind", choices=("partition", "geometric"))
    grid = x.add_mutually_exclusive_group(required=True)
    grid.add_argument("--alpha-list", type=_floats)
    grid.add_argument("--sigma-list", type=_floats)
    grid.add_argument("--size-list", type=_ints, help="vertex counts (numberOfPoints)")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--reps", type=int, default=20)
    x.add_argument("--n", type=int, default=2)
    x.add_argument("--pe", type=float, default=1.0)
    x.add_argument("--alpha", type=float, default=0.5)
    x.add_argument("--beta", type=float, default=0.5)
    x.add_argument("--m", type=int, default=2)
    x.add_argument("--sigma", type=float, default=0.1)
    x.add_argument("--k", type=_k, default=None)
    _engine_args(x)
    x.add_argument("--no-timing", action="store_true", help="write durations as 0")
    x.add_argument("--out")
    return parser


def _generate(args) -> None:
    if args.kind == "partition":
        inst, part = gen_partition(PartitionConfig(args.n, args.pe, args.alpha, args.beta, args.seed))
        side = dumps_partition(part, inst.vertex_count)
    else:
        inst, pts, source = gen_geometric(GeometricConfig(args.m, args.sigma, args.k, args.seed))
        side = dumps_points(pts, source)
    _emit(dumps_instance(inst), args.out)
    if args.sidecar:
        _emit(side, args.sidecar)


def _reduce(args) -> None:
    inst = read_instance(args.instance)
    state = reduce(inst, EngineConfig(enabled=args.conditions, slack=args.slack,
                                      time_limit=args.time_limit))
    if args.no_timing:
        state.runtime_ns = 0
    _emit(state.event_log() + "stats " + stats_line(state) + "\n", args.out)
    if args.reduced:
        red, groups = reduced_instance(state)
        header = "".join(f"# vertex {v}: {' '.join(map(str, g))}\n" for v, g in enumerate(groups))
        _emit(header + dumps_instance(red), args.reduced)


def _exact(args) -> None:
    inst = read_instance(args.instance)
    res = solve_exact(inst)
    x = res.argmins[0]
    lines = [_number(res.minimum)]
    lines += [f"e {p} {q} {v}" for (p, q), v in zip(inst.edges, x)]
    _emit("\n".join(lines) + "\n", args.out)


def _experiment(args) -> None:
    if args.alpha_list is not None:
        key, values = "alpha", args.alpha_list
    elif args.sigma_list is not None:
        key, values = "sigma", args.sigma_list
    else:
        key, values = "numberOfPoints", args.size_list
    spec = ExperimentSpec(kind=args.kind, key=key, values=values, reps=args.reps, seed=args.seed,
                          n=args.n, p_edge=args.pe, alpha=args.alpha, beta=args.beta, m=args.m,
                          sigma=args.sigma, k=args.k, conditions=args.conditions,
                          slack=args.slack, time_limit=args.time_limit,
                          timing=not args.no_timing)
    _emit(dumps_csv(run_experiment(spec), key), args.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            _generate(args)
        elif args.command == "reduce":
            _reduce(args)
        elif args.command == "exact":
            _exact(args)
        elif args.command == "convert-multicut":
            _emit(dumps_multicut(to_cubic_multicut(read_instance(args.instance))), args.out)
        else:
            _experiment(args)
    except (InstanceError, TooLargeError, ValueError, OSError) as err:
        print(f"{parser.prog} {args.command}: error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
