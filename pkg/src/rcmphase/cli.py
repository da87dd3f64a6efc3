"""Command-line entry point: ``rcmphase <subcommand> [flags]``.

Exit status is 0 on success, 2 on usage errors (argparse) and 1 on domain
errors raised by the library.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .asymptotics import classify_regime, cumulant_order
from .census import census, connected_graphs
from .errors import RCMError
from .graph6 import read_graph6_file
from .graph_model import EndpointGraph, parse_graph_spec
from .hull import leading_points, sigma_csv, sigma_set, sigma_svg, upper_hull
from .partitions import enumerate_cnf, enumerate_nonflat, partitions_csv
from .rcm_sim import KERNELS, SimConfig, exact_moment, run_experiment

_RATIONAL = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


def rational(text: str) -> Fraction:
    """argparse type: an exact positive rational written p/q."""
    match = _RATIONAL.match(text)
    if match is None:
        raise argparse.ArgumentTypeError(f"expected an exact rational p/q, got {text!r}")
    p, q = int(match.group(1)), int(match.group(2))
    if q == 0 or p == 0:
        raise argparse.ArgumentTypeError(f"alpha must be a positive rational, got {text!r}")
    return Fraction(p, q)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _endpoints(text: str) -> tuple[tuple[float, ...], ...]:
    try:
        return tuple(tuple(float(x) for x in pt.split(",")) for pt in text.split(";") if pt.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"endpoints must look like 'x,y;x,y', got {text!r}") from None


def _add_common(p: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", type=Path, help="write output here instead of stdout")
    p.add_argument("--budget", type=_positive_int, default=None, help="cell budget for exhaustive enumeration")
    p.add_argument("--threads", type=_positive_int, default=1)


def _add_graph(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--graph", help="template as 'r=<int> m=<int> edges=a-b,...'")
    group.add_argument("--graph-file", type=Path, help="file holding one template spec line")


def _add_sim(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--alpha", type=rational, required=True, help="decay exponent p/q, c = lambda^(-alpha)")
    p.add_argument("--kernel", choices=KERNELS, default="constant")
    p.add_argument("--scale", type=float, default=1.0, help="indicator radius or exponential length")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--d", type=_positive_int, default=2)
    p.add_argument("--endpoints", type=_endpoints, default=(), help="fixed locations 'x,y;x,y'")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcmphase", allow_abbrev=False, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", allow_abbrev=False, help="list connected non-flat partitions")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--all-nonflat", action="store_true", help="drop the connectivity filter")
    _add_common(p, ("csv", "json"))

    p = sub.add_parser("hull", allow_abbrev=False, help="diagram point set and its upper boundary")
    _add_graph(p)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--alpha", type=rational, default=None, help="also report leading points")
    _add_common(p, ("json", "csv", "svg"))

    p = sub.add_parser("census", allow_abbrev=False, help="count templates for one (r, m) cell")
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--graph6", type=Path, default=None, help="connected graphs on r+m vertices")
    p.add_argument("--header", action="store_true")
    _add_common(p, ("csv", "json"))

    p = sub.add_parser("classify", allow_abbrev=False, help="phase label and exponents for c = lambda^(-alpha)")
    _add_graph(p)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--n", type=_positive_int, default=None, help="also report the n-th cumulant order")
    _add_common(p, ("json",))

    p = sub.add_parser("simulate", allow_abbrev=False, help="Monte Carlo subgraph counts")
    _add_graph(p)
    _add_sim(p)
    p.add_argument("--reps", type=_positive_int, default=100)
    _add_common(p, ("json", "csv"))

    p = sub.add_parser("moments", allow_abbrev=False, help="exact moment or cumulant from the diagram sum")
    _add_graph(p)
    _add_sim(p)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--kind", choices=("moment", "cumulant"), default="moment")
    p.add_argument("--mc-samples", type=_positive_int, default=20000)
    _add_common(p, ("json",))
    return parser


def _graph(args: argparse.Namespace) -> EndpointGraph:
    if args.graph is not None:
        return parse_graph_spec(args.graph)
    return parse_graph_spec(args.graph_file.read_text().strip())


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _sim_config(args: argparse.Namespace, reps: int) -> SimConfig:
    c = args.lam ** (-float(args.alpha)) if args.lam > 0 else 1.0
    return SimConfig(
        d=args.d, L=args.L, lam=args.lam, c=c, kernel=args.kernel, scale=args.scale,
        endpoints=args.endpoints, reps=reps, seed=args.seed,
    )


def _run(args: argparse.Namespace) -> str:
    cmd = args.command
    if cmd == "enumerate":
        gen = enumerate_nonflat if args.all_nonflat else enumerate_cnf
        parts = list(gen(args.n, args.r, args.budget))
        if args.format == "csv":
            return partitions_csv(parts)
        return json.dumps(
            {"n": args.n, "r": args.r, "count": len(parts), "partitions": [p.to_text() for p in parts]},
            indent=2,
        ) + "\n"

    if cmd == "hull":
        g = _graph(args)
        s = sigma_set(g, args.n, args.budget)
        chain = upper_hull(s)
        if args.format == "csv":
            return sigma_csv(s, chain)
        if args.format == "svg":
            return sigma_svg(s, chain)
        report = {
            "graph": g.spec(),
            "n": args.n,
            "points": [[x, y, s.multiplicity[(x, y)]] for x, y in s.points],
            "hull_vertices": [list(p) for p in chain.vertices],
            "boundary": [list(p) for p in chain.boundary],
            "slopes": [_q(t) for t in chain.slopes()],
            "is_segment": len(chain.vertices) <= 2,
        }
        if args.alpha is not None:
            report["alpha"] = _q(args.alpha)
            report["leading_points"] = [list(p) for p in leading_points(g, args.n, args.alpha, args.budget)]
        return json.dumps(report, indent=2) + "\n"

    if cmd == "census":
        source = read_graph6_file(args.graph6) if args.graph6 is not None else connected_graphs(args.r + args.m)
        row = census(args.r, args.m, source)
        if args.format == "json":
            return json.dumps(row.__dict__) + "\n"
        return ("r,m,t,g,a\n" if args.header else "") + row.to_csv() + "\n"

    if cmd == "classify":
        g = _graph(args)
        report = classify_regime(g, args.alpha).to_dict()
        report["graph"] = g.spec()
        if args.n is not None:
            report["n"] = args.n
            report["cumulant_order"] = _q(cumulant_order(g, args.n, args.alpha))
        return json.dumps(report, indent=2) + "\n"

    if cmd == "simulate":
        g = _graph(args)
        stats = run_experiment(_sim_config(args, args.reps), g, threads=args.threads)
        if args.format == "csv":
            return stats.counts_csv()
        return json.dumps(stats.to_dict(), indent=2) + "\n"

    if cmd == "moments":
        g = _graph(args)
        value, stderr = exact_moment(g, args.n, _sim_config(args, 1), args.mc_samples, args.kind, args.budget)
        return json.dumps({"graph": g.spec(), "n": args.n, "kind": args.kind, "value": value, "stderr": stderr},
                          indent=2) + "\n"
    raise AssertionError(cmd)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _run(args)
    except RCMError as exc:
        print(f"rcmphase {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"rcmphase {args.command}: {exc}", file=sys.stderr)
        return 1
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
