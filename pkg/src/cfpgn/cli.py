"""Command-line entry point: ``cfpgn <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Optional

from .cf import convergents, expand, nearest_integer_decomposition, reconstruct
from .envelope import GraphError, build_graph, decode
from .exact import LogCoord, ParseError, rational_format, rational_parse
from .oracle import brute_minima
from .render import RenderConfig, RenderError, render_svg
from .verify import fuzz, verify_one


class UsageError(Exception):
    pass


# let "-4/7" through as a positional number rather than an option
_NEGATIVE_NUMBER = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")


def _parse_quotients(text: str) -> list[int]:
    try:
        qs = [int(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad quotient list {text!r}") from None
    if not qs or any(a < 1 for a in qs):
        raise UsageError("quotients must be a non-empty list of positive integers")
    return qs


def resolve_xi(args) -> tuple[Fraction, Optional[str]]:
    """The input number and, for a quotient list, a provenance label."""
    if getattr(args, "quotients", None):
        if args.xi is not None:
            raise UsageError("give either a number or --quotients, not both")
        qs = _parse_quotients(args.quotients)
        label = "rational [0;" + ",".join(map(str, qs)) + "] built from a partial-quotient prefix"
        return reconstruct(qs), label
    if args.xi is None:
        raise UsageError("missing number (p/q, integer, finite decimal, or --quotients)")
    try:
        return rational_parse(args.xi), None
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _dump(obj, stream=None):
    stream = stream or sys.stdout
    json.dump(obj, stream, indent=2, sort_keys=False)
    stream.write("\n")


def cmd_expand(args) -> int:
    xi, label = resolve_xi(args)
    m, eps, d = nearest_integer_decomposition(xi)
    cf = expand(d)
    out = {
        "input": rational_format(xi),
        "nearest_integer": str(m),
        "sign": eps,
        "normalized": rational_format(d),
        "expansion": str(cf),
        **cf.to_json(),
        "table": convergents(cf).to_json(),
    }
    if label:
        out["source"] = label
    _dump(out)
    return 0


def cmd_graph(args) -> int:
    xi, _ = resolve_xi(args)
    _, _, d = nearest_integer_decomposition(xi)
    graph = build_graph(d, args.depth)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(graph, RenderConfig()))
    if args.json or not args.svg:
        target = args.json if isinstance(args.json, str) else "-"
        if target == "-":
            _dump(graph.to_json())
        else:
            with open(target, "w") as fh:
                _dump(graph.to_json(), fh)
    return 0


def cmd_decode(args) -> int:
    xi, _ = resolve_xi(args)
    _, _, d = nearest_integer_decomposition(xi)
    cf = expand(d)
    graph = build_graph(d, args.depth)
    got = decode(graph)
    print(f"normalized: {rational_format(d)}")
    print(f"expanded:   {cf}")
    print(f"decoded:    {got}" + (" (prefix, graph truncated)" if got.partial else ""))
    if got.partial:
        ok = got.quotients == cf.quotients[: len(got.quotients)]
    else:
        ok = got.quotients == cf.quotients
    print("match" if ok else "MISMATCH")
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    xi, _ = resolve_xi(args)
    try:
        r = rational_parse(args.q_ratio)
        q = LogCoord(r)
    except (ParseError, ValueError) as exc:
        raise UsageError(f"--q-ratio: {exc}") from None
    if r < 1:
        raise UsageError("--q-ratio must be at least 1 (q >= 0)")
    w = brute_minima(xi, q)
    _dump({"xi": rational_format(xi), "q": q.to_json(), **w.to_json()})
    return 0


def _skip(report, names):
    if names:
        report.checks = [c for c in report.checks if c.name not in names]
    return report


def cmd_verify(args) -> int:
    xi, _ = resolve_xi(args)
    rep = _skip(verify_one(xi, samples=args.samples, oracle_bound=args.bound, depth=args.depth), args.skip)
    _dump(rep.to_json())
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}", file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_fuzz(args) -> int:
    if args.max_den < 2:
        raise UsageError("--max-den must be at least 2")
    summary = fuzz(args.max_den, args.count, args.seed, args.samples, args.jobs)
    for r in summary.reports:
        _skip(r, args.skip)
    if args.jsonl:
        lines = "".join(r.to_json_line() + "\n" for r in summary.reports)
        if args.jsonl == "-":
            sys.stdout.write(lines)
        else:
            with open(args.jsonl, "w") as fh:
                fh.write(lines)
    print(summary.table())
    return summary.exit_status


def cmd_render(args) -> int:
    xi, _ = resolve_xi(args)
    _, _, d = nearest_integer_decomposition(xi)
    graph = build_graph(d, args.depth)
    cfg = RenderConfig(
        q_max=args.qmax,
        width=args.width,
        height=args.height,
        show_trajectories=args.trajectories,
        show_q_labels=not args.no_labels,
    )
    svg = render_svg(graph, cfg)
    with open(args.output, "w") as fh:
        fh.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cfpgn",
        description="Continued fractions read off the successive minima of C_xi(e^q).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def with_xi(sp, depth=True):
        sp._negative_number_matcher = _NEGATIVE_NUMBER
        sp.add_argument("xi", nargs="?", help="p/q, integer or finite decimal")
        sp.add_argument("--quotients", help="comma-separated a1,a2,... of [0;a1,a2,...]")
        if depth:
            sp.add_argument("--depth", type=int, default=None,
                            help="max intervals between maxima of L1 (default $CFPGN_DEPTH or 64)")
        return sp

    sp = with_xi(sub.add_parser("expand", help="normalize and expand"), depth=False)
    sp.set_defaults(func=cmd_expand)

    sp = with_xi(sub.add_parser("graph", help="build the combined graph"))
    sp.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                    help="write graph JSON (default stdout)")
    sp.add_argument("--svg", metavar="PATH", help="write an SVG drawing")
    sp.set_defaults(func=cmd_graph)

    sp = with_xi(sub.add_parser("decode", help="decode the graph and compare with the expansion"))
    sp.set_defaults(func=cmd_decode)

    sp = with_xi(sub.add_parser("oracle", help="brute-force minima at q = log(r)/2"), depth=False)
    sp.add_argument("--q-ratio", required=True, metavar="p/q", help="r = e^(2q), at least 1")
    sp.set_defaults(func=cmd_oracle)

    sp = with_xi(sub.add_parser("verify", help="run every check on one number"))
    sp.add_argument("--samples", type=int, default=1, help="interior oracle samples per segment")
    sp.add_argument("--bound", type=int, default=None, help="|Q| range of the no-better-point scan")
    sp.add_argument("--skip", action="append", default=[], metavar="CHECK", help="omit a named check")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("fuzz", help="verify many reduced fractions in [0, 1/2]")
    sp.add_argument("--max-den", type=int, required=True)
    sp.add_argument("--count", type=int, default=None, help="sample size (default: all)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--jsonl", metavar="PATH", help="write one JSON report per line ('-' for stdout)")
    sp.add_argument("--skip", action="append", default=[], metavar="CHECK", help="omit a named check")
    sp.set_defaults(func=cmd_fuzz)

    sp = with_xi(sub.add_parser("render", help="draw the combined graph as SVG"))
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--qmax", type=float, default=None)
    sp.add_argument("--width", type=int, default=640)
    sp.add_argument("--height", type=int, default=400)
    sp.add_argument("--trajectories", action="store_true", help="dashed trajectories of the owners")
    sp.add_argument("--no-labels", action="store_true")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cfpgn: error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, RenderError, ValueError) as exc:
        print(f"cfpgn: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
