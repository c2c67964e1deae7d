"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
non-convergence.  Data output goes to stdout (or --out); the banner and
diagnostics go to stderr so data streams stay byte-stable across runs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .config import ConfigError, parse_spec, validate_spec
from .dimension import analyze, box_count, oscillation_ladder
from .graph import RatioError, build_address_graph, components, positions
from .intervals import Interval
from .partition import build_partition
from .scaling import build_matrix, spectra_sequence
from .solver import ResolutionError, default_resolution, oscillation_sum, solve_rfif

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _threads() -> int:
    """Parallelism cap from RECURDIM_THREADS (0 = auto); reserved for
    per-component work, currently single-threaded."""
    try:
        return max(int(os.environ.get("RECURDIM_THREADS", "0")), 0)
    except ValueError:
        return 0


def _fr(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _component(spec, index: int):
    comps = components(build_address_graph(spec), spec)
    for c in comps:
        if c.index == index:
            return c
    raise ValueError(f"no component with index {index} (have 1..{len(comps)})")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + ("\n" if not text.endswith("\n") else ""))
    else:
        print(text)


def cmd_validate(args) -> int:
    spec = _load(args.spec)
    report = validate_spec(spec)
    if report.passed:
        _emit("OK", args.out)
        return EXIT_OK
    _emit(report.serialize(), args.out)
    return EXIT_INVALID


def cmd_scc(args) -> int:
    spec = _load(args.spec)
    graph = build_address_graph(spec)
    comps = components(graph, spec)
    pos = positions(graph, spec)
    lines = [
        f"r={c.index} members={list(c.members)} T={c.ratio}" for c in comps
    ]
    lines += [f"P({i})={pos(i)}" for i in range(1, spec.N + 1)]
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_partition(args) -> int:
    spec = _load(args.spec)
    comp = _component(spec, args.component)
    part = build_partition(spec, comp, args.level)
    theta = sorted(part.theta(args.level))
    lines = [f"theta={theta}"]
    for i in range(1, part.size(args.level) + 1):
        I = part.interval(args.level, i)
        D = part.preimage(args.level, i)
        lines.append(
            f"i={i} I=[{_fr(I.lo)},{_fr(I.hi)}] D=[{_fr(D.lo)},{_fr(D.hi)}] "
            f"owner={part.owner(args.level, i)} survives={str(i in part.theta(args.level)).lower()}"
        )
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_matrix(args) -> int:
    spec = _load(args.spec)
    comp = _component(spec, args.component)
    depth = args.level + 1 if args.kind.startswith("star") else args.level
    part = build_partition(spec, comp, depth)
    M = build_matrix(part, args.level, args.kind)
    lines = [f"index_set={list(M.index_set)}"]
    for row in M.dense():
        lines.append(",".join(f"{v:.6g}" for v in row))
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_spectra(args) -> int:
    spec = _load(args.spec)
    comp = _component(spec, args.component)
    part = build_partition(spec, comp, args.kmax)
    seq = spectra_sequence(part, args.kmax, tol=args.tol)
    if args.json:
        doc = {
            "component": seq.component,
            "levels": list(seq.levels),
            "rho_upper": list(seq.upper_rho),
            "rho_lower": list(seq.lower_rho),
            "bracket": list(seq.rho_bracket),
            "estimate": seq.rho_estimate,
            "one_sided": seq.one_sided,
        }
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        _emit(seq.serialize(), args.out)
    return EXIT_OK


def _solved(spec, args):
    comps = components(build_address_graph(spec), spec)
    Q = args.resolution or default_resolution(
        spec, max((c.ratio for c in comps), default=2)
    )
    return solve_rfif(spec, Q=Q, tol=args.tol)


def cmd_render(args) -> int:
    spec = _load(args.spec)
    f = _solved(spec, args)
    lines = ["x,f(x)"]
    x0, h = float(f.x0), float(f.h)
    for g, v in enumerate(f.values):
        lines.append(f"{x0 + g * h:.12f},{v:.12g}")
    _emit("\n".join(lines), args.out)
    if args.svg:
        _write_svg(f, args.svg)
    return EXIT_OK


def _write_svg(f, path: str) -> None:
    w, hh = 1000, 600
    vals = f.values
    vmin, vmax = float(vals.min()), float(vals.max())
    span = (vmax - vmin) or 1.0
    n = len(vals)
    pts = " ".join(
        f"{g * w / (n - 1):.2f},{hh - (float(v) - vmin) / span * hh:.2f}"
        for g, v in enumerate(vals)
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {hh}">'
        f'<polyline fill="none" stroke="black" stroke-width="1" points="{pts}"/></svg>'
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)


def cmd_oscillation(args) -> int:
    spec = _load(args.spec)
    comp = _component(spec, args.component)
    part = build_partition(spec, comp, 1)
    f = _solved(spec, args)
    lines = []
    for i in sorted(part.theta(1)):
        J = part.interval(1, i)
        o = oscillation_sum(f, comp.ratio, args.p, J)
        lines.append(f"i={i} J=[{_fr(J.lo)},{_fr(J.hi)}] O={o:.6g}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_dimension(args) -> int:
    spec = _load(args.spec)
    report = analyze(
        spec,
        kmax=args.kmax,
        pmax=args.pmax,
        Q=args.resolution,
        tol=args.tol,
        empirical=args.empirical,
    )
    if args.json:
        _emit(json.dumps(report.to_dict(), indent=2), args.out)
    else:
        _emit(report.serialize(), args.out)
    return EXIT_OK


def cmd_boxcount(args) -> int:
    spec = _load(args.spec)
    comp = _component(spec, args.component)
    f = _solved(spec, args)
    J = Interval(spec.x(min(comp.members) - 1), spec.x(max(comp.members)))
    lines = ["p,epsilon,count"]
    length = J.hi - J.lo
    for p in range(args.pmin, args.pmax + 1):
        eps = length / comp.ratio**p
        bc = box_count(f, eps, J)
        lines.append(f"{p},{bc.epsilon:.6g},{bc.count}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recurdim",
        description="Box-dimension bounds for recurrent fractal interpolation graphs.",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress the banner")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name)
        p.add_argument("spec", help="path to the instance file")
        p.add_argument("--out", default=None, help="write output to a file")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate)
    add("scc", cmd_scc)

    p = add("partition", cmd_partition)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--level", type=int, default=2)

    p = add("matrix", cmd_matrix)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument(
        "--kind",
        choices=["upper", "lower", "star_upper", "star_lower"],
        default="upper",
    )

    p = add("spectra", cmd_spectra)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true")

    p = add("render", cmd_render)
    p.add_argument("--resolution", type=int, default=None, metavar="Q")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--svg", default=None, help="also write an SVG polyline")

    p = add("oscillation", cmd_oscillation)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--resolution", type=int, default=None, metavar="Q")
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("dimension", cmd_dimension)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--pmax", type=int, default=8)
    p.add_argument("--resolution", type=int, default=None, metavar="Q")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--json", action="store_true")

    p = add("boxcount", cmd_boxcount)
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--pmin", type=int, default=3)
    p.add_argument("--pmax", type=int, default=8)
    p.add_argument("--resolution", type=int, default=None, metavar="Q")
    p.add_argument("--tol", type=float, default=1e-10)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if not args.quiet:
        print(f"recurdim {__version__}", file=sys.stderr)
    _threads()  # parsed for interface compatibility
    try:
        return args.fn(args)
    except (ConfigError, RatioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResolutionError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
