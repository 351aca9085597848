"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (inconsistent network, failed
verification), 2 realization budget exhausted, 64 unreadable input,
74 file system errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .algebra import parse_mask
from .consistency import path_consistency
from .network import Network, NetworkError, ParseError, parse_network

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_PARSE, EXIT_IO = 0, 1, 2, 64, 74
SVG_SIZE = 800
SVG_DIGITS = 12


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _network(path: str) -> Network:
    try:
        return parse_network(_read(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None


def _realization(path: str):
    from .geometry import GeometryError
    from .realize import Realization
    try:
        obj = json.loads(_read(path))
        return Realization.from_json(obj)
    except (ValueError, KeyError, TypeError, GeometryError) as exc:
        raise CliError(f"{path}: not a realization file ({exc})", EXIT_PARSE) from None


def _dumps(obj: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj}, sort_keys=True, indent=2) + "\n"


# -- commands ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    net = _network(args.file)
    closed, trace = path_consistency(net, record=True)
    for line in trace.describe(net):
        print(line)
    if trace.consistent and args.show:
        sys.stdout.write(closed.to_text())
    return EXIT_OK if trace.consistent else EXIT_NO


def cmd_classify(args) -> int:
    from .realize import InconsistentNetworkError, classify_fragment, prepare
    net = _network(args.file)
    try:
        atomic, quotient, _ = prepare(net, args.seed)
    except InconsistentNetworkError as exc:
        print(_dumps({"consistent": False, "error": str(exc)}), end="")
        return EXIT_NO
    fb = classify_fragment(quotient)
    out = {"consistent": True, "refined": not net.is_atomic, **fb.to_json()}
    print(_dumps(out), end="")
    return EXIT_OK


def cmd_realize(args) -> int:
    from .realize import DimensionNotAchieved, InconsistentNetworkError, realize
    net = _network(args.file)
    try:
        r = realize(net, args.dim, seed=args.seed, retries=args.retries)
    except InconsistentNetworkError as exc:
        print(_dumps({"ok": False, "error": str(exc)}), end="", file=sys.stderr)
        return EXIT_NO
    except DimensionNotAchieved as exc:
        report = {"ok": False, "error": str(exc), "target_dim": exc.target,
                  "achieved_dim": exc.achieved.dim if exc.achieved is not None else None}
        print(_dumps(report), end="", file=sys.stderr)
        return EXIT_BUDGET
    _write(args.out, _dumps(r.to_json()))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .realize import verify
    net = _network(args.net)
    r = _realization(args.real)
    try:
        rep = verify(net, r, weak=True if args.weak else None, check_common_part=False)
    except NetworkError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    print(_dumps(rep.to_json()), end="")
    return EXIT_OK if rep.ok else EXIT_NO


def _gap_flag(job):
    from .oracle import realizable_1d
    net, weak = job
    return realizable_1d(net, weak=weak) is None


def cmd_enumerate(args) -> int:
    from .oracle import enumerate_atomic
    try:
        text = args.relations.strip()
        allowed = parse_mask(text if text.startswith("{") else "{" + text + "}")
    except ValueError as exc:
        raise CliError(f"bad relation list: {exc}", EXIT_PARSE) from None
    nets = enumerate_atomic(args.vars, allowed)
    if args.gap_only:
        jobs = [(n, args.weak) for n in nets]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                flags = list(pool.map(_gap_flag, jobs, chunksize=8))
        else:
            flags = [_gap_flag(j) for j in jobs]
        nets = [n for n, f in zip(nets, flags) if f]
    for k, n in enumerate(nets, 1):
        print(f"# class {k}")
        sys.stdout.write(n.to_text())
    kind = ("weak " if args.weak else "") + ("gap classes" if args.gap_only else "classes")
    print(f"{kind}: {len(nets)}")
    return EXIT_OK


def cmd_gen(args) -> int:
    from .corpus import CorpusError, gen, manifest
    if args.family is None or args.family == "manifest":
        print(_dumps({"families": manifest()}), end="")
        return EXIT_OK
    try:
        net = gen(args.family, args.n, args.variant)
    except CorpusError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    _write(args.out, net.to_text())
    return EXIT_OK


def _num(x: float) -> str:
    return f"{x:.{SVG_DIGITS}g}"


def _ordered(vertices):
    cx = sum(float(v[0]) for v in vertices) / len(vertices)
    cy = sum(float(v[1]) for v in vertices) / len(vertices)
    return sorted(vertices, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx))


def render_svg(r) -> str:
    """Polygons with labels, scaled into an 800 by 800 box (y axis up)."""
    if r.dim != 2:
        raise CliError("plot needs a two-dimensional realization", EXIT_PARSE)
    pts = [v for p in r.regions.values() for v in p.vertices]
    if not pts:
        lo = [Fraction(0), Fraction(0)]
        span = Fraction(1)
    else:
        lo = [min(v[i] for v in pts) for i in range(2)]
        hi = [max(v[i] for v in pts) for i in range(2)]
        span = max(hi[0] - lo[0], hi[1] - lo[1]) or Fraction(1)
    pad = SVG_SIZE * 0.05
    scale = (SVG_SIZE - 2 * pad) / float(span)

    def xy(v):
        return pad + float(v[0] - lo[0]) * scale, SVG_SIZE - pad - float(v[1] - lo[1]) * scale

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" '
             f'width="{SVG_SIZE}" height="{SVG_SIZE}">']
    for k, name in enumerate(sorted(r.regions)):
        verts = _ordered(r.regions[name].vertices)
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in map(xy, verts))
        hue = (k * 137) % 360
        lines.append(f'  <polygon points="{coords}" fill="hsl({hue},60%,60%)" fill-opacity="0.3" '
                     f'stroke="hsl({hue},60%,35%)" stroke-width="1"/>')
        cx = sum(xy(v)[0] for v in verts) / len(verts)
        cy = sum(xy(v)[1] for v in verts) / len(verts)
        lines.append(f'  <text x="{_num(cx)}" y="{_num(cy)}" font-size="14" '
                     f'text-anchor="middle">{name}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def cmd_plot(args) -> int:
    r = _realization(args.real)
    _write(args.out, render_svg(r))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rcc-convex", description="Convex realizations of RCC8 networks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="path consistency with a refinement trace")
    s.add_argument("file")
    s.add_argument("--show", action="store_true", help="print the closed network when consistent")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("classify", help="fragment, dimension bound and strategy (JSON)")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("realize", help="verified convex realization (JSON)")
    s.add_argument("file")
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--retries", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("verify", help="check a realization against a network")
    s.add_argument("net")
    s.add_argument("real")
    s.add_argument("--weak", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", help="atomic networks up to isomorphism")
    s.add_argument("--vars", type=int, required=True)
    s.add_argument("--relations", required=True, help="comma-separated base relations or abbreviations")
    s.add_argument("--weak", action="store_true")
    s.add_argument("--gap-only", action="store_true", help="only classes without an interval solution")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("gen", help="named network families; without --family lists them")
    s.add_argument("--family", default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--variant", default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("plot", help="SVG drawing of a 2D realization")
    s.add_argument("real")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
