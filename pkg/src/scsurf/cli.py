"""Command-line front end. JSON goes to stdout, SVG to the ``--svg`` path.

Exit codes: 0 success, 1 a verification found a violation, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .flow import TraceError, separatrix, trace
from .numeric import Q, Vec, rat_str
from .render import render
from .surface import (
    HORIZONTAL, MINUS, PLUS, SLOPE_ONE, SurfaceHandle, SurfacePoint, VertexRef,
    WindowError, build_surface, cylinders, dump, reflect_x_symmetry, singularity_classes,
    swap_map,
)
from .unfolding import CORE_START, VERTEX_START, directional_code_compare
from .veech import (
    DirectionClass, classify_direction, integer_direction, matrix_D, matrix_E, primitive, realize,
    reduce_direction, verify_parabolic, verify_relations,
)

BASE_NAMES = {"horizontal": (1, 0), "slope-one": (1, 1)}
NEGATIVE_RATIONAL = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")
SUITES = ("relations", "moduli", "symmetry", "singularities", "parabolic")


class UsageError(Exception):
    pass


def rational(text: str):
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def parameter(text: str):
    c = rational(text)
    if c < 1:
        raise argparse.ArgumentTypeError(f"c must be >= 1, got {text}")
    return c


def _add_direction(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--direction", nargs=2, type=int, metavar=("P", "Q"))
    g.add_argument("--direction-rational", nargs=2, type=rational, metavar=("PX/QX", "PY/QY"))


def _direction(args) -> Vec:
    d = args.direction if args.direction is not None else args.direction_rational
    u = Vec(Q(d[0]), Q(d[1]))
    if u.is_zero():
        raise UsageError("direction must be nonzero")
    return u


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _handle(args) -> SurfaceHandle:
    return build_surface(args.c, max(args.window, 1))


def cmd_surface(args):
    _emit(dump(_handle(args), args.window))
    return 0


def cmd_cylinders(args):
    h = build_surface(args.c)
    _emit([cyl.to_json() for cyl in cylinders(h, args.direction, args.count)])
    return 0


def cmd_trace(args):
    h = _handle(args)
    start = SurfacePoint(args.component, Vec(args.start[0], args.start[1]))
    res = trace(h, start, _direction(args), args.max_crossings)
    _emit(res.to_json())
    return 0


def _vertex(text: str) -> VertexRef:
    # "P3+", "P-2-" or "3+"
    t = text[1:] if text[:1] in "Pp" else text
    if not t or t[-1] not in (PLUS, MINUS):
        raise argparse.ArgumentTypeError(f"bad vertex {text!r}; use e.g. P0+ or P-2-")
    try:
        return VertexRef(t[-1], int(t[:-1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad vertex {text!r}") from exc


def cmd_separatrix(args):
    h = _handle(args)
    res = separatrix(h, args.vertex, _direction(args), args.max_crossings)
    _emit(res.to_json())
    return 0


def cmd_classify(args):
    cls = classify_direction(primitive(integer_vector(args)))
    _emit({
        "direction": list(primitive(integer_vector(args))),
        "class": cls.value,
        "saddle_connections": cls != DirectionClass.VERTICAL_LIKE,
    })
    return 0


def integer_vector(args) -> tuple[int, int]:
    u = _direction(args)
    if u.x.denominator != 1 or u.y.denominator != 1:
        return integer_direction(u)
    return int(u.x), int(u.y)


def cmd_reduce(args):
    p, q = primitive(integer_vector(args))
    w, base = reduce_direction((p, q))
    check = realize(w, 1).matrix @ Vec(Q(base[0]), Q(base[1]))
    _emit({
        "direction": [p, q],
        "class": classify_direction((p, q)).value,
        "word": str(w),
        "base": list(base),
        "image": check.to_json(),
    })
    return 0


def cmd_compare(args):
    base = BASE_NAMES[args.base]
    report = directional_code_compare(args.word, base, args.c, args.start, args.max_crossings)
    _emit(report)
    return 0 if report["agree"] else 1


def verify_checks(c, suites, window: int = 50) -> list[dict]:
    h = build_surface(c, window)
    checks = []

    def add(name, ok, certifies):
        checks.append({"check": name, "passed": bool(ok), "certifies": certifies})

    if "relations" in suites:
        for name, ok in verify_relations(c).items():
            add(f"relation {name}", ok, "generated by the involutions A, B, C and -I")
    if "moduli" in suites:
        add("horizontal moduli 1/2",
            all(cy.modulus == Q(1, 2) for cy in cylinders(h, HORIZONTAL, window)),
            "the modulus of each horizontal cylinder is 1/2")
        add("slope-one moduli 1/(2c+2)",
            all(cy.modulus == 1 / (2 * c + 2) for cy in cylinders(h, SLOPE_ONE, window)),
            "the modulus of each slope-one cylinder is 1/(2c+2)")
    if "symmetry" in suites:
        add("vertex(-k) = r(vertex(k))", reflect_x_symmetry(h, window),
            "r(P_i) = P_-i")
        U = swap_map(c)
        add("U swaps P_i and P_1-i",
            all(U(h.vertex(k)) == h.vertex(1 - k) for k in range(-window + 1, window + 1)),
            "U swaps P_i with P_1-i")
    if "singularities" in suites:
        add("two cone singularities", len(singularity_classes(h, min(window, 10))) == 2,
            "the surface has two cone singularities")
    if "parabolic" in suites:
        ok_h, dh = verify_parabolic(h, HORIZONTAL, 2, window)
        ok_s, ds = verify_parabolic(h, SLOPE_ONE, 2 * c + 2, window)
        add("horizontal multi-twist has derivative D", ok_h and dh == matrix_D(c),
            "power of a single right Dehn twist in each horizontal cylinder")
        add("slope-one multi-twist has derivative E", ok_s and ds == matrix_E(c),
            "power of a single right Dehn twist in each slope-one cylinder")
    return checks


def cmd_verify(args):
    suites = SUITES if args.suite == "all" else (args.suite,)
    checks = verify_checks(args.c, suites, args.window)
    passed = all(ch["passed"] for ch in checks)
    _emit({"c": rat_str(args.c), "passed": passed, "checks": checks})
    return 0 if passed else 1


def cmd_render(args):
    h = _handle(args)
    tr = None
    if args.figure == "geodesic":
        if args.start is None or (args.direction is None and args.direction_rational is None):
            raise UsageError("geodesic figures need --start and --direction")
        start = SurfacePoint(args.component, Vec(args.start[0], args.start[1]))
        tr = trace(h, start, _direction(args), args.max_crossings)
    svg = render(h, args.figure, args.window, args.cylinders, tr)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(svg)
        _emit({"svg": args.svg, "figure": args.figure, "c": rat_str(h.c)})
    else:
        sys.stdout.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scsurf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def with_c(p, window=4):
        # let "-1/2" through as a value rather than an unknown option
        p._negative_number_matcher = NEGATIVE_RATIONAL
        p.add_argument("--c", type=parameter, default=Q(1), help="parameter c >= 1, as p/q")
        p.add_argument("--window", type=int, default=window)
        p.add_argument("--json", action="store_true", help="JSON output (the default)")
        return p

    p = with_c(sub.add_parser("surface", help="vertices, edges and cone points"))
    p.set_defaults(func=cmd_surface)

    p = with_c(sub.add_parser("cylinders", help="cylinder moduli"))
    p.add_argument("--direction", choices=(HORIZONTAL, SLOPE_ONE), default=HORIZONTAL)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_cylinders)

    p = with_c(sub.add_parser("trace", help="trace a geodesic from a point"))
    p.add_argument("--start", nargs=2, type=rational, required=True, metavar=("X", "Y"))
    p.add_argument("--component", choices=(PLUS, MINUS), default=PLUS)
    _add_direction(p)
    p.add_argument("--max-crossings", type=int, default=100)
    p.set_defaults(func=cmd_trace)

    p = with_c(sub.add_parser("separatrix", help="trace from a cone point"))
    p.add_argument("--vertex", type=_vertex, required=True, help="e.g. P0+ or P-2-")
    _add_direction(p)
    p.add_argument("--max-crossings", type=int, default=500)
    p.set_defaults(func=cmd_separatrix)

    p = with_c(sub.add_parser("classify", help="parity class of a rational direction"))
    _add_direction(p)
    p.set_defaults(func=cmd_classify)

    p = with_c(sub.add_parser("reduce", help="write a direction as a word applied to a base"))
    _add_direction(p)
    p.set_defaults(func=cmd_reduce)

    p = with_c(sub.add_parser("compare", help="compare directional codes on S_c and S_1"))
    p.add_argument("--word", default="")
    p.add_argument("--base", choices=tuple(BASE_NAMES), default="horizontal")
    p.add_argument("--start", choices=(VERTEX_START, CORE_START), default=VERTEX_START)
    p.add_argument("--max-crossings", type=int, default=100)
    p.set_defaults(func=cmd_compare)

    p = with_c(sub.add_parser("verify", help="run exact invariant checks"), window=50)
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.set_defaults(func=cmd_verify)

    p = with_c(sub.add_parser("render", help="draw the surface as SVG"))
    p.add_argument("--figure", choices=("surface", "cylinders", "geodesic"), default="surface")
    p.add_argument("--cylinders", choices=(HORIZONTAL, SLOPE_ONE), default=None)
    p.add_argument("--svg", help="output path; stdout when omitted")
    p.add_argument("--start", nargs=2, type=rational, metavar=("X", "Y"))
    p.add_argument("--component", choices=(PLUS, MINUS), default=PLUS)
    _add_direction(p, required=False)
    p.add_argument("--max-crossings", type=int, default=20)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "window", 1) < 0:
        print("error: --window must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, TraceError, WindowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
