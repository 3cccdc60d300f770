"""Developing codes into the plane: intervals, the region V, feasibility cones
and comparison of codes between surfaces S_c and S_c'."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .flow import (
    SINGULARITY, Code, TraceResult, sector_triangle, separatrix, trace,
)
from .numeric import ORIGIN, Q, Vec, orient, rat_str, vec, wedge
from .surface import (
    MINUS, PLUS, SurfaceHandle, SurfacePoint, TriangleRef, VertexRef, across,
    build_surface, polygon_area,
)
from .veech import GroupWord, phi_pair


class MalformedCode(ValueError):
    pass


class DegenerateInterval(ValueError):
    def __init__(self, lo, hi):
        super().__init__(f"empty interval intersection [{rat_str(lo)}, {rat_str(hi)}]")
        self.lo, self.hi = lo, hi


@dataclass
class Development:
    triangle_refs: list[TriangleRef]
    triangles: list[tuple[Vec, Vec, Vec]]
    # s_j as (B_j, T_j): a straight line crossing s_j forward has T_j on its left
    segments: list[tuple[Vec, Vec]]
    code: Code

    def __len__(self):
        return len(self.segments)


def develop(h: SurfaceHandle, start_triangle: TriangleRef, code: Code) -> Development:
    """Lay the triangle chain of ``code`` out in the plane, starting at chart coordinates."""
    t = start_triangle
    offset = ORIGIN
    refs = [t]
    tris = [h.triangle(t)]
    segs = []
    prev = None
    for j, label in enumerate(code.symbols):
        if label == prev:
            raise MalformedCode(f"symbol {j} ({label}) backtracks")
        edges = t.edges()
        if label not in edges:
            raise MalformedCode(f"symbol {j} ({label}) is not an edge of {t}")
        i = edges.index(label)
        verts = tris[-1]
        segs.append((verts[i], verts[(i + 1) % 3]))
        t, shift = across(h, t, label)
        offset = offset - shift
        refs.append(t)
        tris.append(tuple(v + offset for v in h.triangle(t)))
        prev = label
    return Development(refs, tris, segs, code)


# -- feasibility cones -------------------------------------------------------

def convex_hull(points) -> list[Vec]:
    """Counterclockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class FeasibilityCone:
    """Open cone of directions strictly between ``lower`` and ``upper`` (counterclockwise)."""

    lower: Vec | None
    upper: Vec | None
    nonempty: bool
    # both sides are open: a direction through a developed vertex is never feasible
    closed_lower: bool = False
    closed_upper: bool = False

    def contains(self, u) -> bool:
        if not self.nonempty:
            return False
        if self.lower is None:
            return True
        u = Vec(Q(u[0]), Q(u[1]))
        # upper is the most clockwise difference T_i - B_j, -lower the most counterclockwise
        return wedge(u, self.upper) > 0 and wedge(u, -self.lower) > 0

    def to_json(self):
        return {
            "lower": self.lower.to_json() if self.lower is not None else None,
            "upper": self.upper.to_json() if self.upper is not None else None,
            "closed_lower": self.closed_lower,
            "closed_upper": self.closed_upper,
        }


EMPTY_CONE = FeasibilityCone(None, None, False)


def feasibility_cone(dev: Development) -> FeasibilityCone:
    """Directions u of straight segments crossing s_1..s_K in order.

    A line in direction u crosses every s_j iff some offset separates all
    bottoms from all tops, i.e. wedge(u, T_i - B_j) > 0 for every i, j.
    Only hull vertices of the tops and bottoms matter.
    """
    if not dev.segments:
        return FeasibilityCone(None, None, True)
    tops = convex_hull([t for _, t in dev.segments])
    bottoms = convex_hull([b for b, _ in dev.segments])
    diffs = [t - b for t in tops for b in bottoms]
    if any(w.is_zero() for w in diffs):
        return EMPTY_CONE
    cw = ccw = diffs[0]
    for w in diffs[1:]:
        if wedge(ccw, w) > 0:
            ccw = w
        elif wedge(w, cw) > 0:
            cw = w
    # every difference must sit in the closed arc from cw to ccw, which spans < pi
    span = wedge(cw, ccw)
    if span < 0 or (span == 0 and cw.dot(ccw) < 0):
        return EMPTY_CONE
    for w in diffs:
        if wedge(cw, w) < 0 or wedge(w, ccw) < 0:
            return EMPTY_CONE
    # u must have every difference strictly to its left
    return FeasibilityCone(-ccw, cw, True)


# -- the region V ------------------------------------------------------------

@dataclass
class RegionV:
    """V in normalized coordinates, where the reference line is the x-axis."""

    interval: tuple[mpq, mpq]
    polygon: list[Vec]
    pieces: list[list[Vec]]
    convex: bool
    tiles: bool
    contains_trace: bool

    @property
    def certified(self) -> bool:
        return self.convex and self.tiles and self.contains_trace

    def to_json(self):
        return {
            "interval": [rat_str(self.interval[0]), rat_str(self.interval[1])],
            "polygon": [p.to_json() for p in self.polygon],
            "convex": self.convex,
            "tiles": self.tiles,
            "contains_trace": self.contains_trace,
        }


def normalizer(u: Vec, base: Vec):
    """Rational similarity taking direction u to the positive x-axis and ``base`` to 0."""
    def f(p: Vec) -> Vec:
        d = p - base
        return Vec(u.x * d.x + u.y * d.y, u.x * d.y - u.y * d.x)
    return f


def clip_strip(poly, lo, hi) -> list[Vec]:
    """Intersect a convex polygon with lo <= y <= hi."""
    def clip(pts, keep, cross_y):
        out = []
        n = len(pts)
        for i in range(n):
            p, q = pts[i], pts[(i + 1) % n]
            kp, kq = keep(p), keep(q)
            if kp:
                out.append(p)
            if kp != kq:
                t = (cross_y - p.y) / (q.y - p.y)
                out.append(Vec(p.x + (q.x - p.x) * t, cross_y))
        return out

    pts = clip(list(poly), lambda p: p.y >= lo, lo)
    if pts:
        pts = clip(pts, lambda p: p.y <= hi, hi)
    # drop repeated points
    dedup = []
    for p in pts:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _separated(P, Q_) -> bool:
    """Separating axis test: True if the convex polygons have disjoint interiors."""
    for poly in (P, Q_):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            e = b - a
            # poly lies on the left of its ccw edges; Q_ entirely on the right or on it
            if all(wedge(e, q - a) <= 0 for q in (Q_ if poly is P else P)):
                return True
    return False


def disjoint_interiors(pieces) -> bool:
    boxes = sorted(
        (min(p.x for p in P), max(p.x for p in P), idx) for idx, P in enumerate(pieces)
    )
    active = []
    for x0, x1, idx in boxes:
        active = [(a1, j) for a1, j in active if a1 > x0]
        for _, j in active:
            if not _separated(pieces[idx], pieces[j]):
                return False
        active.append((x1, idx))
    return True


def region_V(dev: Development, direction, start_point: Vec) -> RegionV:
    """The part of the development at heights in I = ∩ I_j, in normalized coordinates."""
    u = Vec(Q(direction[0]), Q(direction[1]))
    f = normalizer(u, start_point)
    segs = [(f(b), f(t)) for b, t in dev.segments]
    if segs:
        lo = max(b.y for b, _ in segs)
        hi = min(t.y for _, t in segs)
    else:
        ys = [f(p).y for p in dev.triangles[0]]
        lo, hi = min(ys), max(ys)
    if lo >= hi:
        raise DegenerateInterval(lo, hi)
    pieces = []
    for tri in dev.triangles:
        piece = clip_strip([f(p) for p in tri], lo, hi)
        if len(piece) >= 3 and polygon_area(piece) > 0:
            pieces.append(piece)
    hull = convex_hull([p for piece in pieces for p in piece])
    n = len(hull)
    turns = [orient(hull[i], hull[(i + 1) % n], hull[(i + 2) % n]) for i in range(n)]
    convex = n >= 3 and all(t > 0 for t in turns)
    area_ok = sum(polygon_area(p) for p in pieces) == polygon_area(hull)
    tiles = area_ok and disjoint_interiors(pieces)
    # the reference segment at height 0 runs through V
    contains_trace = lo < 0 < hi
    return RegionV((lo, hi), hull, pieces, convex, tiles, contains_trace)


# -- mutants and cross-surface checks -----------------------------------------

def mutate(code: Code, start_triangle: TriangleRef, h: SurfaceHandle, j: int) -> Code:
    """Replace symbol j by the other non-entry edge of the triangle it exits."""
    if not 0 < j < len(code) - 1:
        raise ValueError("only interior symbols are mutated")
    t = start_triangle
    for label in code.symbols[:j]:
        t, _ = across(h, t, label)
    entry = code.symbols[j - 1]
    alt = [e for e in t.edges() if e not in (entry, code.symbols[j])]
    syms = list(code.symbols)
    syms[j] = alt[0]
    return Code(tuple(syms), code.anchor)


def code_is_feasible(h: SurfaceHandle, start_triangle: TriangleRef, code: Code):
    """(feasible, cone); malformed codes are infeasible."""
    try:
        dev = develop(h, start_triangle, code)
    except MalformedCode:
        return False, EMPTY_CONE
    cone = feasibility_cone(dev)
    return cone.nonempty, cone


def cross_surface_check(code: Code, c, c_prime, start_triangle: TriangleRef,
                        direction=None) -> dict:
    """Carry a code realized on S_c over to S_c' by its labels and test feasibility there."""
    hp = build_surface(c_prime)
    feasible, cone = code_is_feasible(hp, start_triangle, code)
    report = {
        "code": code.labels(),
        "c": rat_str(Q(c)),
        "c_prime": rat_str(Q(c_prime)),
        "feasible": feasible,
        "cone": cone.to_json(),
        "common_prefix": len(code),
    }
    if direction is not None:
        report["contains_direction"] = cone.contains(direction)
    return report


# -- directional comparison ----------------------------------------------------

VERTEX_START = "vertex"
CORE_START = "core"


def start_vertices(limit: int = 4):
    for k in range(limit + 1):
        for comp in (PLUS, MINUS):
            yield VertexRef(comp, k)
        if k:
            for comp in (PLUS, MINUS):
                yield VertexRef(comp, -k)


def _common_prefix(a, b) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def _core_start(h: SurfaceHandle, base) -> SurfacePoint:
    if tuple(base) == (1, 0):
        a, b = h.vertex(0), h.vertex(1)
    else:
        a, b = h.vertex(0), h.vertex(2)
    return SurfacePoint(PLUS, (a + b) * mpq(1, 2))


def directional_code_compare(w: GroupWord | str, base, c, start_kind: str = VERTEX_START,
                             max_crossings: int = 100) -> dict:
    """Trace corresponding trajectories on S_c and S_1 and compare their codes."""
    if isinstance(w, str):
        w = GroupWord.parse(w)
    base = tuple(int(x) for x in base)
    u_c, u_1 = phi_pair(w, base, c)
    hc, h1 = build_surface(c), build_surface(1)
    if start_kind == CORE_START:
        if len(w.reduced()) and w.reduced().letters != ("N",):
            raise ValueError("core-curve starts need the empty word")
        rc = trace(hc, _core_start(hc, base), u_c, max_crossings)
        r1 = trace(h1, _core_start(h1, base), u_1, max_crossings)
        start = "core"
    else:
        for v in start_vertices():
            sc, s1 = sector_triangle(hc, v, u_c), sector_triangle(h1, v, u_1)
            if sc is not None and s1 is not None and sc[0] == s1[0]:
                break
        else:
            raise ValueError("no common start sector")
        rc = separatrix(hc, v, u_c, max_crossings)
        r1 = separatrix(h1, v, u_1, max_crossings)
        start = str(v)
    a, b = rc.code.labels(), r1.code.labels()
    prefix = _common_prefix(a, b)
    same_end = rc.terminal.kind == r1.terminal.kind and (
        rc.terminal.kind != SINGULARITY or rc.terminal.vertex == r1.terminal.vertex)
    agree = a == b and same_end
    report = {
        "word": str(w),
        "base": list(base),
        "c": rat_str(Q(c)),
        "start": start,
        "direction_c": u_c.to_json(),
        "direction_1": u_1.to_json(),
        "common_prefix": prefix,
        "length_c": len(a),
        "length_1": len(b),
        "terminal_c": rc.terminal.kind,
        "terminal_1": r1.terminal.kind,
        "agree": agree,
    }
    if not agree:
        report["witness"] = {"c": a[: prefix + 1], "1": b[: prefix + 1]}
    return report


# -- harness used by the acceptance checks -------------------------------------

@dataclass
class TraceCheck:
    result: TraceResult
    in_cone: bool
    region: RegionV | None
    error: str | None = None


@dataclass
class MutationReport:
    checked: int = 0
    infeasible: int = 0
    malformed: int = 0
    corpus: list = field(default_factory=list)


def random_interior_point(h: SurfaceHandle, rng: random.Random, n_max: int = 4):
    comp = rng.choice((PLUS, MINUS))
    t = TriangleRef(comp, rng.randint(1, n_max), rng.choice("ab"))
    a, b, cc = h.triangle(t)
    w = [rng.randint(1, 50) for _ in range(3)]
    tot = sum(w)
    p = (a * w[0] + b * w[1] + cc * w[2]) * mpq(1, tot)
    return SurfacePoint(comp, p)


def random_direction(rng: random.Random, bound: int = 12):
    while True:
        p, q = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if (p, q) != (0, 0):
            return vec(p, q)


def check_trace(h: SurfaceHandle, res: TraceResult) -> TraceCheck:
    dev = develop(h, res.start_triangle, res.code)
    cone = feasibility_cone(dev)
    try:
        region = region_V(dev, res.direction, res.start_point)
    except DegenerateInterval as exc:
        return TraceCheck(res, cone.contains(res.direction), None, str(exc))
    return TraceCheck(res, cone.contains(res.direction), region)


def random_traces(h: SurfaceHandle, count: int, rng: random.Random, lo=50, hi=200):
    out = []
    while len(out) < count:
        res = trace(h, random_interior_point(h, rng), random_direction(rng), rng.randint(lo, hi))
        if len(res.code) >= 3:
            out.append(res)
    return out


def mutation_run(h: SurfaceHandle, traces, count: int, rng: random.Random) -> MutationReport:
    rep = MutationReport()
    while rep.checked < count:
        res = rng.choice(traces)
        j = rng.randint(1, len(res.code) - 2)
        mutant = mutate(res.code, res.start_triangle, h, j)
        rep.checked += 1
        try:
            dev = develop(h, res.start_triangle, mutant)
        except MalformedCode:
            rep.malformed += 1
            rep.infeasible += 1
            continue
        if feasibility_cone(dev).nonempty:
            rep.corpus.append({"start": str(res.start_triangle), "code": mutant.labels(), "j": j})
        else:
            rep.infeasible += 1
    return rep
