"""Exact straight-line flow on S_c: point location, tracing and saddle connections."""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .numeric import ORIGIN, Q, Vec, orient, rat_str, wedge
from .surface import (
    MINUS, PLUS, EdgeLabel, SurfaceHandle, SurfacePoint, TriangleRef, VertexRef,
    WindowError, across, singularity_of,
)

BUDGET = "budget-exhausted"
SINGULARITY = "hit-singularity"
LEFT_WINDOW = "left-window"


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class Code:
    symbols: tuple[EdgeLabel, ...]
    anchor: int = 0

    def __len__(self):
        return len(self.symbols)

    def labels(self) -> list[str]:
        return [str(s) for s in self.symbols]

    @classmethod
    def parse(cls, labels) -> "Code":
        return cls(tuple(EdgeLabel.parse(s) for s in labels))


@dataclass(frozen=True)
class Terminal:
    kind: str
    vertex: VertexRef | None = None
    time: mpq | None = None

    def to_json(self):
        out = {"kind": self.kind}
        if self.vertex is not None:
            out["vertex"] = self.vertex.to_json()
        if self.time is not None:
            out["time"] = rat_str(self.time)
        return out


@dataclass
class TraceResult:
    c: mpq
    start: SurfacePoint | VertexRef
    start_triangle: TriangleRef
    direction: Vec
    code: Code
    terminal: Terminal
    time: mpq
    end: SurfacePoint
    end_triangle: TriangleRef
    # (component, from, to) for each straight piece inside one chart
    pieces: list = field(default_factory=list)
    # the start in the chart of start_triangle, whose exit edge is symbol 0
    start_point: Vec | None = None

    @property
    def holonomy(self) -> Vec:
        return self.direction * self.time

    def to_json(self):
        start = self.start.to_json()
        return {
            "c": rat_str(self.c),
            "start": start,
            "start_triangle": str(self.start_triangle),
            "direction": self.direction.to_json(),
            "code": self.code.labels(),
            "terminal": self.terminal.to_json(),
            "holonomy": self.holonomy.to_json(),
        }


@dataclass(frozen=True)
class SaddleConnection:
    start: VertexRef
    end: VertexRef
    holonomy: Vec
    code: Code

    @property
    def start_class(self) -> int:
        return singularity_of(self.start)

    @property
    def end_class(self) -> int:
        return singularity_of(self.end)


def _plus_frame(point: SurfacePoint) -> Vec:
    return point.position if point.component == PLUS else -point.position


def _ensure(h: SurfaceHandle, t: TriangleRef) -> bool:
    """Make triangle ``t`` available, doubling the window; False past the cap."""
    need = t.max_index()
    if need > h.cap:
        return False
    if t.n > h.window:
        h.extend(min(h.cap - 1, max(2 * h.window, t.n)))
    return True


def contains(verts, p) -> bool:
    return all(orient(verts[i], verts[(i + 1) % 3], p) >= 0 for i in range(3))


def locate(h: SurfaceHandle, point: SurfacePoint) -> list[TriangleRef]:
    """Triangles whose closure contains the point (one for interior points)."""
    p = _plus_frame(point)
    level = p.y - p.x
    if level < 0:
        raise TraceError(f"point {p} lies outside its piece")
    n = 1
    while h.chord_level(n + 1) < level:
        n += 1
        if n + 1 > h.cap:
            raise WindowError("point lies beyond the materialization cap")
    ns = [n]
    if level == h.chord_level(n) and n > 1:
        ns.insert(0, n - 1)
    if level == h.chord_level(n + 1):
        ns.append(n + 1)
    found = []
    for m in ns:
        for side in ("a", "b"):
            t = TriangleRef(PLUS, m, side)
            _ensure(h, t)
            if contains(h.triangle(t), p):
                found.append(TriangleRef(point.component, m, side))
    if not found:
        raise TraceError(f"point {point.position} lies outside its piece")
    return found


def _exit(verts, p, u):
    """Where the ray from p leaves the triangle: ("vertex", i) or ("edge", i)."""
    s = [wedge(u, v - p) for v in verts]
    for i in range(3):
        if s[i] == 0 and verts[i] != p and (verts[i] - p).dot(u) > 0:
            return "vertex", i
    for i in range(3):
        if s[i] < 0 < s[(i + 1) % 3]:
            return "edge", i
    raise AssertionError("ray does not leave the triangle")


def _ray_time(p, u, a, b):
    """Time at which ``p + t u`` meets the line through a and b."""
    return wedge(a - p, b - a) / wedge(u, b - a)


def _run(h, t, p, u, max_crossings, symbols, start, start_triangle, start_point,
         time=mpq(0)):
    pieces = []
    piece_start = p
    terminal = None
    while True:
        verts = h.triangle(t)
        kind, i = _exit(verts, p, u)
        if kind == "vertex":
            dt = _ray_time(p, u, verts[i], verts[i] + Vec(-u.y, u.x))
            time += dt
            p = verts[i]
            pieces.append((t.component, piece_start, p))
            terminal = Terminal(SINGULARITY, t.vertex_refs()[i], time)
            break
        if len(symbols) >= max_crossings:
            pieces.append((t.component, piece_start, p))
            terminal = Terminal(BUDGET)
            break
        a, b = verts[i], verts[(i + 1) % 3]
        dt = _ray_time(p, u, a, b)
        q = p + u * dt
        label = t.edges()[i]
        nxt, shift = across(h, t, label)
        if not _ensure(h, nxt):
            pieces.append((t.component, piece_start, q))
            p = q
            terminal = Terminal(LEFT_WINDOW)
            break
        time += dt
        symbols.append(label)
        if shift != ORIGIN:
            pieces.append((t.component, piece_start, q))
            q = q + shift
            piece_start = q
        t, p = nxt, q
    return TraceResult(
        c=h.c, start=start, start_triangle=start_triangle, direction=u,
        code=Code(tuple(symbols)), terminal=terminal, time=time,
        end=SurfacePoint(t.component, p), end_triangle=t, pieces=pieces,
        start_point=start_point,
    )


def _check_direction(direction) -> Vec:
    u = Vec(Q(direction[0]), Q(direction[1]))
    if u.is_zero():
        raise TraceError("zero direction")
    return u


def trace(h: SurfaceHandle, start: SurfacePoint, direction, max_crossings: int) -> TraceResult:
    """Follow the straight line from ``start`` for at most ``max_crossings`` edge crossings.

    A start on an edge counts as crossing that edge at time zero, into the
    triangle the direction points into.
    """
    u = _check_direction(direction)
    if max_crossings < 0:
        raise ValueError("max_crossings must be non-negative")
    start = SurfacePoint(start.component, Vec(Q(start.position.x), Q(start.position.y)))
    found = locate(h, start)
    p = start.position
    symbols: list[EdgeLabel] = []
    for t in found:
        verts = h.triangle(t)
        if all(orient(verts[i], verts[(i + 1) % 3], p) > 0 for i in range(3)):
            return _run(h, t, p, u, max_crossings, symbols, start, t, p)
    if any(p in h.triangle(t) for t in found):
        raise TraceError("start is a vertex; use separatrix()")
    t = found[0]
    verts = h.triangle(t)
    i = next(i for i in range(3) if orient(verts[i], verts[(i + 1) % 3], p) == 0)
    side = wedge(verts[(i + 1) % 3] - verts[i], u)
    if side == 0:
        raise TraceError("direction runs along the edge containing the start")
    label = t.edges()[i]
    nbr, shift = across(h, t, label)
    if side > 0:
        # moving into t: the neighbour is behind
        behind, behind_p, ahead, ahead_p = nbr, p + shift, t, p
    else:
        behind, behind_p, ahead, ahead_p = t, p, nbr, p + shift
    if max_crossings == 0:
        return _run(h, behind, behind_p, u, 0, symbols, start, behind, behind_p)
    symbols.append(label)
    return _run(h, ahead, ahead_p, u, max_crossings, symbols, start, behind, behind_p)


def incident_triangles(h: SurfaceHandle, v: VertexRef) -> list[TriangleRef]:
    k = v.k
    ns = (k - 1, k) if k >= 1 else (-k, 1 - k)
    out = []
    for n in ns:
        if n < 1:
            continue
        for side in ("a", "b"):
            t = TriangleRef(v.component, n, side)
            if k in t.vertex_indices():
                out.append(t)
    return out


def sector_triangle(h: SurfaceHandle, v: VertexRef, u: Vec) -> tuple[TriangleRef, int] | None:
    """The triangle at ``v`` whose closed angular sector holds ``u``, with v's slot in it."""
    for t in incident_triangles(h, v):
        _ensure(h, t)
        verts = h.triangle(t)
        i = t.vertex_indices().index(v.k)
        here, w1, w2 = verts[i], verts[(i + 1) % 3], verts[(i + 2) % 3]
        if wedge(w1 - here, u) >= 0 and wedge(u, w2 - here) >= 0:
            return t, i
    return None


def separatrix(h: SurfaceHandle, origin: VertexRef, direction, max_crossings: int) -> TraceResult:
    """Trace the trajectory leaving cone point ``origin`` in ``direction``."""
    u = _check_direction(direction)
    found = sector_triangle(h, origin, u)
    if found is None:
        raise TraceError(f"direction {u.to_json()} is not in the sector of {origin}")
    t, i = found
    verts = h.triangle(t)
    here, w1, w2 = verts[i], verts[(i + 1) % 3], verts[(i + 2) % 3]
    refs = t.vertex_refs()
    for w, j in ((w1, (i + 1) % 3), (w2, (i + 2) % 3)):
        if wedge(w - here, u) == 0:
            # runs along a triangulation edge
            time = (w - here).dot(u) / u.dot(u)
            return TraceResult(
                c=h.c, start=origin, start_triangle=t, direction=u, code=Code(()),
                terminal=Terminal(SINGULARITY, refs[j], time), time=time,
                end=SurfacePoint(t.component, w), end_triangle=t,
                pieces=[(t.component, here, w)], start_point=here,
            )
    j = (i + 1) % 3
    dt = _ray_time(here, u, w1, w2)
    q = here + u * dt
    if max_crossings == 0:
        return TraceResult(
            c=h.c, start=origin, start_triangle=t, direction=u, code=Code(()),
            terminal=Terminal(BUDGET), time=dt, end=SurfacePoint(t.component, q),
            end_triangle=t, pieces=[(t.component, here, q)], start_point=here,
        )
    label = t.edges()[j]
    nxt, shift = across(h, t, label)
    if not _ensure(h, nxt):
        return TraceResult(
            c=h.c, start=origin, start_triangle=t, direction=u, code=Code(()),
            terminal=Terminal(LEFT_WINDOW), time=dt, end=SurfacePoint(t.component, q),
            end_triangle=t, pieces=[(t.component, here, q)], start_point=here,
        )
    result = _run(h, nxt, q + shift, u, max_crossings, [label], origin, t, here, time=dt)
    result.pieces.insert(0, (t.component, here, q))
    if shift == ORIGIN:
        # the first piece continues in the same chart
        first, second = result.pieces[0], result.pieces[1]
        result.pieces[0:2] = [(first[0], first[1], second[2])]
    return result


def window_vertices(window: int):
    for k in range(-window, window + 1):
        for comp in (PLUS, MINUS):
            yield VertexRef(comp, k)


def find_saddle_connections(h: SurfaceHandle, direction, max_crossings: int = 500,
                            window: int = 3) -> list[SaddleConnection]:
    """Saddle connections found by launching separatrices from the window's cone points."""
    u = _check_direction(direction)
    seen = {}
    for v in window_vertices(window):
        for d in (u, -u):
            if sector_triangle(h, v, d) is None:
                continue
            res = separatrix(h, v, d, max_crossings)
            if res.terminal.kind != SINGULARITY:
                continue
            sc = SaddleConnection(v, res.terminal.vertex, res.holonomy, res.code)
            seen.setdefault((v, sc.holonomy), sc)
    return list(seen.values())


def reverse(h: SurfaceHandle, result: TraceResult) -> TraceResult:
    """Trace back from the end of ``result`` over the same number of crossings."""
    return trace(h, result.end, -result.direction, len(result.code))
