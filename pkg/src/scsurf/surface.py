"""Lazy exact model of the surface S_c built from two infinite convex pieces.

The upper piece ``Q+`` is the convex hull of the orbit ``P_k = T^k(0, 0)`` of
the affine map ``T(x, y) = (c x + (c-1) y + 1, (c+1) x + c y + 1)``; the lower
piece ``Q-`` is its rotation by pi about the origin. Edge ``e_k = P_k P_{k+1}``
of ``Q+`` is glued by translation to the parallel edge ``-P_{k+1} -P_k`` of
``Q-``.

Each piece is cut into trapezoids ``T_n = conv(P_-n, P_1-n, P_n, P_n+1)``
bounded by slope-one chords, and every trapezoid is split by the diagonal
``d_n = P_1-n P_n+1``. Triangle ``a_n = (P_1-n, P_n, P_n+1)`` holds the right
boundary edge ``e_n``; triangle ``b_n = (P_1-n, P_n+1, P_-n)`` holds the left
boundary edge ``e_-n``. Both are listed counterclockwise.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterator

from gmpy2 import mpq

from .numeric import (
    ORIGIN, AffineMap, Q, Vec, mat, orient, rat_str, reflect_x, translation, vec, wedge,
)

PLUS = "+"
MINUS = "-"
GLUED = "glued"

BOUNDARY = "boundary"
CHORD = "chord"
DIAGONAL = "diagonal"

HORIZONTAL = "horizontal"
SLOPE_ONE = "slope-one"

DEFAULT_CAP = 1024


class WindowError(RuntimeError):
    """A computation needed vertices beyond the hard materialization cap."""


def other(component: str) -> str:
    return MINUS if component == PLUS else PLUS


@dataclass(frozen=True, order=True)
class EdgeLabel:
    kind: str
    index: int
    component: str

    def __post_init__(self):
        if self.kind == BOUNDARY:
            if self.component != GLUED:
                raise ValueError("boundary edges are glued pairs")
        elif self.kind == CHORD:
            if self.index < 2 or self.component not in (PLUS, MINUS):
                raise ValueError(f"bad chord label s_{self.index}{self.component}")
        elif self.kind == DIAGONAL:
            if self.index < 1 or self.component not in (PLUS, MINUS):
                raise ValueError(f"bad diagonal label d_{self.index}{self.component}")
        else:
            raise ValueError(f"unknown edge kind {self.kind!r}")

    def sort_key(self):
        return (self.kind, self.component, self.index)

    def __str__(self):
        if self.kind == BOUNDARY:
            return f"e{self.index}"
        prefix = "s" if self.kind == CHORD else "d"
        return f"{prefix}{self.index}{self.component}"

    def to_json(self):
        return {"kind": self.kind, "n": self.index, "component": self.component}

    @classmethod
    def parse(cls, text: str) -> "EdgeLabel":
        """Inverse of ``str``: ``e-2``, ``s3+``, ``d1-``."""
        kind = {"e": BOUNDARY, "s": CHORD, "d": DIAGONAL}.get(text[:1])
        if kind is None:
            raise ValueError(f"bad edge label {text!r}")
        if kind == BOUNDARY:
            return cls(kind, int(text[1:]), GLUED)
        return cls(kind, int(text[1:-1]), text[-1])


def boundary(k: int) -> EdgeLabel:
    return EdgeLabel(BOUNDARY, k, GLUED)


def chord(n: int, component: str) -> EdgeLabel:
    """The slope-one segment ``P_1-n P_n``; for n = 1 it is the boundary edge e_0."""
    if n == 1:
        return boundary(0)
    return EdgeLabel(CHORD, n, component)


def diagonal(n: int, component: str) -> EdgeLabel:
    return EdgeLabel(DIAGONAL, n, component)


@dataclass(frozen=True, order=True)
class VertexRef:
    component: str
    k: int

    def __str__(self):
        return f"P{self.k}{self.component}"

    def to_json(self):
        return {"component": self.component, "k": self.k}


@dataclass(frozen=True, order=True)
class TriangleRef:
    component: str
    n: int
    side: str  # "a" (holds e_n) or "b" (holds e_-n)

    def __str__(self):
        return f"{self.side}{self.n}{self.component}"

    def vertex_indices(self) -> tuple[int, int, int]:
        n = self.n
        if self.side == "a":
            return (1 - n, n, n + 1)
        return (1 - n, n + 1, -n)

    def vertex_refs(self) -> tuple[VertexRef, VertexRef, VertexRef]:
        return tuple(VertexRef(self.component, k) for k in self.vertex_indices())

    def edges(self) -> tuple[EdgeLabel, EdgeLabel, EdgeLabel]:
        """Edge labels in counterclockwise order: edge i joins vertex i to vertex i+1."""
        n, comp = self.n, self.component
        if self.side == "a":
            return (chord(n, comp), boundary(n), diagonal(n, comp))
        return (diagonal(n, comp), chord(n + 1, comp), boundary(-n))

    def max_index(self) -> int:
        return self.n + 1

    @classmethod
    def parse(cls, text: str) -> "TriangleRef":
        return cls(text[-1], int(text[1:-1]), text[0])


@dataclass(frozen=True)
class SurfacePoint:
    component: str
    position: Vec

    def to_json(self):
        return {"component": self.component, "position": self.position.to_json()}


@dataclass(frozen=True)
class Cylinder:
    direction: str
    index: int
    circumference_sq: mpq
    area: mpq
    modulus: mpq

    def to_json(self):
        return {
            "direction": self.direction,
            "n": self.index,
            "circumference_sq": rat_str(self.circumference_sq),
            "area": rat_str(self.area),
            "modulus": rat_str(self.modulus),
        }


def generator_map(c) -> AffineMap:
    """The affine map T_c whose orbit of the origin gives the vertices."""
    c = Q(c)
    return AffineMap(mat(c, c - 1, c + 1, c), vec(1, 1))


def swap_map(c) -> AffineMap:
    """The involution U_c exchanging P_i and P_{1-i}."""
    c = Q(c)
    return AffineMap(mat(-c, c - 1, -(c + 1), c), vec(1, 1))


class SurfaceHandle:
    """Lazily materialized S_c.

    Vertices are cached on both sides of the seed; positive indices come from
    iterating T_c and negative ones from iterating its inverse, so the mirror
    symmetry ``P_-k = r(P_k)`` stays a checkable fact rather than a definition.
    """

    def __init__(self, c, window: int = 4, cap: int = DEFAULT_CAP):
        c = Q(c)
        if c < 1:
            raise ValueError(f"c must be >= 1, got {rat_str(c)}")
        if window < 0:
            raise ValueError("window must be non-negative")
        self.c = c
        self.cap = cap
        self.T = generator_map(c)
        self.T_inv = self.T.inverse()
        self._forward = [ORIGIN]
        self._backward = [ORIGIN]
        self._lock = threading.Lock()
        self.window = window
        self._materialize(window + 1)

    def __repr__(self):
        return f"SurfaceHandle(c={rat_str(self.c)}, window={self.window})"

    def _materialize(self, radius: int):
        if len(self._forward) > radius and len(self._backward) > radius:
            return
        with self._lock:
            fwd, bwd = list(self._forward), list(self._backward)
            while len(fwd) <= radius:
                fwd.append(self.T(fwd[-1]))
            while len(bwd) <= radius:
                bwd.append(self.T_inv(bwd[-1]))
            # readers only ever see fully built lists
            self._forward, self._backward = fwd, bwd

    def extend(self, window: int):
        """Grow the materialized window; never shrinks."""
        if window > self.window:
            self._materialize(window + 1)
            self.window = window

    def vertex(self, k: int) -> Vec:
        """P_k in the chart of Q+."""
        self._materialize(abs(k))
        return self._forward[k] if k >= 0 else self._backward[-k]

    def position(self, v: VertexRef) -> Vec:
        p = self.vertex(v.k)
        return p if v.component == PLUS else -p

    def triangle(self, t: TriangleRef) -> tuple[Vec, Vec, Vec]:
        """Chart coordinates of a triangle's vertices, counterclockwise."""
        pts = tuple(self.vertex(k) for k in t.vertex_indices())
        if t.component == MINUS:
            pts = tuple(-p for p in pts)
        return pts

    def edge_endpoints(self, label: EdgeLabel, component: str) -> tuple[Vec, Vec]:
        """Endpoints of an edge in the chart of ``component``."""
        if label.kind == BOUNDARY:
            k = label.index
            a, b = self.vertex(k), self.vertex(k + 1)
        elif label.kind == CHORD:
            n = label.index
            a, b = self.vertex(1 - n), self.vertex(n)
        else:
            n = label.index
            a, b = self.vertex(1 - n), self.vertex(n + 1)
        if component == MINUS:
            return -a, -b
        return a, b

    def holonomy(self, label: EdgeLabel) -> Vec:
        """Holonomy of an edge oriented from its first to its second endpoint (Q+ chart)."""
        a, b = self.edge_endpoints(label, PLUS)
        return b - a

    def gluing_shift(self, k: int) -> Vec:
        return self.vertex(k) + self.vertex(k + 1)

    def chord_level(self, n: int):
        """The constant value of y - x along the slope-one chord through P_n."""
        p = self.vertex(n)
        return p.y - p.x


def build_surface(c, initial_window: int = 4, cap: int = DEFAULT_CAP) -> SurfaceHandle:
    return SurfaceHandle(c, initial_window, cap)


def vertex(h: SurfaceHandle, k: int) -> Vec:
    return h.vertex(k)


def gluing_transfer(h: SurfaceHandle, k: int) -> AffineMap:
    """Translation carrying boundary edge e_k of Q+ onto its partner in Q-."""
    return translation(-h.gluing_shift(k))


def boundary_triangle(k: int, component: str) -> TriangleRef:
    if k >= 1:
        return TriangleRef(component, k, "a")
    if k == 0:
        return TriangleRef(component, 1, "a")
    return TriangleRef(component, -k, "b")


def across(h: SurfaceHandle, t: TriangleRef, label: EdgeLabel) -> tuple[TriangleRef, Vec]:
    """The triangle on the far side of ``label`` and the chart shift to apply.

    A point ``p`` in the chart of ``t`` on the shared edge sits at ``p + shift``
    in the chart of the returned triangle.
    """
    if label not in t.edges():
        raise ValueError(f"edge {label} is not a side of triangle {t}")
    if label.kind == BOUNDARY:
        shift = h.gluing_shift(label.index)
        if t.component == PLUS:
            shift = -shift
        return boundary_triangle(label.index, other(t.component)), shift
    zero = ORIGIN
    if label.kind == DIAGONAL:
        return TriangleRef(t.component, t.n, "b" if t.side == "a" else "a"), zero
    n = label.index
    if t.side == "a":
        return TriangleRef(t.component, n - 1, "b"), zero
    return TriangleRef(t.component, n, "a"), zero


def triangles(window: int, components=(PLUS, MINUS)) -> Iterator[TriangleRef]:
    for comp in components:
        for n in range(1, window + 1):
            yield TriangleRef(comp, n, "a")
            yield TriangleRef(comp, n, "b")


def triangulation(h: SurfaceHandle, window: int) -> list[tuple[EdgeLabel, tuple[VertexRef, VertexRef]]]:
    """Edges of the trapezoid-plus-diagonal triangulation inside ``window``.

    Boundary edges are reported once (with their Q+ endpoints) since the two
    glued copies carry one label.
    """
    h.extend(window)
    edges = []
    for k in range(-window, window + 1):
        edges.append((boundary(k), (VertexRef(PLUS, k), VertexRef(PLUS, k + 1))))
    for comp in (PLUS, MINUS):
        for n in range(2, window + 1):
            edges.append((chord(n, comp), (VertexRef(comp, 1 - n), VertexRef(comp, n))))
        for n in range(1, window + 1):
            edges.append((diagonal(n, comp), (VertexRef(comp, 1 - n), VertexRef(comp, n + 1))))
    edges.sort(key=lambda e: e[0].sort_key())
    return edges


def incidence(window: int) -> dict[TriangleRef, tuple[EdgeLabel, ...]]:
    """Labeled triangle/edge incidence; it does not depend on c."""
    return {t: t.edges() for t in triangles(window)}


def singularity_classes(h: SurfaceHandle, window: int) -> list[list[VertexRef]]:
    """Partition window vertices into cone points by following the edge gluings."""
    h.extend(window)
    parent: dict[VertexRef, VertexRef] = {}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    for comp in (PLUS, MINUS):
        for k in range(-window, window + 2):
            v = VertexRef(comp, k)
            parent[v] = v
    for k in range(-window, window + 1):
        move = gluing_transfer(h, k)
        lo, hi = h.vertex(k), h.vertex(k + 1)
        # the translation lands each endpoint on a vertex of Q-; find which one
        for src_k, src in ((k, lo), (k + 1, hi)):
            image = move(src)
            dst_k = k + 1 if src_k == k else k
            if image != -h.vertex(dst_k):
                raise AssertionError(f"gluing of e_{k} does not match vertices")
            union(VertexRef(PLUS, src_k), VertexRef(MINUS, dst_k))
    classes: dict[VertexRef, list[VertexRef]] = {}
    for v in sorted(parent):
        classes.setdefault(find(v), []).append(v)
    return sorted(classes.values(), key=lambda cls: min(cls))


def singularity_of(v: VertexRef) -> int:
    """Global cone point index (0 or 1) of a vertex, from the gluing parity pattern."""
    parity = v.k % 2
    return parity if v.component == PLUS else 1 - parity


def polygon_area(pts) -> mpq:
    """Signed shoelace area."""
    total = mpq(0)
    n = len(pts)
    for i in range(n):
        total += wedge(pts[i], pts[(i + 1) % n])
    return total / 2


def cylinders(h: SurfaceHandle, direction: str, count: int) -> list[Cylinder]:
    """Maximal cylinders 1..count in the horizontal or slope-one direction.

    Areas come from the shoelace formula on the two trapezoid halves, and
    circumferences from the chord lengths where the cylinder closes up, so the
    modulus ``area / circumference^2`` needs no square roots.
    """
    if count < 1:
        raise ValueError("count must be positive")
    h.extend(count + 1)
    out = []
    P = h.vertex
    for n in range(1, count + 1):
        if direction == HORIZONTAL:
            circ = 2 * P(n - 1).x + 2 * P(n).x
            circ_sq = circ * circ
            piece = [P(-(n - 1)), P(n - 1), P(n), P(-n)]
        elif direction == SLOPE_ONE:
            span = P(n).x - P(1 - n).x + P(n + 1).x - P(-n).x
            circ_sq = 2 * span * span
            piece = [P(1 - n), P(n), P(n + 1), P(-n)]
        else:
            raise ValueError(f"unknown direction {direction!r}")
        area = 2 * polygon_area(piece)
        out.append(Cylinder(direction, n, circ_sq, area, area / circ_sq))
    return out


def cylinder_boundaries(h: SurfaceHandle, direction: str, n: int) -> list[list[tuple[Vec, Vec]]]:
    """The two boundary circles of cylinder n, each as a list of planar segments.

    A segment of zero length means the circle only touches that piece at a
    single vertex.
    """
    P = h.vertex
    if direction == HORIZONTAL:
        bottom = [(P(-(n - 1)), P(n - 1)), (-P(n), -P(-n))]
        top = [(P(-n), P(n)), (-P(n - 1), -P(-(n - 1)))]
    elif direction == SLOPE_ONE:
        bottom = [(P(1 - n), P(n)), (-P(-n), -P(n + 1))]
        top = [(P(-n), P(n + 1)), (-P(1 - n), -P(n))]
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return [bottom, top]


def smallest_cylinder_signature(h: SurfaceHandle, direction: str, search: int = 8) -> tuple[mpq, int]:
    """Area of the smallest maximal cylinder and the number of cone points on its boundary.

    Each boundary circle is a cyclic chain of saddle connections joined at cone
    points, so a circle with m non-degenerate segments carries m cone points.
    """
    cyls = cylinders(h, direction, search)
    smallest = min(cyls, key=lambda cy: cy.area)
    if smallest.index == search:
        raise WindowError("cylinder areas did not increase within the search window")
    count = 0
    for circle in cylinder_boundaries(h, direction, smallest.index):
        count += sum(1 for a, b in circle if a != b)
    return smallest.area, count


def reflect_x_symmetry(h: SurfaceHandle, window: int) -> bool:
    """True when P_-k is the mirror image of P_k for |k| <= window."""
    return all(h.vertex(-k) == reflect_x(h.vertex(k)) for k in range(window + 1))


def is_convex_chain(h: SurfaceHandle, lo: int, hi: int) -> bool:
    """True when P_lo..P_hi turn strictly left at every vertex."""
    return all(orient(h.vertex(k), h.vertex(k + 1), h.vertex(k + 2)) > 0 for k in range(lo, hi - 1))


def dump(h: SurfaceHandle, window: int) -> dict:
    """JSON-ready description of the materialized window."""
    h.extend(window)
    return {
        "c": rat_str(h.c),
        "window": window,
        "vertices": [
            {"k": k, "x": rat_str(h.vertex(k).x), "y": rat_str(h.vertex(k).y)}
            for k in range(-window, window + 1)
        ],
        "edges": [label.to_json() for label, _ in triangulation(h, window)],
        "singularity_classes": [
            [v.to_json() for v in cls] for cls in singularity_classes(h, window)
        ],
    }
