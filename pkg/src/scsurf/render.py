"""SVG pictures of S_c: both half-planes with glued edges, cylinders and traced geodesics.

Coordinates stay exact until serialization; each vertex also carries its
exact position in ``data-x``/``data-y`` so pictures can be compared exactly.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from math import atan2

from .numeric import Vec, rat_str
from .surface import HORIZONTAL, MINUS, PLUS, SLOPE_ONE, SurfaceHandle

SVG_NS = "http://www.w3.org/2000/svg"
ROMAN = [(10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")]
SHADES = ("#c9d9f0", "#f0dcc9")


def roman(n: int) -> str:
    out = []
    for value, sym in ROMAN:
        while n >= value:
            out.append(sym)
            n -= value
    return "".join(out)


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


class _Canvas:
    """Maps chart coordinates of one component to SVG user units (y flipped)."""

    def __init__(self, scale: float, dx: float, dy: float):
        self.scale, self.dx, self.dy = scale, dx, dy

    def xy(self, p: Vec) -> tuple[str, str]:
        return (_fmt(float(p.x) * self.scale + self.dx),
                _fmt(-float(p.y) * self.scale + self.dy))

    def points(self, pts) -> str:
        return " ".join(",".join(self.xy(p)) for p in pts)


def _layout(h: SurfaceHandle, window: int, size: float = 400.0, gap: float = 40.0):
    pts = [h.vertex(k) for k in range(-window, window + 1)]
    xs = [float(p.x) for p in pts]
    ys = [float(p.y) for p in pts]
    width = max(xs) - min(xs) or 1.0
    height = max(ys) - min(ys) or 1.0
    scale = size / max(width, height)
    pad = 20.0
    panel_w = width * scale
    # Plus opens upward, Minus (= -Plus) opens downward
    plus = _Canvas(scale, pad - min(xs) * scale, pad + max(ys) * scale)
    minus = _Canvas(scale, 2 * pad + panel_w + gap + max(xs) * scale, pad - min(ys) * scale)
    total_w = 3 * pad + 2 * panel_w + gap
    total_h = 2 * pad + height * scale
    return {PLUS: plus, MINUS: minus}, total_w, total_h


def _sign(comp: str, p: Vec) -> Vec:
    return p if comp == PLUS else -p


def render(h: SurfaceHandle, what: str = "surface", window: int = 4, cylinders: str | None = None,
           trace=None) -> str:
    """Return an SVG document.

    ``what`` is "surface", "cylinders" (shaded cylinders in direction
    ``cylinders``, default slope-one) or "geodesic" (needs a TraceResult).
    """
    if what not in ("surface", "cylinders", "geodesic"):
        raise ValueError(f"unknown figure {what!r}")
    if what == "cylinders" and cylinders is None:
        cylinders = SLOPE_ONE
    if what == "geodesic" and trace is None:
        raise ValueError("geodesic figure needs a trace")
    canvases, w, ht = _layout(h, window)
    ET.register_namespace("", SVG_NS)
    root = ET.Element("svg", {
        "xmlns": SVG_NS, "width": _fmt(w), "height": _fmt(ht),
        "viewBox": f"0 0 {_fmt(w)} {_fmt(ht)}",
        "data-c": rat_str(h.c), "data-window": str(window), "data-figure": what,
    })
    for comp in (PLUS, MINUS):
        cv = canvases[comp]
        g = ET.SubElement(root, "g", {"id": "plus" if comp == PLUS else "minus",
                                       "class": "component", "data-component": comp})
        if what == "cylinders":
            _cylinders(g, h, cv, comp, cylinders, window)
        _outline(g, h, cv, comp, window)
    if what == "geodesic":
        _geodesic(root, canvases, trace)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def _cylinders(g, h, cv, comp, direction, window):
    for n in range(1, window):
        if direction == SLOPE_ONE:
            ks = (-n, 1 - n, n, n + 1)
        elif direction == HORIZONTAL:
            ks = (-n, 1 - n, n - 1, n) if n > 1 else (-1, 0, 1)
        else:
            raise ValueError(f"unknown direction {direction!r}")
        pts = [_sign(comp, h.vertex(k)) for k in ks]
        ET.SubElement(g, "polygon", {
            "class": f"cylinder {direction}", "data-n": str(n),
            "points": cv.points(_ccw(pts)), "fill": SHADES[n % 2], "stroke": "none",
        })


def _ccw(pts):
    # vertices of a convex polygon sorted counterclockwise around the centroid
    cx = sum(float(p.x) for p in pts) / len(pts)
    cy = sum(float(p.y) for p in pts) / len(pts)
    uniq = list(dict.fromkeys(pts))
    return sorted(uniq, key=lambda p: atan2(float(p.y) - cy, float(p.x) - cx))


def _outline(g, h, cv, comp, window):
    ks = range(-window, window + 1)
    for k in range(-window, window):
        a, b = _sign(comp, h.vertex(k)), _sign(comp, h.vertex(k + 1))
        x1, y1 = cv.xy(a)
        x2, y2 = cv.xy(b)
        label = roman(k + window + 1)
        ET.SubElement(g, "line", {
            "class": "edge", "data-label": f"e{k}", "data-roman": label,
            "x1": x1, "y1": y1, "x2": x2, "y2": y2, "stroke": "black",
        })
        mx, my = cv.xy(Vec((a.x + b.x) / 2, (a.y + b.y) / 2))
        ET.SubElement(g, "text", {"class": "edge-label", "x": mx, "y": my,
                                  "font-size": "10"}).text = label
    for k in ks:
        p = _sign(comp, h.vertex(k))
        cx, cy = cv.xy(p)
        ET.SubElement(g, "circle", {
            "class": "vertex", "data-k": str(k), "data-x": rat_str(p.x), "data-y": rat_str(p.y),
            "cx": cx, "cy": cy, "r": "2",
        })


def _geodesic(root, canvases, trace):
    g = ET.SubElement(root, "g", {"class": "geodesic"})
    for comp, a, b in trace.pieces:
        ET.SubElement(g, "polyline", {
            "class": "geodesic-piece", "data-component": comp,
            "data-from": " ".join(a.to_json()), "data-to": " ".join(b.to_json()),
            "points": canvases[comp].points([a, b]), "stroke": "red", "fill": "none",
        })


def normalize_svg(text: str) -> list[tuple]:
    """Structural fingerprint for golden comparisons: tags plus exact data attributes."""
    root = ET.fromstring(text)
    out = []
    for el in root.iter():
        tag = el.tag.split("}")[-1]
        data = tuple(sorted((k, v) for k, v in el.attrib.items() if k.startswith("data-")))
        cls = el.attrib.get("class", "")
        out.append((tag, cls, data, (el.text or "").strip()))
    return out
