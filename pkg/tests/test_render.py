import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from scsurf.flow import trace
from scsurf.numeric import vec
from scsurf.render import normalize_svg, render, roman
from scsurf.surface import PLUS, SurfacePoint, build_surface

GOLDEN = Path(__file__).parent / "golden"
NS = "{http://www.w3.org/2000/svg}"


def vertices_of(svg, comp):
    root = ET.fromstring(svg)
    g = next(el for el in root.iter(f"{NS}g") if el.get("data-component") == comp)
    return {int(c.get("data-k")): (c.get("data-x"), c.get("data-y"))
            for c in g.iter(f"{NS}circle")}


def test_roman():
    assert [roman(n) for n in (1, 4, 5, 8, 9, 14)] == ["I", "IV", "V", "VIII", "IX", "XIV"]


def test_surface_figure_vertices():
    svg = render(build_surface(1), "surface", 4)
    assert vertices_of(svg, "+") == {n: (str(n), str(n * n)) for n in range(-4, 5)}
    assert vertices_of(svg, "-") == {n: (str(-n), str(-n * n)) for n in range(-4, 5)}
    root = ET.fromstring(svg)
    edges = [el for el in root.iter(f"{NS}line") if el.get("class") == "edge"]
    # each glued pair shares its numeral across the two pieces
    by_label = {}
    for el in edges:
        by_label.setdefault(el.get("data-label"), set()).add(el.get("data-roman"))
    assert len(by_label) == 8 and all(len(v) == 1 for v in by_label.values())


def test_cylinder_figure_shades_trapezoids():
    svg = render(build_surface("5/4"), "cylinders", 4)
    root = ET.fromstring(svg)
    polys = [el for el in root.iter(f"{NS}polygon") if "slope-one" in el.get("class", "")]
    assert sorted(int(p.get("data-n")) for p in polys) == [1, 1, 2, 2, 3, 3]
    assert all(len(p.get("points").split()) == 4 for p in polys)


def test_geodesic_figure_has_one_polyline_per_chart_visit():
    h = build_surface(1)
    res = trace(h, SurfacePoint(PLUS, vec("1/2", "3/4")), (1, 3), 20)
    svg = render(h, "geodesic", 4, trace=res)
    root = ET.fromstring(svg)
    pieces = [el for el in root.iter(f"{NS}polyline")]
    assert len(pieces) == len(res.pieces)
    boundary_crossings = sum(1 for s in res.code.symbols if s.kind == "boundary")
    assert len(pieces) == boundary_crossings + 1


@pytest.mark.parametrize("name, build", [
    ("surface_c1.svg", lambda: render(build_surface(1), "surface", 4)),
    ("cylinders_slope_one_c5_4.svg", lambda: render(build_surface("5/4"), "cylinders", 4,
                                                    cylinders="slope-one")),
    ("geodesic_c1.svg", lambda: render(
        build_surface(1), "geodesic", 4,
        trace=trace(build_surface(1), SurfacePoint(PLUS, vec("1/2", "3/4")), (1, 3), 20))),
])
def test_golden(name, build):
    expected = (GOLDEN / name).read_text()
    assert normalize_svg(build()) == normalize_svg(expected)


def test_render_is_deterministic():
    h = build_surface("5/4")
    assert render(h, "cylinders", 4) == render(h, "cylinders", 4)


def test_render_errors():
    h = build_surface(1)
    with pytest.raises(ValueError):
        render(h, "nothing")
    with pytest.raises(ValueError):
        render(h, "geodesic")
