import json

import pytest

from scsurf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--c", "5/4", "--suite", "all")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert all(ch["passed"] and ch["certifies"] for ch in doc["checks"])


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--direction", "2", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["class"] == "vertical-like" and doc["saddle_connections"] is False
    _, out, _ = run(capsys, "classify", "--direction-rational", "1/3", "1/5")
    assert json.loads(out)["class"] == "slope-one-like"


def test_cylinders(capsys):
    code, out, _ = run(capsys, "cylinders", "--c", "1", "--direction", "horizontal", "--count", "3")
    assert code == 0
    assert [cyl["modulus"] for cyl in json.loads(out)] == ["1/2"] * 3


def test_surface_dump_is_deterministic(capsys):
    _, first, _ = run(capsys, "surface", "--c", "7/3", "--window", "3")
    _, second, _ = run(capsys, "surface", "--c", "7/3", "--window", "3")
    assert first == second
    assert json.loads(first)["c"] == "7/3"


def test_trace_and_separatrix(capsys):
    code, out, _ = run(capsys, "trace", "--c", "1", "--start", "1/2", "3/4",
                       "--direction", "0", "1", "--max-crossings", "4")
    doc = json.loads(out)
    assert code == 0 and doc["code"] == ["d1+", "s2+", "d2+", "s3+"]
    assert set(doc) == {"c", "start", "start_triangle", "direction", "code", "terminal", "holonomy"}
    code, out, _ = run(capsys, "separatrix", "--vertex", "P0+", "--direction", "1", "1")
    doc = json.loads(out)
    assert doc["terminal"]["kind"] == "hit-singularity" and doc["holonomy"] == ["1", "1"]


def test_reduce_and_compare(capsys):
    code, out, _ = run(capsys, "reduce", "--direction", "3", "5")
    doc = json.loads(out)
    assert code == 0 and doc["image"] in (["3", "5"], ["-3", "-5"])
    code, out, _ = run(capsys, "compare", "--word", "D", "--base", "slope-one", "--c", "2")
    assert code == 0 and json.loads(out)["agree"]


def test_render(capsys, tmp_path):
    path = tmp_path / "fig.svg"
    code, out, _ = run(capsys, "render", "--c", "5/4", "--figure", "cylinders", "--svg", str(path))
    assert code == 0 and path.read_text().startswith("<svg")
    code, _, err = run(capsys, "render", "--figure", "geodesic")
    assert code == 2 and "geodesic" in err


@pytest.mark.parametrize("argv", [
    ["surface", "--c", "2/3"],
    ["surface", "--c", "1/x"],
    ["trace", "--start", "1/2", "1/4", "--direction", "0", "1"],
    ["classify", "--direction", "0", "0"],
    ["separatrix", "--vertex", "Q3", "--direction", "1", "0"],
    ["surface", "--bogus"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    import scsurf.cli as cli
    monkeypatch.setattr(cli, "verify_relations", lambda c: {"A^2 = I": False})
    code, out, _ = run(capsys, "verify", "--suite", "relations")
    assert code == 1 and json.loads(out)["passed"] is False
