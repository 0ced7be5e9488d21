import json
import math
import os
from pathlib import Path

import pytest

import hookwalk

DATA = Path(os.environ.get("HOOKWALK_EXAMPLES_DIR", Path(__file__).parents[2] / "examples_data"))

RECT = {"kind": "rectangular", "minima": [0, 2, 5], "maxima": [1, 3]}
FLAT = {"kind": "constant_slope", "slope": 0, "interval": [-1, 1]}
VEE = {"kind": "piecewise_linear", "breakpoints": [[-2, 2], [0, 1], [2, 2]]}


def test_diagram_basics():
    d = hookwalk.diagram(RECT)
    assert d.kind() == "rectangular"
    assert d.center() == pytest.approx(3.0)
    assert d.area() == pytest.approx(10.0)
    assert d(1.0) == pytest.approx(4.0)
    again = hookwalk.diagram(d.to_json())
    assert json.loads(again.to_json()) == json.loads(d.to_json())
    from_file = hookwalk.diagram((DATA / "rect_025_13.json").read_text())
    assert from_file.center() == pytest.approx(3.0)


def test_atoms_and_round_trip():
    d = hookwalk.diagram(RECT)
    x, w = hookwalk.exterior_atoms(d)
    assert x == [0, 2, 5]
    assert w == pytest.approx([0.3, 1 / 6, 8 / 15], abs=1e-12)
    y, v = hookwalk.interior_atoms(d)
    assert y == [1, 3]
    assert v == pytest.approx([0.4, 0.6], abs=1e-12)
    back = json.loads(hookwalk.rect_from_exterior_atoms(x, w).to_json())
    assert back["maxima"] == pytest.approx([1, 3], abs=1e-9)
    inner = json.loads(hookwalk.rect_from_interior_atoms(y, v, 10.0, 3.0).to_json())
    assert inner["minima"] == pytest.approx([0, 2, 5], abs=1e-9)


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        hookwalk.diagram({"kind": "rectangular", "minima": [0, 2], "maxima": [3]})
    with pytest.raises(ValueError):
        hookwalk.exterior_atoms(hookwalk.diagram(FLAT))
    with pytest.raises(ValueError):
        hookwalk.limit_curve(1.5)


def test_flat_densities():
    d = hookwalk.diagram(FLAT)
    xs = [-0.9, -0.3, 0.0, 0.5]
    ext = hookwalk.density(d, "exterior", xs)
    inn = hookwalk.density(d, "interior", xs)
    for x, e, i in zip(xs, ext, inn):
        assert e == pytest.approx(1 / (math.pi * math.sqrt(1 - x * x)), rel=1e-9)
        assert i == pytest.approx(2 / math.pi * math.sqrt(1 - x * x), rel=1e-9)
    assert hookwalk.density_mass(d, "exterior") == pytest.approx(1.0, abs=1e-6)


def test_inversion_recovers_vee():
    d = hookwalk.diagram(VEE)
    g = hookwalk.density_grid(d, "exterior", 1024)
    rec = hookwalk.invert_density(g["grid"], g["values"], g["interval"], "exterior",
                                  g["left_exponent"], g["right_exponent"])
    for x in (-1.5, -0.5, 0.5, 1.5):
        assert rec(x) == pytest.approx(1 + 0.5 * abs(x), abs=1e-2)
    with pytest.raises(ValueError):
        hookwalk.invert_density(g["grid"], g["values"], g["interval"], "interior")


def test_moments():
    d = hookwalk.diagram(RECT)
    p = hookwalk.p_moments(d, 6)
    assert p[:2] == pytest.approx([3, 19])
    h = hookwalk.h_from_p(p)
    x, w = hookwalk.exterior_atoms(d)
    for n, hn in enumerate(h):
        assert hn == pytest.approx(sum(wk * xk**n for xk, wk in zip(x, w)), rel=1e-9)
    assert hookwalk.p_from_h(h) == pytest.approx(p, rel=1e-10)
    g = hookwalk.g_from_p(p, d.area())
    assert g[0] == pytest.approx(1.0)
    lhs, rhs = hookwalk.cauchy_identity(d, 6.0, "exterior")
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_walk_simulation():
    d = hookwalk.diagram(FLAT)
    xs, truncated = hookwalk.simulate(d, "exterior", 5000, seed=7)
    assert truncated == 0
    again, _ = hookwalk.simulate(d, "exterior", 5000, seed=7, threads=1)
    assert xs == again
    ks = hookwalk.ks_distance(xs, lambda x: 2 / math.pi * math.asin(math.sqrt(min(max((x + 1) / 2, 0), 1))))
    assert ks < 0.03


def test_roots():
    lam = hookwalk.root_fractional_parts(2)
    assert lam == pytest.approx([1 - 1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-14)
    assert hookwalk.limit_curve(0.5) == pytest.approx(0.5)
