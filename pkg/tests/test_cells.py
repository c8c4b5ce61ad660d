import numpy as np
import pytest

from cellkit import expr as ex
from cellkit.cells import (
    Cell,
    disc,
    CellularMap,
    FiberKind,
    FormatDegree,
    classify_component,
    combine_labels,
    compose,
    compose_labels,
    constant_cell,
    identity_map,
    pullback_radius,
)
from cellkit.polynomials import PolyMap


def test_expr_evaluate_and_normalize():
    # (z0 + 1)*(z0 - 1) + 1 normalizes to z0^2
    e = (ex.Coord(0) + 1) * (ex.Coord(0) - 1) + 1
    n = ex.normalize(e, 1)
    t = ex.laurent_form(n, 1)
    assert t == {(1,) * 0 + (2,): 1.0 + 0j} or t == {(2,): 1 + 0j}
    z = np.array([0.5 + 0.5j, -2.0, 1.0j])
    np.testing.assert_allclose(ex.evaluate(e, [z]), z**2, rtol=1e-13)


def test_expr_negative_power_monomial_only():
    inv = ex.Power(ex.Coord(0), -2)
    assert ex.laurent_form(inv, 1) == {(-2,): 1.0 + 0j}
    bad = ex.Power(ex.Coord(0) + 1, -1)
    assert ex.laurent_form(bad, 1) is None
    z = np.array([2.0 + 0j])
    np.testing.assert_allclose(ex.evaluate(bad, [z]), 1.0 / 3.0)


def test_expr_compose_node():
    inner = (ex.Coord(0) + 2.0,)
    outer = ex.Power(ex.Coord(0), 3)
    c = ex.Compose(outer, inner)
    z = np.array([0.1, -1.0, 2.0j])
    np.testing.assert_allclose(ex.evaluate(c, [z]), (z + 2.0) ** 3, rtol=1e-13)
    table = ex.laurent_form(c, 1)
    assert table[(3,)] == pytest.approx(1.0)
    assert table[(0,)] == pytest.approx(8.0)


def test_cell_structure():
    c = constant_cell(("D", 1.0), ("*",), ("A", 0.5, 2.0))
    assert c.length == 3
    assert c.dimension == 2
    assert c.type_word() == "D*A"
    assert not c.is_polydisc()
    assert constant_cell(("D", 1.0), ("D", 2.0)).is_polydisc()


def test_cell_contains_constant_radii():
    c = constant_cell(("A", 0.5, 2.0))
    pts = np.array([[1.0], [0.4], [2.5], [0.5]], dtype=complex)
    mask = c.contains(pts)
    assert mask.tolist() == [True, False, False, False]
    assert c.contains(pts, closed_tol=1e-9).tolist() == [True, False, False, True]


def test_cell_contains_varying_radius():
    # D(1) ⊙ D(z1 + 2): fiber radius |z1 + 2|
    r = PolyMap(1, {(0,): 2.0, (1,): 1.0})
    c = Cell((constant_cell(("D", 1.0)).fibers[0], disc(r, 1)))
    pts = np.array([[0.5, 2.4], [0.5, 2.6], [-0.9, 1.05], [-0.9, 1.2]], dtype=complex)
    assert c.contains(pts).tolist() == [True, False, True, False]
    kind, radii = c.fiber_at(1, [-0.9])
    assert kind is FiberKind.DISC
    assert radii[0] == pytest.approx(1.1)


def test_classify_components():
    z0 = ex.Coord(0)
    z1 = ex.Coord(1)
    assert classify_component(z0 + 3.0, 0).label == "translate"
    assert classify_component(ex.Power(z0, 2), 0).label == "power"
    assert classify_component(ex.Power(z0, -1), 0).label == "power"
    cc = classify_component(ex.Prod((ex.Const(-1.0), ex.Power(z1, 3))) + ex.Power(z0, 2), 1)
    assert cc.label == "prepared" and cc.sign == -1 and cc.q == 3
    assert classify_component(2.0 * z0, 0).label == "general"
    assert classify_component(ex.Power(z0, 2) + z0, 0).label == "general"


def test_map_classification_and_composition_rules():
    c = constant_cell(("D", 1.0), ("D", 1.0))
    t = CellularMap(c, (ex.Coord(0) + 0.5, ex.Coord(1) + ex.Power(ex.Coord(0), 2)))
    assert t.classify().label == "translate"
    p = CellularMap(c, (ex.Power(ex.Coord(0), 2), ex.Power(ex.Coord(1), 3)))
    assert p.classify().label == "power"
    tp = compose(t, p)
    assert tp.classify().label == "prepared"
    # closure table
    assert compose_labels("translate", "translate") == "translate"
    assert compose_labels("power", "power") == "power"
    assert compose_labels("prepared", "power") == "prepared"
    assert compose_labels("translate", "prepared") == "prepared"
    assert compose_labels("prepared", "prepared") == "general"
    assert compose_labels("power", "translate") == "general"


def test_compose_evaluates_correctly():
    c = constant_cell(("D", 1.0), ("D", 1.0))
    f = CellularMap(c, (ex.Coord(0) + 1.0, ex.Coord(1) + ex.Coord(0)))
    g = CellularMap(c, (ex.Power(ex.Coord(0), 2), ex.Coord(1) - 2.0))
    fg = compose(f, g)
    pts = np.array([[0.3 + 0.1j, 0.7], [0.5j, -0.25]], dtype=complex)
    np.testing.assert_allclose(fg.evaluate(pts), f.evaluate(g.evaluate(pts)), rtol=1e-13)


def test_power_compose_power_is_power():
    c = constant_cell(("D", 1.0))
    f = CellularMap(c, (ex.Power(ex.Coord(0), 2),))
    g = CellularMap(c, (ex.Power(ex.Coord(0), 3),))
    fg = compose(f, g)
    assert fg.classify().label == "power"
    assert fg.classify().components[0].q == 6


def test_triangularity_enforced():
    c = constant_cell(("D", 1.0), ("D", 1.0))
    with pytest.raises(ValueError):
        CellularMap(c, (ex.Coord(1), ex.Coord(0)))


def test_pullback_radius():
    r = PolyMap(1, {(0,): 2.0, (1,): 1.0})  # z + 2
    out = pullback_radius(r, [ex.Coord(0) + 0.5])
    assert out.terms == {(0,): 2.5 + 0j, (1,): 1.0 + 0j}
    assert pullback_radius(r, [ex.Power(ex.Coord(0) + 1.0, -1)]) is None


def test_real_flags():
    c = constant_cell(("D", 1.0))
    m = CellularMap(c, (ex.Coord(0) + 0.5,))
    assert m.is_real()
    m2 = CellularMap(c, (ex.Coord(0) + 0.5j,))
    assert not m2.is_real()


def test_derivative_nonvanishing():
    c = constant_cell(("D", 1.0))
    good = CellularMap(c, (ex.Coord(0) + 5.0,))
    bad = CellularMap(c, (ex.Power(ex.Coord(0), 2),))  # derivative vanishes at 0
    pts = np.array([[0.0], [0.5], [0.2 + 0.3j]], dtype=complex)
    assert good.derivative_nonvanishing(pts)
    assert not bad.derivative_nonvanishing(pts)


def test_format_degree():
    c = constant_cell(("D", 1.0), ("D", 2.0))
    m = identity_map(c)
    fd = FormatDegree.of([c], [m])
    assert fd.length == 2 and fd.count == 1 and fd.map_degree == 1
