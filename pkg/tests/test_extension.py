import math

import numpy as np
import pytest

from cellkit.cells import Cell, FiberKind, constant_cell, disc
from cellkit.extension import (
    AdmissibilityError,
    ball_extension_radius,
    delta_to_rho,
    deltas_for,
    extend,
    extend_hyperbolic,
    is_weierstrass,
    rho_to_delta,
)
from cellkit.polynomials import PolyMap


def test_disc_conversion_pinned_value():
    # delta = 1/2 on a disc corresponds to rho = 4*pi/3
    assert delta_to_rho(FiberKind.DISC, 0.5) == pytest.approx(4 * math.pi / 3, abs=1e-15)
    assert rho_to_delta(FiberKind.DISC, 4 * math.pi / 3) == pytest.approx(0.5, abs=1e-14)


def test_radial_conversion_formula():
    # rho = pi^2 / (2 |log delta|) for annular kinds
    for kind in (FiberKind.PUNCTURED, FiberKind.COMPLEMENT, FiberKind.ANNULUS):
        assert delta_to_rho(kind, math.exp(-math.pi**2 / 2)) == pytest.approx(1.0, rel=1e-14)
        assert rho_to_delta(kind, 1.0) == pytest.approx(math.exp(-math.pi**2 / 2), rel=1e-14)


def test_round_trip_all_kinds():
    deltas = [0.9, 0.5, 0.1, 1e-3]
    for kind in (FiberKind.DISC, FiberKind.PUNCTURED, FiberKind.COMPLEMENT, FiberKind.ANNULUS):
        for d in deltas:
            rho = delta_to_rho(kind, d)
            assert abs(rho_to_delta(kind, rho) - d) <= 1e-12
    rhos = [0.05, 0.4, 1.0, 7.5]
    for kind in (FiberKind.DISC, FiberKind.PUNCTURED):
        for r in rhos:
            d = rho_to_delta(kind, r)
            assert abs(delta_to_rho(kind, d) - r) <= 1e-12 * max(1.0, r)


def test_monotonicity_smaller_parameter_larger_extension():
    # smaller delta scales the disc radius up more
    r1 = 1.0 / 0.9
    r2 = 1.0 / 0.3
    assert r2 > r1
    # smaller rho gives smaller delta
    assert rho_to_delta(FiberKind.DISC, 0.1) < rho_to_delta(FiberKind.DISC, 1.0)
    assert rho_to_delta(FiberKind.ANNULUS, 0.1) < rho_to_delta(FiberKind.ANNULUS, 1.0)


def test_extend_scalings():
    c = constant_cell(("D", 1.0), ("A", 0.5, 2.0))
    e = extend(c, 0.5)
    assert abs(e.fibers[0].r1.constant_value()) == pytest.approx(2.0)
    assert abs(e.fibers[1].r1.evaluate(np.array([0.1 + 0j]))[0]) == pytest.approx(0.25)
    assert abs(e.fibers[1].r2.evaluate(np.array([0.1 + 0j]))[0]) == pytest.approx(4.0)
    ec = extend(constant_cell(("Dc", 2.0)), 0.5)
    assert abs(ec.fibers[0].r1.constant_value()) == pytest.approx(1.0)


def test_ball_extension_allows_delta_above_one():
    assert ball_extension_radius(1.0, 2.0) == pytest.approx(0.5)
    assert ball_extension_radius(1.0, 0.5) == pytest.approx(2.0)


def test_extend_admissibility_failure_has_witness():
    # fiber radius z1 + 1 vanishes at -1, inside the extended base D(2)
    r = PolyMap(1, {(0,): 1.0, (1,): 1.0})
    c = Cell((constant_cell(("D", 1.0)).fibers[0], disc(r, 1)))
    with pytest.raises(AdmissibilityError) as err:
        extend(c, 0.5)
    w = err.value.witness
    assert w is None or abs(abs(w[0].real + 1) + abs(w[0].imag)) < 2.5


def test_extend_admissibility_ok_when_radius_stays_nonzero():
    r = PolyMap(1, {(0,): 2.0, (1,): 1.0})  # z + 2, nonzero on D(2-)
    c = Cell((constant_cell(("D", 1.0)).fibers[0], disc(r, 1)))
    e = extend(c, 0.55)
    assert e.fibers[1].r1.terms[(0,)].real == pytest.approx(2.0 / 0.55)


def test_deltas_for_mixed_cell():
    c = constant_cell(("D", 1.0), ("A", 0.5, 2.0), ("*",))
    ds = deltas_for(c, 1.0)
    assert ds[0] == pytest.approx(rho_to_delta(FiberKind.DISC, 1.0))
    assert ds[1] == pytest.approx(math.exp(-math.pi**2 / 2))
    assert ds[2] == 1.0
    e = extend_hyperbolic(c, 1.0)
    assert e.fibers[2].kind is FiberKind.POINT


def test_is_weierstrass_branch_curve():
    # Z = z2^2 - z1 over D(1): all fiber roots have |z2| <= 1, so the shell
    # (1.5, 2) of D(2) read as a gap with gamma = 0.75 is free
    Z = PolyMap(2, {(0, 2): 1.0, (1, 0): -1.0})
    c = constant_cell(("D", 1.0), ("D", 2.0))
    rep = is_weierstrass(c, 0.75, [Z], n_base=64)
    assert rep.ok
    assert rep.margin > 0.5  # |z2^2 - z1| >= 1.5^2 - 1 on the shell

    # a hypersurface passing through the shell is rejected, with a witness
    Zbad = PolyMap(2, {(0, 1): 1.0, (0, 0): -1.8})
    rep2 = is_weierstrass(c, 0.75, [Zbad], n_base=16, n_angle=128)
    assert not rep2.ok or rep2.margin < 0.05
    assert rep2.witness is not None
