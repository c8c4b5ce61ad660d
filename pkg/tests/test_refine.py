import numpy as np
import pytest

from cellkit.cells import (
    Cell,
    FiberKind,
    annulus,
    complement,
    constant_cell,
    disc,
    punctured,
)
from cellkit.cover import cover_mask
from cellkit.polynomials import PolyMap
from cellkit.refine import fiber_pieces, refine, resolve_deltas
from cellkit.sampling import sample_cell, sample_real_trace


def coverage(cover, pts):
    mask = cover_mask(cover, pts)
    return float(np.mean(mask))


def test_identity_when_target_not_finer():
    c = constant_cell(*[("D", 1.0)])
    cov = refine(c, delta_source=0.5, delta_target=0.5)
    assert cov.size == 1
    pts = sample_cell(c, 2000, seed=3)
    assert coverage(cov, pts) == 1.0


def test_disc_refine_all_translate_and_inclusion():
    c = constant_cell(*[("D", 1.0)])
    ds, dt = 0.5, 0.2
    cov = refine(c, delta_source=ds, delta_target=dt)
    assert cov.all_translate()
    for e in cov.entries:
        assert e.cell.fibers[0].kind is FiberKind.DISC
        s = e.cell.fibers[0].radii()[0].constant_value().real
        center = e.cmap.evaluate(np.zeros((1, 1), dtype=complex))[0, 0]
        assert abs(center) + s / dt <= 1.0 / ds + 1e-9


@pytest.mark.parametrize("dt", [0.4, 0.2, 0.1])
def test_disc_refine_coverage(dt):
    c = constant_cell(*[("D", 1.0)])
    cov = refine(c, delta_source=0.5, delta_target=dt)
    pts = sample_cell(c, 4000, seed=7)
    assert coverage(cov, pts) == 1.0


def test_annulus_band_cover():
    c = constant_cell(*[("A", np.exp(-10.0), 1.0)])
    cov = refine(c, delta_source=0.5, delta_target=0.2)
    assert cov.all_translate()
    # every entry stays inside the source extension A(r1/2 ... wait, A(d*r1, r2/d)
    for e in cov.entries:
        r1, r2 = (r.constant_value().real for r in e.cell.fibers[0].radii())
        assert 0.5 * np.exp(-10.0) < r1 < r2 < 1.0 / 0.5
    pts = sample_cell(c, 4000, seed=5)
    assert coverage(cov, pts) == 1.0


def test_punctured_core_and_bands():
    c = constant_cell(*[("Do", 1.0)])
    cov = refine(c, delta_source=0.5, delta_target=0.2)
    kinds = {e.cell.fibers[0].kind for e in cov.entries}
    assert FiberKind.PUNCTURED in kinds
    pts = sample_cell(c, 4000, seed=9)
    assert coverage(cov, pts) == 1.0


def test_complement_tail_and_bands():
    c = constant_cell(*[("Dc", 1.0)])
    cov = refine(c, delta_source=0.5, delta_target=0.2)
    kinds = {e.cell.fibers[0].kind for e in cov.entries}
    assert FiberKind.COMPLEMENT in kinds
    pts = sample_cell(c, 4000, seed=11)
    assert coverage(cov, pts) == 1.0


def test_two_level_cell_refine():
    r = PolyMap.coordinate(0, 1) + PolyMap.constant(2.0, 1)
    c = Cell((disc(1.0), disc(r, 1)))
    pts = sample_cell(c, 3000, seed=13)
    cov = refine(c, delta_source=0.5, delta_target=0.25)
    assert cov.all_translate()
    assert coverage(cov, pts) == 1.0


def test_real_mode_covers_real_trace():
    c = constant_cell(*[("D", 1.0)])
    cov = refine(c, delta_source=0.5, delta_target=0.25, real=True)
    assert all(e.cmap.is_real() for e in cov.entries)
    pts = sample_real_trace(c, 1500, seed=2)
    assert coverage(cov, pts) == 1.0


def test_resolve_deltas_hyperbolic():
    c = constant_cell(*[("D", 1.0), ("*",)])
    d = resolve_deltas(c, rho=4 * np.pi / 3)
    assert d[0] == pytest.approx(0.5, abs=1e-12)
    assert d[1] == 1.0


def test_fiber_pieces_point():
    (p,) = fiber_pieces(FiberKind.POINT, (), (), 0.5, 0.1)
    assert p.kind is FiberKind.POINT
