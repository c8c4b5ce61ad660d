import math

import numpy as np
import pytest

from cellkit import expr as ex
from cellkit.cells import constant_cell
from cellkit.hyperbolic import (
    AnnulusDomain,
    ComplementDomain,
    DiscDomain,
    LatticeComplement,
    LoopVerdict,
    PuncturedDomain,
    boundary_in_skeleton_check,
    diameter_of_image,
    hyperbolic_length,
    is_contractible_short_loop,
    planar_diameter,
    skeleton,
    winding_number,
    _twice_punctured_density,
)


def _circle(c, r, n):
    th = np.exp(2j * np.pi * np.arange(n + 1) / n)
    return c + r * th


def test_disc_density_normalization():
    lo, hi = DiscDomain(1.0).density(0.0)
    assert lo == hi == pytest.approx(1.0)


def test_unit_circle_length_in_double_disc():
    # |z| = 1 inside D(2): density 2/3, length 4*pi/3 (the boundary-length
    # normalization behind delta = 1/2 <-> rho = 4*pi/3)
    path = _circle(0.0, 1.0, 5000)
    lo, hi = hyperbolic_length(DiscDomain(2.0), path)
    assert hi == pytest.approx(4 * math.pi / 3, abs=2e-6)
    assert lo == pytest.approx(hi)


def test_punctured_circle_length_formula():
    # |z| = r in D∘(r/delta): length pi / |log delta|
    delta = 0.25
    path = _circle(0.0, 1.0, 4000)
    lo, hi = hyperbolic_length(PuncturedDomain(1.0 / delta), path)
    assert hi == pytest.approx(math.pi / abs(math.log(delta)), rel=1e-5)


def test_annulus_density_degenerates_to_punctured():
    d_ann = AnnulusDomain(1e-30, 1.0).density(0.1)[0]
    d_pun = PuncturedDomain(1.0).density(0.1)[0]
    assert d_ann == pytest.approx(d_pun, rel=1e-2)
    assert d_ann >= d_pun  # smaller domain, larger density


def test_complement_matches_inverted_punctured():
    # z -> 1/z maps D⊂(2) onto D∘(1/2); densities transform by |1/z^2|
    z = 3.0 + 1.0j
    w = 1.0 / z
    d1 = ComplementDomain(2.0).density(z)[0]
    d2 = PuncturedDomain(0.5).density(w)[0] / abs(z) ** 2
    assert d1 == pytest.approx(d2, rel=1e-12)


def test_density_monotone_under_inclusion():
    # D(1) ⊂ D(2): metric decreases on the larger domain
    for z in (0.0, 0.3 + 0.2j, -0.7j):
        assert DiscDomain(2.0).density(z)[0] < DiscDomain(1.0).density(z)[0]
    # A(0.25, 1) ⊂ D∘(1) ⊂ D(1)
    z = 0.5
    assert DiscDomain(1.0).density(z)[0] < PuncturedDomain(1.0).density(z)[0]
    assert PuncturedDomain(1.0).density(z)[0] < AnnulusDomain(0.25, 1.0).density(z)[0]


def test_twice_punctured_density_properties():
    a = _twice_punctured_density(0.5, 0.0)
    assert 0 < a < math.inf
    # symmetry under w -> 1 - w
    b = _twice_punctured_density(0.3, 0.1)
    c = _twice_punctured_density(0.7, -0.1)
    assert b == pytest.approx(c, rel=1e-6)
    # C \ {0,1} contains D∘(1), so its density is smaller there
    assert _twice_punctured_density(0.3, 0.0) < PuncturedDomain(1.0).density(0.3)[0]


def test_lattice_complement_bounds_and_periodicity():
    dom = LatticeComplement(1.0)
    lo, hi = dom.density(0.5 + 0.5j)
    assert 0 < lo <= hi < math.inf
    lo2, hi2 = dom.density(3.5 + 7.5j)
    assert abs(lo - lo2) < 1e-9 and abs(hi - hi2) < 1e-9
    assert dom.density(0.0)[1] == math.inf


def test_lattice_complement_scaling():
    # densities scale like 1/eps
    d1 = LatticeComplement(1.0).density(0.5 + 0.25j)
    d2 = LatticeComplement(0.1).density(0.05 + 0.025j)
    assert d2[1] == pytest.approx(10 * d1[1], rel=1e-9)
    assert d2[0] == pytest.approx(10 * d1[0], rel=1e-4)


def test_winding_number():
    loop = _circle(0.0, 0.4, 200)
    assert winding_number(loop, 0.0) == 1
    assert winding_number(loop, 1.0) == 0
    assert winding_number(loop[::-1], 0.0) == -1


def test_loop_verdicts():
    eps = 1.0
    around = _circle(0.0, 0.3, 128)
    assert is_contractible_short_loop(around, eps) is LoopVerdict.NOT_CONTRACTIBLE
    tiny = _circle(0.5 + 0.5j, 0.01, 64)
    assert is_contractible_short_loop(tiny, eps) is LoopVerdict.CONTRACTIBLE
    big = _circle(10.5 + 10.5j, 0.45, 256)  # winds around nothing but is long
    assert is_contractible_short_loop(big, eps) is LoopVerdict.UNKNOWN


def test_planar_diameter_against_pairwise_oracle():
    rng = np.random.default_rng(31)
    pts = rng.standard_normal(400) + 1j * rng.standard_normal(400)
    want = np.max(np.abs(pts[:, None] - pts[None, :]))
    got = planar_diameter(pts)
    assert got == pytest.approx(float(want), rel=1e-12)


def test_skeleton_components():
    d = constant_cell(("D", 1.0))
    comps = skeleton(d, 32)
    assert len(comps) == 1
    assert np.allclose(np.abs(comps[0][:, 0]), 1.0)
    c2 = constant_cell(("A", 0.5, 1.0), ("D", 1.0))
    comps2 = skeleton(c2, 16)
    assert len(comps2) == 2  # 2^(number of annuli) torus components
    for comp in comps2:
        assert np.allclose(np.abs(comp[:, 1]), 1.0)
        assert set(np.round(np.abs(comp[:, 0]), 9)) <= {0.5, 1.0}


def test_diameter_of_identity_image():
    d = constant_cell(("D", 1.0))
    assert diameter_of_image(d, ex.Coord(0), n=8192) == pytest.approx(2.0, abs=0.02)


def test_boundary_in_skeleton_smoke():
    c = constant_cell(("A", 0.5, 1.0))
    f = ex.Coord(0) + ex.Prod((ex.Const(0.2), ex.Power(ex.Coord(0), 2)))
    rep = boundary_in_skeleton_check(c, f, resolution=48, samples_per_pixel=30)
    assert rep.n_boundary_pixels > 0
    # boundary pixels hug the skeleton image to within a few pixels
    assert rep.max_distance < 4 * (2.6 / 48)
