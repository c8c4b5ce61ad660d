"""Hyperbolic (curvature -4) machinery on plane domains.

Closed-form densities for discs, punctured discs, disc complements and
annuli; two-sided bounds for the complement of a square lattice, with the
lower bound backed by the twice-punctured plane density (inverse modular
lambda via elliptic integrals).  Also: cell skeletons, a short-loop
contractibility verdict, and the raster experiments used to probe
"the skeleton controls the boundary" and small-diameter phenomena.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .cells import Cell, FiberKind
from .sampling import sample_cell


# -- closed-form domains ----------------------------------------------

class Domain:
    def density(self, z: complex) -> Tuple[float, float]:
        raise NotImplementedError


@dataclass(frozen=True)
class DiscDomain(Domain):
    radius: float
    center: complex = 0.0

    def density(self, z):
        s = abs(z - self.center)
        if s >= self.radius:
            return (math.inf, math.inf)
        lam = self.radius / (self.radius**2 - s**2)
        return (lam, lam)


@dataclass(frozen=True)
class PuncturedDomain(Domain):
    radius: float
    center: complex = 0.0

    def density(self, z):
        s = abs(z - self.center)
        if s <= 0 or s >= self.radius:
            return (math.inf, math.inf)
        lam = 1.0 / (2.0 * s * math.log(self.radius / s))
        return (lam, lam)


@dataclass(frozen=True)
class ComplementDomain(Domain):
    radius: float
    center: complex = 0.0

    def density(self, z):
        s = abs(z - self.center)
        if s <= self.radius:
            return (math.inf, math.inf)
        lam = 1.0 / (2.0 * s * math.log(s / self.radius))
        return (lam, lam)


@dataclass(frozen=True)
class AnnulusDomain(Domain):
    r1: float
    r2: float
    center: complex = 0.0

    def density(self, z):
        s = abs(z - self.center)
        if s <= self.r1 or s >= self.r2:
            return (math.inf, math.inf)
        m = math.log(self.r2 / self.r1)
        u = math.log(s / self.r1) / m
        lam = math.pi / (2.0 * m * s * math.sin(math.pi * u))
        return (lam, lam)


@functools.lru_cache(maxsize=4096)
def _twice_punctured_density(wr: float, wi: float) -> float:
    """Curvature -4 density of C \\ {0, 1} at w (inf at the punctures).  Inverse modular lambda: tau = i K(1-w)/K(w)."""
    import mpmath as mp

    w = mp.mpc(wr, wi)
    for p in (0, 1):
        if abs(w - p) < 1e-12:
            return math.inf
    try:
        tau = 1j * mp.ellipk(1 - w) / mp.ellipk(w)
        if mp.im(tau) <= 0:
            return 0.0
        h = mp.mpf("1e-6") * 1j

        def modlam(t):
            q = mp.exp(1j * mp.pi * t)
            return (mp.jtheta(2, 0, q) / mp.jtheta(3, 0, q)) ** 4

        dlam = (modlam(tau + h) - modlam(tau - h)) / (2 * h)
        lam1 = 1.0 / (mp.im(tau) * abs(dlam))  # curvature -1 density
        return float(lam1) / 2.0
    except Exception:
        return 0.0


@dataclass(frozen=True)
class LatticeComplement(Domain):
    """C minus the square lattice eps * Z^2."""

    eps: float

    def _reduce(self, z: complex) -> complex:
        e = self.eps
        x = (z.real / e) % 1.0
        y = (z.imag / e) % 1.0
        return complex(x * e, y * e)

    def nearest(self, z: complex) -> complex:
        e = self.eps
        return complex(round(z.real / e) * e, round(z.imag / e) * e)

    def density(self, z):
        z = self._reduce(complex(z))
        e = self.eps
        corners = [complex(a * e, b * e) for a in (0, 1) for b in (0, 1)]
        dists = sorted(abs(z - c) for c in corners)
        d = dists[0]
        if d == 0.0:
            return (math.inf, math.inf)
        # upper bounds from inscribed domains
        hi = 1.0 / d  # disc around z touching the nearest lattice point
        if d < e / 2:
            p = min(corners, key=lambda c: abs(z - c))
            hi = min(hi, PuncturedDomain(e / 2, p).density(z)[0])
        # lower bound from the two nearest punctures
        srt = sorted(corners, key=lambda c: abs(z - c))
        p, q = srt[0], srt[1]
        w = (z - p) / (q - p)
        lo = _twice_punctured_density(round(w.real, 6), round(w.imag, 6)) / abs(q - p)
        lo = min(lo, hi)
        return (lo, hi)


def hyperbolic_length(domain: Domain, path: Sequence[complex]) -> Tuple[float, float]:
    """Two-sided bound for the length of a polyline, by midpoint densities."""
    pts = np.asarray(path, dtype=complex)
    lo = hi = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        mid = (a + b) / 2.0
        dlo, dhi = domain.density(complex(mid))
        seg = abs(b - a)
        lo += dlo * seg
        hi += dhi * seg
    return (lo, hi)


# -- skeletons --------------------------------------------------------

def skeleton(cell: Cell, n_per_circle: int = 64) -> List[np.ndarray]:
    """Torus components of the skeleton: boundary circles of D fibers, both
    circles of A fibers (point fibers contribute the point).

    Returns one (N, length) array per component; only D/A/point fibers are
    supported (the skeleton is defined for those types).
    """
    for f in cell.fibers:
        if f.kind not in (FiberKind.DISC, FiberKind.ANNULUS, FiberKind.POINT):
            raise ValueError("skeleton requires disc/annulus/point fibers")
    choice_sets = []
    for f in cell.fibers:
        if f.kind is FiberKind.DISC:
            choice_sets.append([("circle", 0)])
        elif f.kind is FiberKind.ANNULUS:
            choice_sets.append([("circle", 0), ("circle", 1)])
        else:
            choice_sets.append([("point", None)])
    combos: List[tuple] = [()]
    for cs in choice_sets:
        combos = [c + (s,) for c in combos for s in cs]
    th = np.exp(2j * np.pi * np.arange(n_per_circle) / n_per_circle)
    out = []
    for combo in combos:
        pts = np.zeros((1, cell.length), dtype=complex)
        for j, (what, which) in enumerate(combo):
            if what == "point":
                pts = np.repeat(pts, 1, axis=0)
                continue
            radii = cell.fibers[j].radii()
            r = radii[which]
            cols = [pts[:, i] for i in range(j)]
            rv = np.abs(r.evaluate(*cols)) if j else np.abs(
                np.full(pts.shape[0], r.constant_value())
            )
            new = np.repeat(pts, n_per_circle, axis=0)
            new[:, j] = np.repeat(rv, n_per_circle) * np.tile(th, pts.shape[0])
            pts = new
        out.append(pts)
    return out


# -- loop contractibility ---------------------------------------------

class LoopVerdict(enum.Enum):
    CONTRACTIBLE = "contractible"
    NOT_CONTRACTIBLE = "not_contractible"
    UNKNOWN = "unknown"


SHORT_LOOP_LENGTH = 0.25  # normalized short-loop threshold (curvature -4)


def winding_number(path: np.ndarray, p: complex) -> int:
    z = np.asarray(path, dtype=complex) - p
    if abs(z[0] - z[-1]) > 0:
        z = np.append(z, z[0])
    ang = np.angle(z[1:] / z[:-1])
    return int(round(np.sum(ang) / (2 * np.pi)))


def is_contractible_short_loop(path: Sequence[complex], eps: float,
                               length_threshold: float = SHORT_LOOP_LENGTH) -> LoopVerdict:
    """Verdict for a closed loop in C \\ eps Z^2.

    Nonzero winding about some lattice point: not contractible.  All
    windings zero, hyperbolic length below the short-loop threshold, and the
    loop not confined to the balls B(p, eps/3): contractible.  Otherwise
    unknown (zero winding alone does not settle homotopy).
    """
    pts = np.asarray(path, dtype=complex)
    dom = LatticeComplement(eps)
    xs = pts.real / eps
    ys = pts.imag / eps
    for a in range(int(np.floor(xs.min())) - 1, int(np.ceil(xs.max())) + 2):
        for b in range(int(np.floor(ys.min())) - 1, int(np.ceil(ys.max())) + 2):
            p = complex(a * eps, b * eps)
            d = np.min(np.abs(pts - p))
            if d == 0:
                return LoopVerdict.UNKNOWN
            if winding_number(pts, p) != 0:
                return LoopVerdict.NOT_CONTRACTIBLE
    _, hi = hyperbolic_length(dom, np.append(pts, pts[0]))
    outside_balls = any(
        abs(z - dom.nearest(z)) > eps / 3.0 for z in pts
    )
    if hi <= length_threshold and outside_balls:
        return LoopVerdict.CONTRACTIBLE
    return LoopVerdict.UNKNOWN


# -- planar diameter (rotating calipers) ------------------------------

def _cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points: np.ndarray) -> np.ndarray:
    """Convex hull (monotone chain), counterclockwise, no repeats."""
    pts = np.unique(np.round(np.column_stack([points.real, points.imag]), 14), axis=0)
    if len(pts) <= 2:
        return pts
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def half(seq):
        out: list = []
        for p in seq:
            while len(out) >= 2 and _cross2(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(list(pts))
    upper = half(list(pts[::-1]))
    return np.array(lower[:-1] + upper[:-1])


def planar_diameter(points: np.ndarray) -> float:
    """Diameter of a planar point set via convex hull + rotating calipers."""
    h = _hull(np.asarray(points, dtype=complex).ravel())
    n = len(h)
    if n <= 1:
        return 0.0
    if n == 2:
        return float(np.hypot(*(h[1] - h[0])))
    best = 0.0
    k = 1
    for i in range(n):
        ni = (i + 1) % n
        # advance the antipodal point while the triangle area keeps growing
        while abs(_cross2(h[i], h[ni], h[(k + 1) % n])) > abs(_cross2(h[i], h[ni], h[k])):
            k = (k + 1) % n
        for j in (i, ni):
            best = max(best, float(np.hypot(*(h[k] - h[j]))))
    return best


def diameter_of_image(cell: Cell, f: ex.Expr, n: int = 4096, seed: int = 0) -> float:
    pts = sample_cell(cell, n, seed=seed)
    vals = ex.evaluate(f, [pts[:, j] for j in range(cell.length)])
    return planar_diameter(vals)


# -- raster experiment: boundary controlled by the skeleton ------------

@dataclass(frozen=True)
class BoundaryReport:
    resolution: int
    max_distance: float
    n_boundary_pixels: int


def boundary_in_skeleton_check(cell: Cell, f: ex.Expr, resolution: int = 64,
                               samples_per_pixel: float = 24.0,
                               skeleton_samples: int = 512,
                               seed: int = 0) -> BoundaryReport:
    """Rasterize f(cell); measure how far its boundary pixels sit from
    f(skeleton(cell)).  The distance is a rasterization artifact when the
    boundary really is contained in the skeleton image, so it shrinks
    linearly with the pixel size.
    """
    n = int(samples_per_pixel * resolution * resolution)
    pts = sample_cell(cell, n, seed=seed)
    vals = ex.evaluate(f, [pts[:, j] for j in range(cell.length)])
    sk_vals = []
    for comp in skeleton(cell, skeleton_samples // max(cell.dimension, 1)):
        sk_vals.append(ex.evaluate(f, [comp[:, j] for j in range(cell.length)]))
    sk = np.concatenate(sk_vals)
    allv = np.concatenate([vals, sk])
    x0, x1 = allv.real.min(), allv.real.max()
    y0, y1 = allv.imag.min(), allv.imag.max()
    pad = 0.02 * max(x1 - x0, y1 - y0, 1e-12)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    hx = (x1 - x0) / resolution
    hy = (y1 - y0) / resolution
    grid = np.zeros((resolution, resolution), dtype=bool)
    ix = np.clip(((vals.real - x0) / hx).astype(int), 0, resolution - 1)
    iy = np.clip(((vals.imag - y0) / hy).astype(int), 0, resolution - 1)
    grid[ix, iy] = True
    occ = grid
    nb = np.zeros_like(occ)
    nb[1:, :] |= ~occ[:-1, :]
    nb[:-1, :] |= ~occ[1:, :]
    nb[:, 1:] |= ~occ[:, :-1]
    nb[:, :-1] |= ~occ[:, 1:]
    nb[0, :] = nb[-1, :] = nb[:, 0] = nb[:, -1] = True
    boundary = occ & nb
    bi, bj = np.nonzero(boundary)
    if len(bi) == 0:
        return BoundaryReport(resolution, 0.0, 0)
    bz = (x0 + (bi + 0.5) * hx) + 1j * (y0 + (bj + 0.5) * hy)
    # chunked nearest-distance to the skeleton image
    maxd = 0.0
    for k in range(0, len(bz), 512):
        chunk = bz[k : k + 512]
        d = np.abs(chunk[:, None] - sk[None, :]).min(axis=1)
        maxd = max(maxd, float(d.max()))
    return BoundaryReport(resolution, maxd, int(len(bz)))
