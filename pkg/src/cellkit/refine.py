"""Sharp refinement: cover a cell by translate maps on cells admitting a
finer extension.

The kernels work in the Euclidean delta parameterization (one delta per
fiber); the public entry point also accepts hyperbolic parameters, which are
converted per fiber kind.  Disc fibers are covered by translated sub-discs
under the exact inclusion constraint D(c, s/delta_target) inside
D(r/delta_source); the radial kinds by concentric log-radius bands of width
2*log(1/delta_target) overlapping by half, plus a core (punctured) or tail
(complement) cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .cells import Cell, FiberKind, annulus, complement, disc, point_fiber, punctured
from .cover import Action, Cover, CoverEntry, const_expr, entry_from_actions
from .extension import rho_to_delta
from .sampling import sample_cell

RING_RADIAL = 0.66  # ring spacing as a fraction of the local disc radius
RING_ANGULAR = 0.92  # angular chord spacing as a fraction of the disc radius


@dataclass(frozen=True)
class FiberPiece:
    """One source fiber of a 1D cover plus the (numeric) translate center."""

    kind: FiberKind
    radii: Tuple[float, ...]
    center: complex = 0.0
    mirror: bool = False


def _disc_pieces(R_cover: float, R_room: float, d_target: float,
                 center: complex = 0.0) -> List[FiberPiece]:
    """Sub-discs covering D(center, R_cover), each with D(c, s/d_target)
    inside D(center, R_room); requires R_room > R_cover."""
    if R_room <= R_cover:
        raise ValueError("no room for disc refinement")
    out: List[FiberPiece] = []

    def srad(t: float) -> float:
        return d_target * (R_room - t)

    t = 0.0
    ring = 0
    while True:
        s = srad(t)
        if t == 0.0:
            out.append(FiberPiece(FiberKind.DISC, (s,), center))
        else:
            m = max(int(math.ceil(2 * math.pi * t / (RING_ANGULAR * s))), 6)
            for k in range(m):
                c = center + t * np.exp(2j * np.pi * (k + 0.5 * (ring % 2)) / m)
                out.append(FiberPiece(FiberKind.DISC, (s,), complex(c)))
        if t >= R_cover:
            break
        t = min(t + RING_RADIAL * s, R_cover)
        ring += 1
    return out


def _band_pieces(lo: float, hi: float, ext_lo: float, ext_hi: float,
                 d_target: float) -> List[FiberPiece]:
    """Concentric annuli covering lo < |z| < hi within (ext_lo, ext_hi),
    log-width up to 2*log(1/d_target), half-overlapping."""
    if not (ext_lo < lo < hi < ext_hi):
        raise ValueError("band range leaves the allowed region")
    W = 2.0 * abs(math.log(d_target))
    a = math.log(lo)
    b = math.log(hi)
    pad_lo = 0.45 * (a - math.log(ext_lo)) if ext_lo > 0 else 0.05 * W
    pad = min(0.05 * W, 0.45 * (math.log(ext_hi) - b), pad_lo)
    a -= pad
    b += pad
    span = b - a
    half = W / 2.0
    n = max(int(math.ceil(span / half)), 1)
    step = span / n
    out = []
    for k in range(n):
        x0 = a + k * step
        x1 = min(a + (k + 2) * step, b)
        out.append(FiberPiece(FiberKind.ANNULUS, (math.exp(x0), math.exp(x1))))
    return out


def _real_interval_pieces(R_cover: float, R_room: float, d_target: float) -> List[FiberPiece]:
    """Discs with real centers covering the interval (-R_cover, R_cover)."""
    out: List[FiberPiece] = []
    t = -R_cover
    while True:
        s = d_target * (R_room - abs(t))
        out.append(FiberPiece(FiberKind.DISC, (s,), complex(t)))
        if t > R_cover:
            break
        t += 0.8 * s
    return out


def _piece_fiber(piece: FiberPiece, nvars: int):
    if piece.kind is FiberKind.POINT:
        return point_fiber()
    if piece.kind is FiberKind.DISC:
        return disc(piece.radii[0], nvars)
    if piece.kind is FiberKind.PUNCTURED:
        return punctured(piece.radii[0], nvars)
    if piece.kind is FiberKind.COMPLEMENT:
        return complement(piece.radii[0], nvars)
    return annulus(piece.radii[0], piece.radii[1], nvars)


def fiber_pieces(kind: FiberKind, lo: Tuple[float, ...], hi: Tuple[float, ...],
                 d_source: float, d_target: float,
                 real: bool = False) -> List[FiberPiece]:
    """1D covering pieces for one fiber.

    lo and hi bound each radius of the fiber over the base piece.  The union
    of the fibers over the base must be covered, while every piece has to
    stay inside the intersection of the d_source-extended fibers.
    """
    if kind is FiberKind.POINT:
        return [FiberPiece(FiberKind.POINT, ())]
    if d_target >= d_source:
        if kind is FiberKind.ANNULUS:
            return [FiberPiece(kind, (lo[0], hi[1]))]
        if kind is FiberKind.COMPLEMENT:
            return [FiberPiece(kind, (lo[0],))]
        return [FiberPiece(kind, (hi[0],))]
    if kind is FiberKind.DISC:
        R_cover = hi[0]
        R_room = lo[0] / d_source
        if real:
            return _real_interval_pieces(R_cover, R_room, d_target)
        return _disc_pieces(R_cover, R_room, d_target)
    if kind is FiberKind.ANNULUS:
        return _band_pieces(lo[0], hi[1], d_source * hi[0] * 1.000001,
                            lo[1] / d_source, d_target)
    if kind is FiberKind.PUNCTURED:
        R_cover = hi[0]
        R_room = lo[0] / d_source
        core = d_target * R_room * 0.98
        pieces = [FiberPiece(FiberKind.PUNCTURED, (core,))]
        if core < R_cover:
            pieces += _band_pieces(core * 0.8, R_cover, 0.0, R_room, d_target)
        return pieces
    if kind is FiberKind.COMPLEMENT:
        R_start = lo[0]
        R_in = hi[0] * d_source
        tail = R_in / d_target * 1.02
        pieces = [FiberPiece(FiberKind.COMPLEMENT, (tail,))]
        if tail > R_start:
            pieces += _band_pieces(R_start, tail * 1.25, R_in, math.inf, d_target)
        return pieces
    raise ValueError(kind)


def resolve_deltas(cell: Cell, rho: Optional[float] = None,
                   delta: Optional[float] = None) -> Tuple[float, ...]:
    if (rho is None) == (delta is None):
        raise ValueError("specify exactly one of rho / delta")
    if delta is not None:
        return tuple(1.0 if f.kind is FiberKind.POINT else float(delta)
                     for f in cell.fibers)
    return tuple(1.0 if f.kind is FiberKind.POINT else rho_to_delta(f.kind, rho)
                 for f in cell.fibers)


def image_samples(actions: Sequence[Action], src: Cell, n: int, seed: int = 11) -> np.ndarray:
    """Samples of the image of the entry described by the action list."""
    pts = sample_cell(src, n, seed=seed)
    img = np.zeros_like(pts)
    cols: List[np.ndarray] = []
    for j, a in enumerate(actions):
        t = pts[:, j]
        center = ex.evaluate(a.center, cols + [np.zeros_like(t)])
        center = np.broadcast_to(center, t.shape)
        if a.op == "translate":
            img[:, j] = center + t
        elif a.op == "mirror":
            img[:, j] = center - t
        elif a.op == "power":
            img[:, j] = center + t ** a.q
        elif a.op == "point":
            img[:, j] = center
        elif a.op == "general":
            coeffs = [
                np.broadcast_to(ex.evaluate(c, cols + [np.zeros_like(t)]), t.shape)
                for c in a.poly_in_own
            ]
            acc = np.zeros_like(t)
            for c in reversed(coeffs):
                acc = acc * t + c
            img[:, j] = acc
        else:
            raise ValueError(a.op)
        cols.append(t)
    return img


def refine(cell: Cell, rho: Optional[float] = None, sigma: Optional[float] = None,
           delta_source: Optional[float] = None, delta_target: Optional[float] = None,
           real: bool = False, base_samples: int = 64) -> Cover:
    """Cover `cell` by translate maps on cells admitting the finer extension.

    Parameters are given either hyperbolically (rho > sigma) or directly as
    Euclidean deltas (delta_source > delta_target).  When no refinement is
    requested (target not finer than source) the identity cover is returned.
    In real mode the cover is real and covers the real trace.
    """
    ds = resolve_deltas(cell, rho, delta_source)
    dt = resolve_deltas(cell, sigma, delta_target)
    entries: List[CoverEntry] = []

    def build(prefix_actions: List[Action], prefix_fibers: list, j: int):
        if j == cell.length:
            src = Cell(tuple(prefix_fibers))
            entries.append(entry_from_actions(src, prefix_actions))
            return
        f = cell.fibers[j]
        if f.kind is FiberKind.POINT:
            pieces = [FiberPiece(FiberKind.POINT, ())]
        else:
            if j == 0:
                vals = [np.array([abs(r.constant_value())]) for r in f.radii()]
            else:
                img = image_samples(prefix_actions, Cell(tuple(prefix_fibers)),
                                    base_samples)
                cols = [img[:, i] for i in range(j)]
                vals = [np.abs(r.evaluate(*cols)) for r in f.radii()]
            hi = tuple(float(np.max(v)) * 1.001 for v in vals)
            lo = tuple(float(np.min(v)) * 0.999 for v in vals)
            pieces = fiber_pieces(f.kind, lo, hi, ds[j], dt[j], real=real)
        for piece in pieces:
            act = Action("translate", const_expr(piece.center))
            build(prefix_actions + [act], prefix_fibers + [_piece_fiber(piece, j)],
                  j + 1)

    build([], [], 0)
    return Cover(cell, entries, ds, dt, meta={"real": real})
