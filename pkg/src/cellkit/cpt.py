"""Covers of cells compatible with polynomial hypersurfaces.

Length-1 targets are handled by a root-avoiding kernel: a point and a
punctured disc around each root of the combined polynomial, plus an
adaptive disc packing (and radial bands for the unbounded or punctured
kinds) whose entries keep a fixed multiple of their radius away from every
root.  Length-2 targets reduce to the base via discriminant loci, then
follow the root sections of the fiber polynomial over each base entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .cells import Cell, FiberKind, constant_cell, disc, point_fiber, punctured
from .cover import Action, Cover, CoverEntry, const_expr, entry_from_actions
from .polynomials import (PolyMap, RootSet, batched_roots, resultant,
                          univariate_roots)
from .refine import resolve_deltas
from .sampling import sample_cell

ROOT_TOL = 1e-9
PACK_CLEARANCE = 3.0  # packing discs stay this many radii away from roots
PUNCTURE_FACTOR = 0.45  # punctured-disc radius as a fraction of the clearance


@dataclass(frozen=True)
class Hypersurface:
    """Zero set of a polynomial on the ambient coordinates of a cell."""

    defining: PolyMap
    symmetric: bool = False

    def __post_init__(self):
        if all(c == 0 for c in self.defining.terms.values()):
            raise ValueError("defining polynomial is zero")
        if self.symmetric and not self.defining.is_real(1e-12):
            # conjugation invariance of the zero set holds exactly when the
            # coefficients are real up to a common phase
            key = self.defining.canonical_key()
            conj = self.defining.conjugate_coeffs().canonical_key()
            if key != conj:
                raise ValueError("hypersurface marked symmetric is not")


def dedupe_hypersurfaces(zs: Sequence[Hypersurface]) -> List[Hypersurface]:
    """Drop hypersurfaces with the same zero set (scale-normalized)."""
    seen = set()
    out = []
    for z in zs:
        key = z.defining.canonical_key()
        if key not in seen:
            seen.add(key)
            out.append(z)
    return out


def _cluster_points(roots: np.ndarray, tol: float) -> np.ndarray:
    if roots.size == 0:
        return roots
    used = np.zeros(len(roots), dtype=bool)
    out = []
    for i in range(len(roots)):
        if used[i]:
            continue
        near = np.abs(roots - roots[i]) <= tol
        used |= near
        out.append(np.mean(roots[near]))
    return np.asarray(out)


@dataclass
class RootInfo:
    """Combined roots of several univariate polynomials with vanishing tags."""

    points: np.ndarray
    tags: List[Tuple[int, ...]]  # hypersurface indices vanishing at each point


def combined_roots_1d(zs: Sequence[Hypersurface], tol: float = 1e-7) -> RootInfo:
    pts: List[complex] = []
    per: List[set] = []
    for i, z in enumerate(zs):
        rs = univariate_roots(z.defining.univariate_coeffs())
        for r in rs.roots:
            placed = False
            for k, p in enumerate(pts):
                if abs(p - r) <= tol * (1.0 + abs(p)):
                    per[k].add(i)
                    placed = True
                    break
            if not placed:
                pts.append(complex(r))
                per.append({i})
    return RootInfo(np.asarray(pts, dtype=complex),
                    [tuple(sorted(s)) for s in per])


# -- 1D kernel ---------------------------------------------------------

@dataclass
class Piece1D:
    kind: FiberKind
    radii: Tuple[float, ...]
    center: complex
    tags: Tuple[int, ...] = ()  # hypersurfaces this piece lies inside
    mirror: bool = False  # map is center - t instead of center + t


def _pack_region(roots: np.ndarray, units: List[Tuple[complex, float]],
                 box_center: complex, box_half: float,
                 disc_ok, covered, max_leaves: int = 200000) -> List[Tuple[complex, float]]:
    """Quadtree disc packing of a region avoiding root neighborhoods.

    disc_ok(c, s) decides whether the circumscribed disc of a square is an
    acceptable entry (inside the allowed region, clear of all roots);
    covered(c, s) prunes squares already handled (outside the region or
    inside an emitted punctured disc).
    """
    out: List[Tuple[complex, float]] = []
    stack = [(box_center, box_half)]
    budget = max_leaves
    while stack:
        c, h = stack.pop()
        s = h * math.sqrt(2.0)
        if covered(c, s):
            continue
        if disc_ok(c, s):
            out.append((c, s))
            continue
        budget -= 1
        if budget <= 0:
            raise RuntimeError("packing budget exhausted")
        q = h / 2.0
        for sx in (-1, 1):
            for sy in (-1, 1):
                stack.append((c + q * (sx + 1j * sy), q))
    return out


def _root_pieces(roots: np.ndarray, tags: List[Tuple[int, ...]],
                 in_target, room_at,
                 puncture: float = PUNCTURE_FACTOR) -> List[Piece1D]:
    """Point and punctured-disc pieces per root inside the covered region.

    room_at(a) bounds how large a disc at a may be while staying inside the
    extended target; the punctured radius is limited by it and by the
    distance to other roots.
    """
    out: List[Piece1D] = []
    for k, a in enumerate(roots):
        if not in_target(a):
            continue
        others = np.delete(roots, k)
        sep = float(np.min(np.abs(others - a))) if others.size else math.inf
        r = min(puncture * sep, 0.9 * room_at(a))
        out.append(Piece1D(FiberKind.POINT, (), complex(a), tags[k]))
        if r > 0 and np.isfinite(r):
            out.append(Piece1D(FiberKind.PUNCTURED, (r,), complex(a)))
    return out


def _merge_tree(pts: np.ndarray) -> List[frozenset]:
    """Multi-point cluster sets of the single-linkage dendrogram, inner
    merges first, ending with the full index set."""
    n = len(pts)
    if n < 2:
        return []
    D = np.abs(pts[:, None] - pts[None, :]).astype(float)
    np.fill_diagonal(D, np.inf)
    active: Dict[int, frozenset] = {i: frozenset([i]) for i in range(n)}
    ids = list(range(n))
    sets: List[frozenset] = []
    while len(ids) > 1:
        sub = D[np.ix_(ids, ids)]
        k = int(np.argmin(sub))
        a_, b_ = divmod(k, len(ids))
        a, b = ids[a_], ids[b_]
        u = active[a] | active[b]
        sets.append(u)
        D[a, :] = np.minimum(D[a, :], D[b, :])
        D[:, a] = D[a, :]
        D[a, a] = np.inf
        ids.remove(b)
        active[a] = u
    return sets


def kernel_1d(kind: FiberKind, radii: Tuple[float, ...], ds: float, dt: float,
              roots: np.ndarray, tags: Optional[List[Tuple[int, ...]]] = None,
              real: bool = False,
              clearance: float = PACK_CLEARANCE,
              puncture: float = PUNCTURE_FACTOR,
              annuli: bool = False) -> List[Piece1D]:
    """Root-compatible sharp cover pieces of one constant-radius fiber."""
    if tags is None:
        tags = [()] * len(roots)
    roots = np.asarray(roots, dtype=complex)

    if kind is FiberKind.DISC:
        R = radii[0]
        R_ext = R / ds

        def in_target(a):
            return abs(a) < R_ext

        def room_at(a):
            return R_ext - abs(a)

        pieces = _root_pieces(roots, tags, in_target, room_at, puncture)
        punct = [(p.center, p.radii[0]) for p in pieces
                 if p.kind is FiberKind.PUNCTURED]

        def dist_to_roots(c):
            return float(np.min(np.abs(roots - c))) if roots.size else math.inf

        if real:
            # keep only real-centered pieces (snapped); mirrored punctured
            # discs cover the left side of each real root
            kept = []
            for p in pieces:
                if abs(p.center.imag) > ROOT_TOL:
                    continue
                kept.append(Piece1D(p.kind, p.radii, complex(p.center.real),
                                    p.tags, p.mirror))
            pieces = kept
            real_punct = [(pc.real, pr) for pc, pr in punct
                          if abs(pc.imag) <= ROOT_TOL]
            for pc, pr in real_punct:
                pieces.append(Piece1D(FiberKind.PUNCTURED, (pr,), complex(pc),
                                      mirror=True))
            pieces += _real_kernel_interval(
                -R, R, roots, dt,
                lambda c, s: abs(c) + s / dt <= R_ext, real_punct)
            return pieces

        rings: List[Tuple[complex, float, float, bool]] = []
        if annuli and roots.size >= 2:
            # one annulus per dendrogram cluster bridges the cluster scale
            # to the separation scale; the top annulus covers the far field
            full = frozenset(range(roots.size))
            for cs in _merge_tree(roots):
                idx = sorted(cs)
                cc = complex(np.mean(roots[idx]))
                rad = float(np.max(np.abs(roots[idx] - cc)))
                if cs == full:
                    rout = R + abs(cc)
                else:
                    ext = np.delete(roots, idx)
                    rout = 0.8 * float(np.min(np.abs(ext - cc)))
                rout = min(rout, 0.95 * (R_ext - abs(cc)))
                rin = 1.05 * rad
                if rin > 0 and rout > 1.1 * rin:
                    pieces.append(Piece1D(FiberKind.ANNULUS, (rin, rout), cc))
                    rings.append((cc, rin, rout, rout >= R + abs(cc)))
            rin0 = 1.05 * float(np.max(np.abs(roots)))
            rout0 = 0.95 * R_ext
            if rin0 > 0 and rout0 > 1.1 * rin0:
                pieces.append(Piece1D(FiberKind.ANNULUS, (rin0, rout0), 0.0))
                rings.append((0.0, rin0, rout0, rout0 >= R))

        def disc_ok(c, s):
            if abs(c) + s / dt > R_ext:
                return False
            return dist_to_roots(c) >= clearance * s

        def covered(c, s):
            if abs(c) - s >= R:
                return True
            if any(abs(c - pc) + s <= pr for pc, pr in punct):
                return True
            return any(ri <= abs(c - ac) - s and (top or abs(c - ac) + s <= ro)
                       for ac, ri, ro, top in rings)

        for c, s in _pack_region(roots, punct, 0.0, R, disc_ok, covered):
            pieces.append(Piece1D(FiberKind.DISC, (s,), c))
        return pieces

    if kind in (FiberKind.PUNCTURED, FiberKind.COMPLEMENT, FiberKind.ANNULUS):
        return _radial_kernel(kind, radii, ds, dt, roots, tags, real=real)
    raise ValueError(kind)


def _real_kernel_interval(lo: float, hi: float, roots: np.ndarray, dt: float,
                          admissible,
                          real_punct: Sequence[Tuple[float, float]] = ()) -> List[Piece1D]:
    """Real-centered discs covering (lo, hi) while avoiding roots.

    real_punct lists (position, radius) of punctured discs already emitted
    at real roots; the walker jumps across them instead of shrinking.
    """
    out: List[Piece1D] = []
    t = lo
    span = hi - lo
    guard = 0
    while t <= hi and guard < 100000:
        guard += 1
        jumped = True
        while jumped:
            jumped = False
            for a, r in real_punct:
                if a - 0.5 * r < t < a + 0.5 * r:
                    t = a + 0.5 * r
                    jumped = True
        s = span * dt * 0.5
        if roots.size:
            s = min(s, float(np.min(np.abs(roots - t))) / PACK_CLEARANCE)
        s_max = s
        while s_max > 1e-14 and not admissible(t, s_max):
            s_max *= 0.5
        if s_max > 1e-14:
            out.append(Piece1D(FiberKind.DISC, (s_max,), complex(t)))
            t += 0.8 * s_max
        else:
            t += span * 1e-7
    return out


def _radial_kernel(kind: FiberKind, radii: Tuple[float, ...], ds: float,
                   dt: float, roots: np.ndarray, tags: List[Tuple[int, ...]],
                   real: bool = False) -> List[Piece1D]:
    """Radial-kind targets: root-free log bands plus packing near roots."""
    from .refine import _band_pieces

    if kind is FiberKind.PUNCTURED:
        R = radii[0]
        ext_lo, ext_hi = 0.0, R / ds
        cover_lo, cover_hi = R * math.exp(-12.0), R
    elif kind is FiberKind.COMPLEMENT:
        R = radii[0]
        ext_lo, ext_hi = R * ds, math.inf
        cover_lo, cover_hi = R, R * math.exp(12.0)
    else:
        r1, r2 = radii
        ext_lo, ext_hi = r1 * ds, r2 / ds
        cover_lo, cover_hi = r1, r2

    def in_target(a):
        return ext_lo < abs(a) < ext_hi

    def room_at(a):
        room = abs(a) - ext_lo
        if np.isfinite(ext_hi):
            room = min(room, ext_hi - abs(a))
        return room

    pieces = _root_pieces(roots, tags, in_target, room_at)
    punct = [(p.center, p.radii[0]) for p in pieces
             if p.kind is FiberKind.PUNCTURED]

    rel = roots[(np.abs(roots) > ext_lo) & (np.abs(roots) < ext_hi)] \
        if roots.size else roots

    # log-radius windows blocked by root moduli
    blocked: List[Tuple[float, float]] = []
    for a in rel:
        m = abs(a)
        blocked.append((math.log(m) - 1.0, math.log(m) + 1.0))
    blocked.sort()
    merged: List[Tuple[float, float]] = []
    for b in blocked:
        if merged and b[0] <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b[1]))
        else:
            merged.append(b)

    a_log, b_log = math.log(cover_lo), math.log(cover_hi)
    free: List[Tuple[float, float]] = []
    x = a_log
    for m0, m1 in merged:
        if m0 > x:
            free.append((x, min(m0, b_log)))
        x = max(x, m1)
        if x >= b_log:
            break
    if x < b_log:
        free.append((x, b_log))

    core_emitted = False
    if kind is FiberKind.PUNCTURED and free and free[0][0] <= a_log:
        # innermost free window reaches the puncture: emit a core cell
        r_core = min(math.exp(free[0][1]), dt * ext_hi) * 0.98
        pieces.append(Piece1D(FiberKind.PUNCTURED, (r_core,), 0.0))
        free[0] = (math.log(r_core) - 0.2, free[0][1])
        core_emitted = True
    if kind is FiberKind.COMPLEMENT and free and free[-1][1] >= b_log:
        t_tail = max(math.exp(free[-1][0]), ext_lo / dt) * 1.02
        pieces.append(Piece1D(FiberKind.COMPLEMENT, (t_tail,), 0.0))
        free[-1] = (free[-1][0], math.log(t_tail) + 0.25)

    for x0, x1 in free:
        if x1 - x0 <= 1e-9:
            continue
        lo_e = max(math.exp(x0), ext_lo * 1.0000001 if ext_lo > 0 else 0.0)
        hi_e = math.exp(x1)
        if np.isfinite(ext_hi):
            hi_e = min(hi_e, ext_hi * 0.9999999)
        if hi_e <= lo_e:
            continue
        for p in _band_pieces(lo_e * 1.0000001, hi_e * 0.9999999,
                              ext_lo, ext_hi, dt):
            pieces.append(Piece1D(p.kind, p.radii, 0.0))

    # packing near root moduli
    def dist_to_roots(c):
        return float(np.min(np.abs(roots - c))) if roots.size else math.inf

    def disc_ok(c, s):
        if abs(c) - s / dt <= ext_lo:
            return False
        if np.isfinite(ext_hi) and abs(c) + s / dt > ext_hi:
            return False
        return dist_to_roots(c) >= PACK_CLEARANCE * s

    for m0, m1 in merged:
        m0 = max(m0, a_log - 0.3)
        m1 = min(m1, b_log + 0.3)
        if m1 <= m0:
            continue
        lo_e, hi_e = math.exp(m0), math.exp(m1)

        def covered(c, s, lo_e=lo_e, hi_e=hi_e):
            if abs(c) + s <= lo_e or abs(c) - s >= hi_e:
                return True
            return any(abs(c - pc) + s <= pr for pc, pr in punct)

        half = hi_e
        got = _pack_region(roots, punct, 0.0, half, disc_ok, covered)
        for c, s in got:
            pieces.append(Piece1D(FiberKind.DISC, (s,), c))
    return pieces


def _piece_cell_fiber(p: Piece1D, nvars: int):
    if p.kind is FiberKind.POINT:
        return point_fiber()
    if p.kind is FiberKind.DISC:
        return disc(p.radii[0], nvars)
    if p.kind is FiberKind.PUNCTURED:
        return punctured(p.radii[0], nvars)
    if p.kind is FiberKind.COMPLEMENT:
        from .cells import complement

        return complement(p.radii[0], nvars)
    from .cells import annulus

    return annulus(p.radii[0], p.radii[1], nvars)


def _piece_action(p: Piece1D) -> Action:
    if p.kind is FiberKind.POINT:
        return Action("point", const_expr(p.center))
    if p.mirror:
        return Action("mirror", const_expr(p.center))
    return Action("translate", const_expr(p.center))


def cpt_1d(cell: Cell, zs: Sequence[Hypersurface],
           rho: Optional[float] = None, sigma: Optional[float] = None,
           delta_source: Optional[float] = None,
           delta_target: Optional[float] = None,
           real: bool = False) -> Cover:
    """Sharp hypersurface-compatible cover of a length-1 cell."""
    ds = resolve_deltas(cell, rho, delta_source)[0]
    dt = resolve_deltas(cell, sigma, delta_target)[0]
    zs = dedupe_hypersurfaces(zs)
    info = combined_roots_1d(zs)
    f = cell.fibers[0]
    radii = tuple(abs(r.constant_value()) for r in f.radii())
    pieces = kernel_1d(f.kind, radii, ds, dt, info.points, info.tags, real=real)
    entries = []
    for p in pieces:
        src = Cell((_piece_cell_fiber(p, 0),))
        e = entry_from_actions(src, [_piece_action(p)], tags=p.tags,
                               kind="inside" if p.tags else "outside")
        entries.append(e)
    return Cover(cell, entries, (ds,), (dt,),
                 meta={"real": real, "hypersurfaces": len(zs)})


def cluster_fibers(points: Sequence[complex], gamma: float,
                   radius: float = 1.0) -> List[Tuple[Cell, complex]]:
    """1D cells whose gamma-shells avoid the given points, covering D(radius).

    Returns (cell, translate-center) pairs; the identity disc when there are
    no points.
    """
    pts = np.asarray(list(points), dtype=complex)
    if pts.size == 0:
        return [(Cell((disc(radius),)), 0.0)]
    pieces = kernel_1d(FiberKind.DISC, (radius,), gamma, gamma, pts)
    return [(Cell((_piece_cell_fiber(p, 0),)), p.center) for p in pieces]


# -- length-2 machinery ------------------------------------------------

FIT_TOL = 1e-9
COMPAT_TOL = 1e-7
MAX_BASE_DEPTH = 5
BASE_CLEARANCE = 1.45  # base pieces need analyticity room, not compatibility
FIBER_CLEARANCE = 1.3
FIBER_PUNCTURE = 0.8  # fiber punctures only avoid other sections' images


def discriminant_locus(zi: Hypersurface, zj: Hypersurface,
                       cell: Cell) -> Optional[Hypersurface]:
    """Base hypersurface where zi and zj collide in the last coordinate
    (or where zi branches, when zi is zj); None when the resultant is a
    nonzero constant, ValueError when it vanishes identically."""
    last = cell.length - 1
    if zi is zj or zi.defining.canonical_key() == zj.defining.canonical_key():
        r = resultant(zi.defining, zi.defining.derivative(last))
    else:
        r = resultant(zi.defining, zj.defining)
    if r.is_zero():
        raise ValueError("hypersurfaces share a component (zero resultant)")
    if r.total_degree() == 0:
        return None
    return Hypersurface(r)


def _nonconstant(p: PolyMap) -> bool:
    return p.total_degree() > 0


def base_hypersurfaces(zs: Sequence[Hypersurface], cell: Cell) -> List[Hypersurface]:
    """Discriminants, pairwise collision loci and leading coefficients."""
    out: List[Hypersurface] = []
    last = cell.length - 1
    for i, z in enumerate(zs):
        cw = z.defining.coeffs_in_last()
        if _nonconstant(cw[-1]):
            out.append(Hypersurface(cw[-1]))
        if len(cw) > 2:
            h = discriminant_locus(z, z, cell)
            if h is not None:
                out.append(h)
        for zj in zs[i + 1:]:
            h = discriminant_locus(z, zj, cell)
            if h is not None:
                out.append(h)
    return dedupe_hypersurfaces(out)


def _spiral_samples(r_t: float, rings: int = 12, per: int = 24,
                    inner: float = 0.12) -> np.ndarray:
    """Sample path over a disc of radius r_t, center-out, angularly dense."""
    radii = np.linspace(inner, 1.0, rings) * r_t
    out = []
    for k, rr in enumerate(radii):
        for a in range(per):
            out.append(rr * np.exp(2j * np.pi * (a + 0.35 * k) / per))
    return np.asarray(out, dtype=complex)


def _match_step(cur: np.ndarray, cand: np.ndarray) -> Optional[np.ndarray]:
    """Globally match the unordered roots cand to the labeled roots cur.

    Returns cand reordered to follow cur, or None when some section moves
    by a sizeable fraction of its separation from the rest, which makes
    the matching unsafe.
    """
    d = len(cur)
    dist = np.abs(cur[:, None] - cand[None, :])
    chosen = np.full(d, -1, dtype=int)
    used = np.zeros(d, dtype=bool)
    assigned = 0
    for idx in np.argsort(dist, axis=None):
        a, b = divmod(int(idx), d)
        if chosen[a] >= 0 or used[b]:
            continue
        chosen[a] = b
        used[b] = True
        assigned += 1
        if assigned == d:
            break
    new = cand[chosen]
    if d > 1:
        sep = np.abs(new[:, None] - new[None, :])
        np.fill_diagonal(sep, np.inf)
        move = np.abs(new - cur)
        if np.any((move > 0.45 * sep.min(axis=1)) & (np.abs(new) < 1e12)):
            return None
    return new


def _refined_step(cur: np.ndarray, t0: complex, t1: complex,
                  cand1: np.ndarray, rows_at, depth: int) -> Optional[np.ndarray]:
    """Match cur at t0 to cand1 at t1, bisecting the segment as needed.

    Sections that pass close to each other without colliding need smaller
    continuation steps than the sample spacing provides.
    """
    got = _match_step(cur, cand1)
    if got is not None or depth <= 0:
        return got
    tm = 0.5 * (t0 + t1)
    candm = rows_at(np.asarray([tm], dtype=complex))[0]
    mid = _refined_step(cur, t0, tm, candm, rows_at, depth - 1)
    if mid is None:
        return None
    return _refined_step(mid, tm, t1, cand1, rows_at, depth - 1)


def _track_sections(rows: np.ndarray, ts: Optional[np.ndarray] = None,
                    rows_at=None) -> Optional[np.ndarray]:
    """Label roots consistently along a sample path.

    rows[i] holds the unordered roots at path point i; returns an array of
    the same shape with column k following one section, or None when the
    matching is ambiguous.  When ts and rows_at are given, ambiguous steps
    are retried with bisected continuation along the t segment.
    """
    n, d = rows.shape
    out = np.empty_like(rows)
    out[0] = rows[0][np.argsort(np.abs(rows[0]) + 1e-9 * np.angle(rows[0]))]
    for i in range(1, n):
        new = _match_step(out[i - 1], rows[i])
        if new is None and ts is not None and rows_at is not None:
            new = _refined_step(out[i - 1], complex(ts[i - 1]), complex(ts[i]),
                                rows[i], rows_at, depth=7)
        if new is None:
            return None
        out[i] = new
    return out


def _loop_consistent(wcoeffs_rows_fn, r_t: float, labels_at0: np.ndarray,
                     steps: int = 72) -> bool:
    """Continuation around |t| = r_t must return with trivial monodromy."""
    ang = np.exp(2j * np.pi * np.arange(steps + 1) / steps)
    ts = r_t * ang
    rows = wcoeffs_rows_fn(ts)
    tracked = _track_sections(rows, ts, wcoeffs_rows_fn)
    if tracked is None:
        return False
    first, last = tracked[0], tracked[-1]
    d = len(first)
    if d < 2:
        return True
    sep = np.abs(first[:, None] - first[None, :])
    np.fill_diagonal(sep, np.inf)
    return bool(np.all(np.abs(last - first) < 0.45 * sep.min(axis=1)))


def _min_sep(vals: np.ndarray) -> float:
    d = len(vals)
    if d < 2:
        return math.inf
    m = math.inf
    for a in range(d):
        for b in range(a + 1, d):
            m = min(m, abs(vals[a] - vals[b]))
    return max(m, 1e-300)


def _fit_poly(ts: np.ndarray, vals: np.ndarray, scale_t: float,
              tol: float) -> Optional[np.ndarray]:
    """Least-squares polynomial in t (ascending coefficients) hitting the
    samples to tol, with adaptive degree."""
    u = ts / scale_t
    vscale = 1.0 + float(np.max(np.abs(vals)))
    for deg in (8, 16, 36, 64, 96):
        if deg >= len(ts):
            deg = len(ts) - 1
        V = np.vander(u, deg + 1, increasing=True)
        sol, *_ = np.linalg.lstsq(V, vals, rcond=None)
        res = float(np.max(np.abs(V @ sol - vals)))
        if res <= tol * vscale:
            pw = sol / (scale_t ** np.arange(deg + 1))
            return pw
    return None


def _poly_expr(coeffs: np.ndarray, var: int) -> ex.Expr:
    p = PolyMap(var + 1, {(0,) * var + (k,): complex(c)
                          for k, c in enumerate(coeffs) if c != 0})
    if not p.terms:
        return ex.Const(0.0)
    return ex.normalize(ex.from_polymap(p), var + 1)


def _poly_radius(coeffs: np.ndarray, nvars: int) -> PolyMap:
    return PolyMap(nvars, {(0,) * (nvars - 1) + (k,): complex(c)
                           for k, c in enumerate(coeffs) if c != 0})


@dataclass
class SectionSet:
    ts: np.ndarray                  # sample path in the source coordinate
    tracked: np.ndarray             # (n_samples, n_sections) root values
    fits: List[Optional[np.ndarray]]  # ascending coeffs per section


def _solve_sections(wcoeffs: List[PolyMap], cb: complex, nu: int, r_t: float,
                    skip_above: float) -> Optional[SectionSet]:
    """Track and fit the roots of sum_k c_k(z) w^k over z = cb + t^nu."""
    ts = _spiral_samples(r_t)

    def rows_at(tt: np.ndarray) -> np.ndarray:
        z = cb + tt ** nu
        from .polynomials import batched_roots

        rows = np.stack([np.broadcast_to(c.evaluate(z), z.shape)
                         for c in wcoeffs], axis=1)
        return batched_roots(rows)

    rows = rows_at(ts)
    tracked = _track_sections(rows, ts, rows_at)
    if tracked is None:
        return None
    if not _loop_consistent(rows_at, r_t, tracked[0]):
        return None
    fits: List[Optional[np.ndarray]] = []
    for k in range(tracked.shape[1]):
        vals = tracked[:, k]
        if np.min(np.abs(vals)) > skip_above:
            fits.append(None)  # section never meets the fiber region
            continue
        f = _fit_poly(ts, vals, r_t, FIT_TOL)
        if f is None:
            return None
        fits.append(f)
    return SectionSet(ts, tracked, fits)


def _section_values(fit: np.ndarray, ts: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(ts)
    for c in fit[::-1]:
        acc = acc * ts + c
    return acc


def _inside_tags_for_samples(zs: Sequence[Hypersurface], zvals: np.ndarray,
                             wvals: np.ndarray) -> Tuple[Tuple[int, ...], bool]:
    """Indices of hypersurfaces vanishing along the samples; the flag is
    False when some hypersurface is neither clearly inside nor outside."""
    tags = []
    ok = True
    for i, z in enumerate(zs):
        scale = max(abs(c) for c in z.defining.terms.values())
        v = np.abs(z.defining.evaluate(zvals, wvals)) / scale
        if np.max(v) <= COMPAT_TOL:
            tags.append(i)
        elif np.min(v) <= COMPAT_TOL * 0.999 and np.max(v) > COMPAT_TOL:
            ok = False
    return tuple(tags), ok


def _split_disc(c: complex, s: float) -> List[Tuple[complex, float]]:
    """Nine sub-discs covering D(c, s) at roughly half scale."""
    out = [(c, 0.5 * s)]
    for k in range(8):
        out.append((c + 0.72 * s * np.exp(2j * np.pi * k / 8), 0.46 * s))
    return out


def _split_punctured(r: float) -> Tuple[float, List[Tuple[complex, float]]]:
    """A smaller core D-circle-less disc plus discs covering the outer part."""
    core = 0.3 * r
    discs: List[Tuple[complex, float]] = []
    for rho, rad, n in ((0.42 * r, 0.22 * r, 10), (0.78 * r, 0.33 * r, 12)):
        for k in range(n):
            discs.append((rho * np.exp(2j * np.pi * (k + 0.3) / n), rad))
    return core, discs


def _newton2(A: PolyMap, B: PolyMap, z: complex, w: complex,
             iters: int = 14) -> Tuple[complex, complex]:
    Az, Aw = A.derivative(0), A.derivative(1)
    Bz, Bw = B.derivative(0), B.derivative(1)
    za = np.empty(1, dtype=complex)
    wa = np.empty(1, dtype=complex)
    for _ in range(iters):
        za[0], wa[0] = z, w
        a = A.evaluate(za, wa)[0]
        b = B.evaluate(za, wa)[0]
        j11 = Az.evaluate(za, wa)[0]
        j12 = Aw.evaluate(za, wa)[0]
        j21 = Bz.evaluate(za, wa)[0]
        j22 = Bw.evaluate(za, wa)[0]
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        z = z - (a * j22 - b * j12) / det
        w = w - (j11 * b - j21 * a) / det
    return z, w


def _polish_base_roots(points: np.ndarray,
                       zs: Sequence[Hypersurface]) -> np.ndarray:
    """Snap base roots onto the exact loci they witness.

    The base hypersurfaces (discriminants, resultants) carry numerical
    coefficient noise, so their roots sit ~1e-8 off the true collision or
    branch points; puncture centers that far off the true locus give the
    fiber sections a spurious pole at the puncture, which breaks the
    polynomial fits. Polishing runs Newton on the exact defining systems:
    two colliding fiber roots of one or two input polynomials, or a root
    of an exact leading coefficient.
    """
    systems: List[Tuple[PolyMap, PolyMap]] = []
    for i, z in enumerate(zs):
        p = z.defining
        if p.degree_in(1) >= 2:
            systems.append((p, p.derivative(1)))
        for zj in zs[i + 1:]:
            systems.append((p, zj.defining))
    lcs: List[PolyMap] = []
    for z in zs:
        cw = z.defining.coeffs_in_last()
        if cw[-1].total_degree() > 0:
            lcs.append(cw[-1])
    out = points.copy()
    for idx in range(len(points)):
        z0 = complex(points[idx])
        za = np.asarray([z0], dtype=complex)
        cand: List[complex] = []
        for A, B in systems:
            rows = np.stack([np.broadcast_to(c.evaluate(za), za.shape)
                             for c in A.coeffs_in_last()], axis=1)
            try:
                roots = batched_roots(rows)[0]
            except Exception:
                continue
            roots = roots[np.abs(roots) < 1e9]
            if len(roots) == 0:
                continue
            sb = max(B.max_coeff(), 1e-300)
            resid = np.abs(B.evaluate(np.full(len(roots), z0), roots)) / sb
            k = int(np.argmin(resid))
            if resid[k] < 1e-4:
                zp, _ = _newton2(A, B, z0, complex(roots[k]))
                if abs(zp - z0) < 1e-5 * (1.0 + abs(z0)):
                    cand.append(zp)
        for p in lcs:
            if abs(p.evaluate(za)[0]) / max(p.max_coeff(), 1e-300) < 1e-4:
                dp = p.derivative(0)
                zp = z0
                zb = np.empty(1, dtype=complex)
                for _ in range(10):
                    zb[0] = zp
                    den = dp.evaluate(zb)[0]
                    if den == 0:
                        break
                    zp = zp - p.evaluate(zb)[0] / den
                if abs(zp - z0) < 1e-5 * (1.0 + abs(z0)):
                    cand.append(zp)
        if cand:
            out[idx] = min(cand, key=lambda c: abs(c - z0))
    return out


@dataclass
class _BaseTask:
    kind: FiberKind  # DISC or PUNCTURED
    center: complex
    radius: float
    depth: int


def _product_wcoeffs(zs: Sequence[Hypersurface]) -> List[PolyMap]:
    prod = zs[0].defining
    for z in zs[1:]:
        prod = prod * z.defining
    return prod.coeffs_in_last()


def _restrict_to_point(z: Hypersurface, b0: complex) -> Optional[PolyMap]:
    """Univariate fiber polynomial at a base point; None when it vanishes
    identically on the fiber."""
    cw = z.defining.coeffs_in_last()
    b = np.asarray([b0], dtype=complex)
    vals = np.array([c.evaluate(b)[0] for c in cw])
    scale = max(c.max_coeff() for c in cw) * (1.0 + abs(b0)) ** max(
        c.total_degree() for c in cw)
    if np.max(np.abs(vals)) <= 1e-12 * scale:
        return None
    top = np.max(np.abs(vals))
    while len(vals) > 1 and abs(vals[-1]) < 1e-12 * top:
        vals = vals[:-1]
    return PolyMap.from_univariate_coeffs(vals)


def _point_fiber_entries(cell: Cell, zs: Sequence[Hypersurface], b0: complex,
                         ds1: float, dt1: float) -> List[CoverEntry]:
    always: List[int] = []
    restricted: List[Tuple[int, PolyMap]] = []
    for i, z in enumerate(zs):
        p = _restrict_to_point(z, b0)
        if p is None:
            always.append(i)
        else:
            restricted.append((i, p))
    pts: List[complex] = []
    tags: List[Tuple[int, ...]] = []
    if restricted:
        # merge roots across the restricted polynomials, tagged by origin
        allpts = []
        for i, p in enumerate(restricted):
            rs = univariate_roots(p[1])
            for a in rs.roots:
                allpts.append((complex(a), p[0]))
        # a multiple root at a base point splits numerically by about the
        # square root of the base-point accuracy, so merge generously
        centers = _cluster_points(np.asarray([a for a, _ in allpts]), 3e-5)
        for c in centers:
            who = tuple(sorted({i for a, i in allpts if abs(a - c) <= 6e-5}))
            pts.append(c)
            tags.append(who)
    b = np.asarray([b0], dtype=complex)
    Rf = float(abs(cell.fibers[1].r1.evaluate(b)[0]))
    pieces = kernel_1d(FiberKind.DISC, (Rf,), ds1, dt1,
                       np.asarray(pts, dtype=complex), tags,
                       clearance=FIBER_CLEARANCE, puncture=FIBER_PUNCTURE,
                       annuli=True)
    out = []
    for p in pieces:
        src = Cell((point_fiber(), _piece_cell_fiber(p, 1)))
        t = tuple(sorted(set(always) | set(p.tags)))
        acts = [Action("point", const_expr(b0)), _piece_action(p)]
        out.append(entry_from_actions(src, acts, tags=t,
                                      kind="inside" if t else "outside"))
    return out


RING_ANGLES = 16
CLUSTER_CORE = 0.8
CLUSTER_RING = 0.4
CLUSTER_SECTION = 0.9
CLUSTER_ANNULUS_IN = 1.25
CLUSTER_SKIP = 0.55


def _shifted_poly(coeffs: np.ndarray, pad: int) -> np.ndarray:
    out = np.zeros(pad, dtype=complex)
    out[: len(coeffs)] = coeffs
    return out


DEBUG_REASONS = []


def _give_up(code):
    DEBUG_REASONS.append(code)
    return None


def _curved_entries(cell: Cell, zs: Sequence[Hypersurface],
                    wcoeffs: List[PolyMap], task: _BaseTask,
                    ds1: float, dt1: float) -> Optional[List[CoverEntry]]:
    """Section-following fiber cover over one analytic base piece.

    Returns None when the piece must be subdivided.
    """
    punct = task.kind is FiberKind.PUNCTURED
    z_pad = 1.05 if not punct else 1.1
    nus = range(1, 25) if punct else (1,)
    sol = None
    nu = 1
    for nu in nus:
        r_t = (z_pad * task.radius) ** (1.0 / nu)
        zprobe = task.center + _spiral_samples(r_t) ** nu
        rext_probe = np.abs(cell.fibers[1].r1.evaluate(zprobe)) / ds1
        sol = _solve_sections(wcoeffs, task.center, nu, r_t,
                              skip_above=4.0 * float(np.max(rext_probe)))
        if sol is not None:
            break
    if sol is None:
        return _give_up(1)

    r_t = (z_pad * task.radius) ** (1.0 / nu)
    # statistics restricted to the piece itself; the padded samples serve
    # only the polynomial fits
    own_t = task.radius ** (1.0 / nu)
    mask = np.abs(sol.ts) <= 1.001 * own_t
    ts = sol.ts[mask]
    zvals = task.center + ts ** nu
    rvals = np.abs(cell.fibers[1].r1.evaluate(zvals))
    Rcov_max = float(np.max(rvals))
    Rext_min = float(np.min(rvals)) / ds1
    Rext_t = rvals / ds1
    if Rcov_max > 0.98 * Rext_min:
        return _give_up(2)  # fiber radius varies too much over this piece

    nsec = sol.tracked.shape[1]
    vals = [sol.tracked[mask, k] for k in range(nsec)]
    w0 = [complex(sol.fits[k][0]) if sol.fits[k] is not None
          else complex(np.mean(vals[k])) for k in range(nsec)]
    var = [float(np.max(np.abs(vals[k] - w0[k]))) for k in range(nsec)]

    # sections closer to each other than their own wander are handled as a
    # pair with separation-proportional geometry
    parent = list(range(nsec))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for j in range(nsec):
        for k in range(j + 1, nsec):
            gap = float(np.min(np.abs(vals[j] - vals[k])))
            if gap < 3.4 * max(var[j], var[k]):
                parent[find(j)] = find(k)
    groups: Dict[int, List[int]] = {}
    for k in range(nsec):
        groups.setdefault(find(k), []).append(k)
    clusters = [g for g in groups.values() if len(g) > 1]
    if any(len(g) > 2 for g in clusters):
        return _give_up(3)
    if any(sol.fits[k] is None for g in clusters for k in g):
        return _give_up(4)
    clustered = {k for g in clusters for k in g}

    def minsep_to_others(k, exclude=()):
        m = math.inf
        for j in range(nsec):
            if j == k or j in exclude:
                continue
            m = min(m, float(np.min(np.abs(vals[k] - vals[j]))))
        return m

    def section_tags(wv):
        return _inside_tags_for_samples(zs, zvals, wv)

    if punct:
        base_fiber = punctured(r_t / z_pad ** (1.0 / nu))
        base_action = (Action("power", const_expr(task.center), q=nu)
                       if nu > 1 else Action("translate", const_expr(task.center)))
    else:
        base_fiber = disc(task.radius)
        base_action = Action("translate", const_expr(task.center))

    entries: List[CoverEntry] = []
    tubes: List[Tuple[complex, float]] = []  # clearance for the packing
    solids: List[Tuple[complex, float]] = []  # discs covered for every z
    punct_r: Dict[int, float] = {}  # punctured radius emitted per section

    def emit(fiber, fiber_action, tags=()):
        src = Cell((base_fiber, fiber))
        entries.append(entry_from_actions(
            src, [base_action, fiber_action], tags=tags,
            kind="inside" if tags else "outside"))

    # singleton sections
    for k in range(nsec):
        if k in clustered:
            continue
        room = float(np.min(Rext_t - np.abs(vals[k])))
        minsep = minsep_to_others(k)
        emittable = room > 0.02 * Rext_min and minsep > 0
        low = float(np.min(np.abs(vals[k])))
        if emittable:
            if sol.fits[k] is None:
                return _give_up(5)
            r_k = min(FIBER_PUNCTURE * minsep, 0.9 * room)
            if var[k] > 0.4 * r_k:
                return _give_up(6)
            tg, ok = section_tags(vals[k])
            if not ok:
                return _give_up(7)
            center = _poly_expr(sol.fits[k], 0)
            emit(point_fiber(), Action("point", center), tags=tg)
            emit(punctured(r_k, 1), Action("translate", center))
            punct_r[k] = r_k
            tubes.append((w0[k], var[k]))
            solids.append((w0[k], 0.98 * r_k - var[k]))
        elif low - var[k] >= Rcov_max + 0.01 * Rext_min:
            tubes.append((w0[k], var[k]))
        else:
            return _give_up(8)

    # collision pairs
    for g in clusters:
        j, k = g
        pad = max(len(sol.fits[j]), len(sol.fits[k]))
        fj = _shifted_poly(sol.fits[j], pad)
        fk = _shifted_poly(sol.fits[k], pad)
        mu = 0.5 * (fj + fk)
        de = 0.5 * (fj - fk)
        colliding = abs(de[0]) <= 1e-6 * (1.0 + abs(mu[0]))
        if colliding:
            if not punct:
                return _give_up(9)  # collision inside a plain disc piece
            de[0] = 0.0
        mu_vals = _section_values(mu, ts)
        de_vals = _section_values(de, ts)
        if np.min(np.abs(de_vals)) <= 1e-12 * (1.0 + float(np.max(np.abs(de_vals)))):
            return _give_up(10)
        wc = complex(mu[0])
        var_mu = float(np.max(np.abs(mu_vals - wc)))
        dmax = float(np.max(np.abs(de_vals)))
        roomc = float(np.min(Rext_t - np.abs(mu_vals)))
        minsep_c = math.inf
        for m in range(nsec):
            if m in g:
                continue
            minsep_c = min(minsep_c, float(np.min(np.abs(vals[m] - mu_vals))))
        T = min(3.0 * (var_mu + 1.45 * dmax), FIBER_PUNCTURE * minsep_c,
                0.9 * roomc)
        if T < 1.35 * dmax + 1.5 * var_mu:
            return _give_up(11)
        mu_e = _poly_expr(mu, 0)
        de_p = _poly_radius(de, 1)
        for m, fm in ((j, fj), (k, fk)):
            tg, ok = section_tags(vals[m])
            if not ok:
                return _give_up(12)
            center = _poly_expr(fm, 0)
            emit(point_fiber(), Action("point", center), tags=tg)
            emit(punctured(CLUSTER_SECTION * de_p, 1),
                 Action("translate", center))
        emit(disc(CLUSTER_CORE * de_p, 1), Action("translate", mu_e))
        for a in range(RING_ANGLES):
            cu = np.exp(2j * np.pi * a / RING_ANGLES)
            if abs(cu - 1.0) < CLUSTER_SKIP or abs(cu + 1.0) < CLUSTER_SKIP:
                continue
            emit(disc(CLUSTER_RING * de_p, 1),
                 Action("translate", _poly_expr(mu + cu * de, 0)))
        from .cells import annulus

        emit(annulus(CLUSTER_ANNULUS_IN * de_p, T, 1),
             Action("translate", mu_e))
        tubes.append((wc, var_mu + dmax))
        solids.append((wc, 0.98 * T - var_mu))

    # dendrogram annuli around groups of sections: one ring per cluster
    # bridges its own scale to the separation scale, the top ring covers
    # the far field; radii are worst-cased over the base piece
    rings: List[Tuple[complex, float, float, bool]] = []
    # sections beyond the extension cannot meet any ring (rings stay inside
    # the extension radius), so the hierarchy only tracks the near ones
    rel = [k for k in range(nsec)
           if float(np.min(np.abs(vals[k]))) <= 2.5 * Rext_min]
    w0a = np.asarray([w0[k] for k in rel], dtype=complex)
    full = frozenset(range(len(rel)))
    sets = _merge_tree(w0a)
    if len(rel) == 1:
        sets = [full]
    for cs in sets:
        idx = sorted(cs)
        cc = complex(np.mean(w0a[idx]))
        rad = max(float(np.max(np.abs(vals[rel[k]] - cc))) for k in idx)
        if cs == full:
            rout = Rcov_max + abs(cc)
        else:
            rout = 0.8 * min(float(np.min(np.abs(vals[rel[k]] - cc)))
                             for k in range(len(rel)) if k not in cs)
        rout = min(rout, 0.95 * (Rext_min - abs(cc)))
        rin = max(1.05 * rad, 1.4 * max(var[rel[k]] for k in idx))
        if rin <= 0:
            inner = [punct_r[rel[k]] for k in idx if rel[k] in punct_r]
            if not inner:
                continue
            rin = 0.5 * min(inner)
        if rout > 1.1 * rin:
            from .cells import annulus

            emit(annulus(rin, rout, 1), Action("translate", const_expr(cc)))
            # a ring reaching past the covered radius leaves nothing to do
            # outside its hole
            rings.append((cc, rin, rout, rout >= Rcov_max + abs(cc)))
    if rel:
        # far ring about the fiber center: covers everything from just
        # beyond the outermost section to the extension boundary
        rin0 = 1.05 * max(float(np.max(np.abs(vals[k]))) for k in rel)
        rout0 = 0.95 * Rext_min
        if rin0 > 0 and rout0 > 1.1 * rin0:
            from .cells import annulus

            emit(annulus(rin0, rout0, 1), Action("translate", const_expr(0.0)))
            rings.append((0.0, rin0, rout0, rout0 >= Rcov_max))
    if nsec == 0:
        emit(disc(Rcov_max, 1), Action("translate", const_expr(0.0)))
        return entries

    # residual gaps: rasterize the fiber disc, then drop the largest
    # admissible discs onto uncovered raster points first
    n_grid = 96
    ax = np.linspace(-Rcov_max, Rcov_max, n_grid)
    pts = (ax[None, :] + 1j * ax[:, None]).ravel()
    pts = pts[np.abs(pts) <= Rcov_max]
    m = np.zeros(pts.shape, dtype=bool)
    for a, r in solids:
        m |= np.abs(pts - a) <= r
    for ac, ri, ro, top in rings:
        d = np.abs(pts - ac)
        m |= (d > ri) & ((d < ro) | top)
    spt = np.minimum((Rext_min - np.abs(pts)) * dt1, Rcov_max)
    for a, v in tubes:
        spt = np.minimum(spt, (np.abs(pts - a) - v) / FIBER_CLEARANCE)
    alive = ~m
    for i in np.argsort(-spt, kind="stable"):
        if not alive[i] or spt[i] <= 1e-12:
            continue
        c = complex(pts[i])
        s = 0.98 * float(spt[i])
        emit(disc(s, 1), Action("translate", const_expr(c)))
        alive &= np.abs(pts - c) > s
    return entries


def cpt_2d(cell: Cell, zs: Sequence[Hypersurface], ds: Tuple[float, float],
           dt: Tuple[float, float]) -> Cover:
    """Sharp hypersurface-compatible cover of a length-2 cell over a disc."""
    if cell.fibers[0].kind is not FiberKind.DISC:
        raise NotImplementedError("length-2 covers need a disc base")
    if cell.fibers[1].kind is not FiberKind.DISC:
        raise NotImplementedError("length-2 covers need a disc fiber")
    zs = dedupe_hypersurfaces(zs)
    for z in zs:
        if z.defining.nvars != 2:
            raise ValueError("hypersurface must live on two coordinates")
    wcoeffs = _product_wcoeffs(zs)
    bh = base_hypersurfaces(zs, cell)
    info = combined_roots_1d(bh)
    info.points[:] = _polish_base_roots(info.points, zs)
    R0 = float(abs(cell.fibers[0].r1.constant_value()))
    base_pieces = kernel_1d(FiberKind.DISC, (R0,), ds[0], dt[0],
                            info.points, info.tags,
                            clearance=BASE_CLEARANCE)
    entries: List[CoverEntry] = []
    stack: List[_BaseTask] = []
    for p in base_pieces:
        if p.kind is FiberKind.POINT:
            entries += _point_fiber_entries(cell, zs, p.center, ds[1], dt[1])
        else:
            stack.append(_BaseTask(p.kind, p.center, p.radii[0], 0))
    while stack:
        task = stack.pop()
        got = _curved_entries(cell, zs, wcoeffs, task, ds[1], dt[1])
        if got is not None:
            entries += got
            continue
        if task.depth >= MAX_BASE_DEPTH:
            raise RuntimeError("base subdivision depth exhausted")
        if task.kind is FiberKind.DISC:
            for c, s in _split_disc(task.center, task.radius):
                stack.append(_BaseTask(FiberKind.DISC, c, s, task.depth + 1))
        else:
            core, discs = _split_punctured(task.radius)
            stack.append(_BaseTask(FiberKind.PUNCTURED, task.center, core,
                                   task.depth + 1))
            for c, s in discs:
                stack.append(_BaseTask(FiberKind.DISC, task.center + c, s,
                                       task.depth + 1))
    return Cover(cell, entries, tuple(ds), tuple(dt),
                 meta={"real": False, "hypersurfaces": len(zs)})


def cpt(cell: Cell, zs: Sequence[Hypersurface],
        rho: Optional[float] = None, sigma: Optional[float] = None,
        delta_source: Optional[float] = None,
        delta_target: Optional[float] = None, real: bool = False) -> Cover:
    """Hypersurface-compatible sharp cover of a cell of length one or two."""
    ds = resolve_deltas(cell, rho, delta_source)
    dt = resolve_deltas(cell, sigma, delta_target)
    if cell.length == 1:
        return cpt_1d(cell, zs, delta_source=ds[0], delta_target=dt[0],
                      real=real)
    if cell.length == 2:
        if real:
            raise NotImplementedError("real covers are limited to length one")
        return cpt_2d(cell, zs, (ds[0], ds[1]), (dt[0], dt[1]))
    raise NotImplementedError("covers are implemented for lengths one and two")
