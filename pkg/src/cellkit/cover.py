"""Cellular covers: lists of (cell, map) entries covering a target cell.

Each entry keeps, besides its map, a per-coordinate action descriptor that
lets the harness solve f(t) = z quickly (translate / mirrored translate /
power / point-section / general polynomial component).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .cells import Cell, CellularMap, FiberKind, FormatDegree


@dataclass(frozen=True)
class Action:
    """How to invert one map component given earlier source coordinates.

    op: 'translate'  f_j = center + t_j
        'mirror'     f_j = center - t_j
        'power'      f_j = center + t_j^q   (q != 0)
        'point'      f_j = center (the source fiber is a point)
        'general'    f_j = arbitrary polynomial in t_j (root solve)
    center is an Expr in the earlier source coordinates (or a constant).
    """

    op: str
    center: ex.Expr
    q: int = 1
    poly_in_own: Optional[tuple] = None  # coeff exprs for 'general'


def const_expr(c) -> ex.Expr:
    return ex.Const(complex(c))


@dataclass
class CoverEntry:
    cell: Cell
    cmap: CellularMap
    actions: Tuple[Action, ...]
    tags: Tuple[int, ...] = ()
    kind: str = "outside"  # 'outside' | 'inside'
    meta: dict = field(default_factory=dict)

    def label(self) -> str:
        return self.cmap.classify().label

    def sample_image(self, n: int, seed: int = 0, log_window: float = 9.0) -> np.ndarray:
        from .sampling import sample_cell

        pts = sample_cell(self.cell, n, seed=seed, log_window=log_window)
        return self.cmap.evaluate(pts)


def entry_from_actions(cell: Cell, actions: Sequence[Action], tags=(),
                       kind: str = "outside", meta: Optional[dict] = None) -> CoverEntry:
    """Build the cellular map that the action list describes."""
    comps: List[ex.Expr] = []
    for j, a in enumerate(actions):
        t = ex.Coord(j)
        if a.op == "translate":
            comps.append(ex.normalize(a.center + t, j + 1))
        elif a.op == "mirror":
            comps.append(ex.normalize(a.center - t, j + 1))
        elif a.op == "power":
            comps.append(ex.normalize(a.center + ex.Power(t, a.q), j + 1))
        elif a.op == "point":
            comps.append(ex.normalize(a.center, j + 1))
        elif a.op == "general":
            acc: ex.Expr = ex.Const(0.0)
            for k, ce in enumerate(a.poly_in_own):
                term = ce if k == 0 else ce * (t if k == 1 else ex.Power(t, k))
                acc = acc + term
            comps.append(acc)
        else:
            raise ValueError(f"unknown action {a.op}")
    cmap = CellularMap(cell, tuple(comps))
    return CoverEntry(cell, cmap, tuple(actions), tuple(tags), kind, meta or {})


@dataclass
class Cover:
    target: Cell
    entries: List[CoverEntry]
    delta_source: Tuple[float, ...]  # extension admitted by the target
    delta_target: Tuple[float, ...]  # extension admitted by the entries
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.entries)

    def labels(self) -> List[str]:
        return [e.label() for e in self.entries]

    def all_translate(self) -> bool:
        return all(l == "translate" for l in self.labels())

    def all_prepared(self) -> bool:
        return all(l in ("translate", "power", "prepared") for l in self.labels())

    def format_degree(self) -> FormatDegree:
        return FormatDegree.of([e.cell for e in self.entries],
                               [e.cmap for e in self.entries])

    def max_descriptor_nodes(self) -> int:
        return max(
            (sum(ex.node_count(c) for c in e.cmap.components) for e in self.entries),
            default=0,
        )


# -- membership solving ------------------------------------------------

def _solve_coordinate(action: Action, z: np.ndarray, prefix: List[np.ndarray]) -> List[np.ndarray]:
    """Candidate source coordinate values t_j for f_j(t) = z."""
    center = ex.evaluate(action.center, prefix + [np.zeros_like(z)])
    center = np.broadcast_to(center, z.shape)
    if action.op == "translate":
        return [z - center]
    if action.op == "mirror":
        return [center - z]
    if action.op == "point":
        return [np.zeros_like(z)]
    if action.op == "power":
        q = action.q
        w = z - center
        if q == 1:
            return [w]
        if q == -1:
            with np.errstate(divide="ignore", invalid="ignore"):
                return [np.where(w != 0, 1.0 / w, np.inf)]
        qq = abs(q)
        base = np.abs(w) ** (1.0 / qq) * np.exp(1j * np.angle(w) / qq)
        branches = [base * np.exp(2j * np.pi * k / qq) for k in range(qq)]
        if q < 0:
            with np.errstate(divide="ignore", invalid="ignore"):
                branches = [np.where(b != 0, 1.0 / b, np.inf) for b in branches]
        return branches
    if action.op == "general":
        # per-point univariate solve; used only for low-volume probes
        coeff_vals = [
            np.broadcast_to(ex.evaluate(c, prefix + [np.zeros_like(z)]), z.shape)
            for c in action.poly_in_own
        ]
        n = z.shape[0]
        deg = len(coeff_vals) - 1
        outs = [np.full(n, np.inf, dtype=complex) for _ in range(deg)]
        for i in range(n):
            cs = np.array([cv[i] for cv in coeff_vals], dtype=complex)
            cs[0] -= z[i]
            if np.max(np.abs(cs[1:])) == 0:
                continue
            r = np.roots(cs[::-1])
            for k, rt in enumerate(r):
                outs[k][i] = rt
        return outs
    raise ValueError(action.op)


def _fiber_mask(f, z: np.ndarray, prefix: List[np.ndarray],
                t: float) -> np.ndarray:
    if f.kind is FiberKind.POINT:
        return np.abs(z) <= t
    if f.kind is FiberKind.ANNULUS:
        a = np.abs(f.r1.evaluate(*prefix))
        b = np.abs(f.r2.evaluate(*prefix))
        return (np.abs(z) > a - t) & (np.abs(z) < b + t)
    r = np.abs(f.r1.evaluate(*prefix))
    if f.kind is FiberKind.DISC:
        return np.abs(z) < r + t
    if f.kind is FiberKind.PUNCTURED:
        m = (np.abs(z) > -t) & (np.abs(z) < r + t)
        if t == 0.0:
            m &= np.abs(z) > 0
        return m
    return np.abs(z) > r - t


def membership_mask(entry: CoverEntry, pts: np.ndarray, closed_tol: float = 1e-9) -> np.ndarray:
    """Which target points lie in the image of the entry's cell.

    Points failing a coordinate's fiber inequality are dropped before the
    deeper coordinates are solved, so narrow entries stay cheap.
    """
    pts = np.asarray(pts, dtype=complex)
    n, L = pts.shape
    hit = np.zeros(n, dtype=bool)
    fibers = entry.cell.fibers
    # breadth-first over power/general branches, coordinate by coordinate
    branches: List[Tuple[np.ndarray, List[np.ndarray]]] = [(np.arange(n), [])]
    for j, a in enumerate(entry.actions):
        new_branches = []
        for idx, pref in branches:
            for cand in _solve_coordinate(a, pts[idx, j], pref):
                m = np.isfinite(cand)
                m &= _fiber_mask(fibers[j], cand, pref, closed_tol)
                if not np.any(m):
                    continue
                new_branches.append((idx[m], [p[m] for p in pref] + [cand[m]]))
        branches = new_branches[:64]
    for idx, pref in branches:
        # forward verification guards point components and spurious roots
        src = np.stack(pref, axis=1)
        vals = entry.cmap.evaluate(src)
        res = np.max(np.abs(vals - pts[idx]), axis=1)
        good = res <= 1e-8 * (1.0 + np.max(np.abs(pts[idx]), axis=1))
        hit[idx[good]] = True
    return hit


def cover_mask(cover: Cover, pts: np.ndarray, closed_tol: float = 1e-9) -> np.ndarray:
    """Which target points lie in the union of the entry images.

    Covered points are removed progressively so later entries only solve
    the remaining ones.
    """
    pts = np.asarray(pts, dtype=complex)
    n = pts.shape[0]
    hit = np.zeros(n, dtype=bool)
    remaining = np.arange(n)
    for e in cover.entries:
        if remaining.size == 0:
            break
        sub = membership_mask(e, pts[remaining], closed_tol=closed_tol)
        hit[remaining[sub]] = True
        remaining = remaining[~sub]
    return hit
