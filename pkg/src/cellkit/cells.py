"""Cells and cellular maps.

A cell of length L is an iterated fibered product of one-dimensional fibers:
point, disc D(r), punctured disc D∘(r), disc complement D⊂(r) and annulus
A(r1, r2).  Each radius is a PolyMap in the preceding coordinates,
nonvanishing there.  A cellular map is triangular: component j depends on
coordinates 0..j only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .polynomials import PolyMap


class FiberKind(enum.Enum):
    POINT = "*"
    DISC = "D"
    PUNCTURED = "Do"
    COMPLEMENT = "Dc"
    ANNULUS = "A"


@dataclass(frozen=True)
class Fiber:
    kind: FiberKind
    r1: Optional[PolyMap] = None  # inner radius (annulus) / the radius otherwise
    r2: Optional[PolyMap] = None  # outer radius (annulus only)

    def __post_init__(self):
        k = self.kind
        if k is FiberKind.POINT:
            if self.r1 is not None or self.r2 is not None:
                raise ValueError("point fiber has no radii")
        elif k is FiberKind.ANNULUS:
            if self.r1 is None or self.r2 is None:
                raise ValueError("annulus needs two radii")
        else:
            if self.r1 is None or self.r2 is not None:
                raise ValueError(f"{k} needs exactly one radius")

    def radii(self) -> Tuple[PolyMap, ...]:
        if self.kind is FiberKind.POINT:
            return ()
        if self.kind is FiberKind.ANNULUS:
            return (self.r1, self.r2)
        return (self.r1,)


def _as_radius(r, nvars: int) -> PolyMap:
    if isinstance(r, PolyMap):
        if r.nvars != nvars:
            raise ValueError(f"radius nvars {r.nvars} != {nvars}")
        return r
    return PolyMap.constant(complex(r), nvars)


def point_fiber() -> Fiber:
    return Fiber(FiberKind.POINT)


def disc(r, nvars: int = 0) -> Fiber:
    return Fiber(FiberKind.DISC, _as_radius(r, nvars))


def punctured(r, nvars: int = 0) -> Fiber:
    return Fiber(FiberKind.PUNCTURED, _as_radius(r, nvars))


def complement(r, nvars: int = 0) -> Fiber:
    return Fiber(FiberKind.COMPLEMENT, _as_radius(r, nvars))


def annulus(r1, r2, nvars: int = 0) -> Fiber:
    return Fiber(FiberKind.ANNULUS, _as_radius(r1, nvars), _as_radius(r2, nvars))


@dataclass(frozen=True)
class Cell:
    fibers: Tuple[Fiber, ...]

    def __post_init__(self):
        for j, f in enumerate(self.fibers):
            for r in f.radii():
                if r.nvars != j:
                    raise ValueError(f"fiber {j} radius has nvars {r.nvars}")

    # -- structure ----------------------------------------------------
    @property
    def length(self) -> int:
        return len(self.fibers)

    @property
    def dimension(self) -> int:
        return sum(1 for f in self.fibers if f.kind is not FiberKind.POINT)

    def type_word(self) -> str:
        return "".join(f.kind.value for f in self.fibers)

    def is_polydisc(self) -> bool:
        return all(f.kind is FiberKind.DISC for f in self.fibers)

    def extended_with(self, fiber: Fiber) -> "Cell":
        return Cell(self.fibers + (fiber,))

    def base(self, upto: int) -> "Cell":
        return Cell(self.fibers[:upto])

    def max_radius_degree(self) -> int:
        degs = [r.total_degree() for f in self.fibers for r in f.radii()]
        return max(degs, default=0)

    def is_real(self, tol: float = 0.0) -> bool:
        return all(r.is_real(tol) for f in self.fibers for r in f.radii())

    # -- membership ---------------------------------------------------
    def contains(self, pts: np.ndarray, closed_tol: float = 0.0) -> np.ndarray:
        """Boolean mask for points (N, length); closed_tol inflates to the
        closure (and admits the puncture) by that absolute amount."""
        pts = np.asarray(pts, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != self.length:
            raise ValueError("point dimension mismatch")
        n = pts.shape[0]
        ok = np.ones(n, dtype=bool)
        t = closed_tol
        for j, f in enumerate(self.fibers):
            z = pts[:, j]
            prefix = [pts[:, i] for i in range(j)]
            if f.kind is FiberKind.POINT:
                ok &= np.abs(z) <= t
                continue
            if f.kind is FiberKind.ANNULUS:
                a = np.abs(f.r1.evaluate(*prefix))
                b = np.abs(f.r2.evaluate(*prefix))
                ok &= (np.abs(z) > a - t) & (np.abs(z) < b + t)
                continue
            r = np.abs(f.r1.evaluate(*prefix))
            if f.kind is FiberKind.DISC:
                ok &= np.abs(z) < r + t
            elif f.kind is FiberKind.PUNCTURED:
                ok &= (np.abs(z) > -t) & (np.abs(z) < r + t)
                if t == 0.0:
                    ok &= np.abs(z) > 0
            elif f.kind is FiberKind.COMPLEMENT:
                ok &= np.abs(z) > r - t
        return ok

    def fiber_at(self, j: int, base_point: Sequence[complex]) -> Tuple[FiberKind, Tuple[float, ...]]:
        """Concrete fiber over a base point: kind and numeric |radii|."""
        f = self.fibers[j]
        pref = [np.asarray([v], dtype=complex) for v in list(base_point)[:j]]
        radii = tuple(float(abs(r.evaluate(*pref)[0])) for r in f.radii())
        return f.kind, radii


def product(*fibers: Fiber) -> Cell:
    return Cell(tuple(fibers))


def constant_cell(*specs) -> Cell:
    """Build a cell from ('D', r) / ('A', r1, r2) / ('*',) style specs."""
    fibers = []
    for j, s in enumerate(specs):
        tag = s[0]
        if tag == "*":
            fibers.append(point_fiber())
        elif tag == "D":
            fibers.append(disc(s[1], j))
        elif tag == "Do":
            fibers.append(punctured(s[1], j))
        elif tag == "Dc":
            fibers.append(complement(s[1], j))
        elif tag == "A":
            fibers.append(annulus(s[1], s[2], j))
        else:
            raise ValueError(f"unknown fiber spec {s!r}")
    return Cell(tuple(fibers))


# -- prepared classification ------------------------------------------

@dataclass(frozen=True)
class ComponentClass:
    """Classification of one map component f_j in its own variable."""

    label: str  # "translate" | "power" | "prepared" | "section" | "general"
    sign: int = 0
    q: int = 0
    center: Optional[ex.Expr] = None  # g_j, depends on earlier variables only


def classify_component(e: ex.Expr, j: int) -> ComponentClass:
    """Syntactic classification of f_j = ±z_j^q + g(z_<j) after normalization."""
    table = ex.laurent_form(e, j + 1)
    if table is None:
        return ComponentClass("general")
    own = {k: c for k, c in table.items() if k[j] != 0}
    rest = {k[:j]: c for k, c in table.items() if k[j] == 0}
    center_poly = None
    if all(min(k, default=0) >= 0 for k in rest):
        center_poly = ex.from_polymap(PolyMap(j, rest)) if j >= 0 else ex.Const(0.0)
    if not own:
        return ComponentClass("section", center=center_poly)
    if len(own) != 1:
        return ComponentClass("general")
    (k, c), = own.items()
    if any(k[i] != 0 for i in range(j)):
        return ComponentClass("general")
    q = k[j]
    if abs(c - 1.0) <= 1e-14:
        sign = 1
    elif abs(c + 1.0) <= 1e-14:
        sign = -1
    else:
        return ComponentClass("general")
    if not rest:
        label = "translate" if q == 1 else "power"
    else:
        label = "translate" if q == 1 else "prepared"
    return ComponentClass(label, sign=sign, q=q, center=center_poly)


@dataclass(frozen=True)
class MapClass:
    label: str  # "translate" | "power" | "prepared" | "general"
    components: Tuple[ComponentClass, ...]


_PREPARED_LABELS = {"translate", "power", "prepared"}


def combine_labels(labels: Sequence[str]) -> str:
    if any(l == "general" for l in labels):
        return "general"
    if all(l in ("translate", "section") for l in labels):
        return "translate"
    if all(l == "power" for l in labels):
        return "power"
    return "prepared"


def compose_labels(outer: str, inner: str) -> str:
    """Closure rules for composing prepared classes (outer after inner)."""
    if "general" in (outer, inner):
        return "general"
    if outer == "translate" and inner == "translate":
        return "translate"
    if outer == "power" and inner == "power":
        return "power"
    if inner == "power" and outer in _PREPARED_LABELS:
        return "prepared"
    if outer == "translate" and inner in _PREPARED_LABELS:
        return "prepared"
    return "general"


@dataclass(frozen=True)
class CellularMap:
    """Triangular holomorphic map on a cell, one component per coordinate."""

    source: Cell
    components: Tuple[ex.Expr, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.components) != self.source.length:
            raise ValueError("component count != cell length")
        for j, c in enumerate(self.components):
            if ex.max_coord(c) > j:
                raise ValueError(f"component {j} breaks triangularity")

    @property
    def length(self) -> int:
        return len(self.components)

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        cols = [pts[:, j] for j in range(pts.shape[1])]
        out = [ex.evaluate(c, cols) for c in self.components]
        return np.stack(out, axis=-1)

    def classify(self) -> MapClass:
        comps = []
        for j, (c, f) in enumerate(zip(self.components, self.source.fibers)):
            cc = classify_component(c, j)
            if f.kind is FiberKind.POINT and cc.label in ("section", "general"):
                # over a point fiber the component is just its value at z_j = 0
                cc = ComponentClass("section", center=cc.center)
            comps.append(cc)
        labels = [c.label for c in comps]
        return MapClass(combine_labels(labels), tuple(comps))

    def is_prepared(self) -> bool:
        return self.classify().label in _PREPARED_LABELS

    def is_real(self, tol: float = 0.0) -> bool:
        return self.source.is_real(tol) and all(
            ex.is_real_expr(c, tol) for c in self.components
        )

    def derivative_nonvanishing(self, samples: np.ndarray, tol: float = 1e-12) -> bool:
        """Sampled check that d f_j / d z_j != 0 on non-point coordinates."""
        pts = np.asarray(samples, dtype=complex)
        if pts.ndim == 1:
            pts = pts[:, None]
        h = 1e-6
        for j, f in enumerate(self.source.fibers):
            if f.kind is FiberKind.POINT:
                continue
            cols = [pts[:, i] for i in range(pts.shape[1])]
            up = list(cols)
            dn = list(cols)
            up[j] = cols[j] + h
            dn[j] = cols[j] - h
            d = (ex.evaluate(self.components[j], up) - ex.evaluate(self.components[j], dn)) / (2 * h)
            if np.any(np.abs(d) <= tol):
                return False
        return True


def identity_map(cell: Cell) -> CellularMap:
    return CellularMap(cell, tuple(ex.Coord(j) for j in range(cell.length)))


def compose(outer: CellularMap, inner: CellularMap) -> CellularMap:
    """outer ∘ inner; the result lives on inner's source cell."""
    if outer.length != inner.length:
        raise ValueError("length mismatch")
    mapping = {j: inner.components[j] for j in range(inner.length)}
    comps = []
    for j, c in enumerate(outer.components):
        sub = ex.substitute(c, mapping)
        comps.append(ex.normalize(sub, j + 1))
    return CellularMap(inner.source, tuple(comps))


def pullback_radius(r: PolyMap, base_components: Sequence[ex.Expr]) -> Optional[PolyMap]:
    """Radius composed with a polynomial base map, as a PolyMap; None when the
    base components are not polynomial."""
    maps = {}
    for j in range(r.nvars):
        p = ex.to_polymap(base_components[j], j + 1)
        if p is None:
            return None
        maps[j] = p.lift(r.nvars)
    if not maps:
        return r
    return r.substitute(maps)


# -- format / degree descriptors --------------------------------------

@dataclass(frozen=True)
class FormatDegree:
    """Coarse complexity descriptor of a family of cells and maps."""

    length: int
    count: int
    radius_degree: int
    map_degree: int
    node_count: int

    @staticmethod
    def of(cells: Sequence[Cell], maps: Sequence[CellularMap]) -> "FormatDegree":
        length = max((c.length for c in cells), default=0)
        rdeg = max((c.max_radius_degree() for c in cells), default=0)
        mdeg = 0
        nodes = 0
        for m in maps:
            for j, comp in enumerate(m.components):
                t = ex.laurent_form(comp, j + 1)
                if t:
                    mdeg = max(mdeg, max(sum(abs(k) for k in e) for e in t))
                nodes = max(nodes, ex.node_count(comp))
        return FormatDegree(length, len(cells), rdeg, mdeg, nodes)
