"""Expression DAGs for cellular map components.

Node types: coordinate, constant, sum, product, integer power (exponent in
Z \\ {0} is allowed on the *prepared* slot; 0 is rejected), and composition.
Normalization folds constants, collects powers and flattens nested
sums/products; when an expression is Laurent-polynomial it is canonicalized
into a sparse exponent table (negative exponents permitted only on single
coordinates), which is what the syntactic classifiers operate on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from .polynomials import PolyMap

Exponent = Tuple[int, ...]


class Expr:
    """Base class for expression nodes."""

    def __add__(self, other):
        return Sum((self, _coerce(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return Prod((self, _coerce(other)))

    __rmul__ = __mul__

    def __sub__(self, other):
        return Sum((self, Prod((Const(-1.0), _coerce(other)))))

    def __neg__(self):
        return Prod((Const(-1.0), self))

    def __pow__(self, k: int):
        return Power(self, k)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, complex)):
        return Const(complex(x))
    raise TypeError(f"cannot coerce {x!r} to Expr")


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Coord(Expr):
    index: int


@dataclass(frozen=True)
class Sum(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class Prod(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if self.exponent == 0:
            raise ValueError("power exponent must be a nonzero integer")


@dataclass(frozen=True)
class Compose(Expr):
    """outer evaluated with its coordinates replaced by inner expressions."""

    outer: Expr
    inner: Tuple[Expr, ...]


def from_polymap(p: PolyMap, offset: int = 0) -> Expr:
    parts = []
    for e, c in sorted(p.terms.items()):
        factors: list = [Const(c)]
        for j, k in enumerate(e):
            if k:
                factors.append(Power(Coord(offset + j), k) if k != 1 else Coord(offset + j))
        parts.append(factors[0] if len(factors) == 1 else Prod(tuple(factors)))
    if not parts:
        return Const(0.0)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def evaluate(expr: Expr, coords) -> np.ndarray:
    """Evaluate at coordinate arrays (one per variable index)."""
    coords = [np.asarray(c, dtype=complex) for c in coords]
    return _eval(expr, coords)


def _eval(expr: Expr, coords) -> np.ndarray:
    if isinstance(expr, Const):
        shape = np.broadcast_shapes(*(c.shape for c in coords)) if coords else ()
        return np.full(shape, expr.value, dtype=complex)
    if isinstance(expr, Coord):
        return coords[expr.index]
    if isinstance(expr, Sum):
        acc = _eval(expr.parts[0], coords)
        for p in expr.parts[1:]:
            acc = acc + _eval(p, coords)
        return acc
    if isinstance(expr, Prod):
        acc = _eval(expr.parts[0], coords)
        for p in expr.parts[1:]:
            acc = acc * _eval(p, coords)
        return acc
    if isinstance(expr, Power):
        base = _eval(expr.base, coords)
        if expr.exponent < 0:
            return base ** float(expr.exponent)
        return base ** expr.exponent
    if isinstance(expr, Compose):
        inner_vals = [_eval(e, coords) for e in expr.inner]
        return _eval(expr.outer, inner_vals)
    raise TypeError(f"unknown node {expr!r}")


def substitute(expr: Expr, mapping: Mapping[int, Expr]) -> Expr:
    """Structural substitution of coordinates by expressions."""
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Coord):
        return mapping.get(expr.index, expr)
    if isinstance(expr, Sum):
        return Sum(tuple(substitute(p, mapping) for p in expr.parts))
    if isinstance(expr, Prod):
        return Prod(tuple(substitute(p, mapping) for p in expr.parts))
    if isinstance(expr, Power):
        return Power(substitute(expr.base, mapping), expr.exponent)
    if isinstance(expr, Compose):
        return Compose(expr.outer, tuple(substitute(e, mapping) for e in expr.inner))
    raise TypeError(f"unknown node {expr!r}")


# -- Laurent canonical form -------------------------------------------

class NotLaurent(Exception):
    """Raised internally when an expression has no Laurent expansion."""


def _laurent(expr: Expr, nvars: int) -> Dict[Exponent, complex]:
    zero = (0,) * nvars
    if isinstance(expr, Const):
        return {zero: expr.value} if expr.value != 0 else {}
    if isinstance(expr, Coord):
        if expr.index >= nvars:
            raise NotLaurent
        e = list(zero)
        e[expr.index] = 1
        return {tuple(e): 1.0 + 0.0j}
    if isinstance(expr, Sum):
        out: Dict[Exponent, complex] = {}
        for p in expr.parts:
            for e, c in _laurent(p, nvars).items():
                out[e] = out.get(e, 0.0) + c
        return {e: c for e, c in out.items() if c != 0}
    if isinstance(expr, Prod):
        out = {zero: 1.0 + 0.0j}
        for p in expr.parts:
            t = _laurent(p, nvars)
            nxt: Dict[Exponent, complex] = {}
            for e1, c1 in out.items():
                for e2, c2 in t.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    nxt[e] = nxt.get(e, 0.0) + c1 * c2
            out = {e: c for e, c in nxt.items() if c != 0}
        return out
    if isinstance(expr, Power):
        base = _laurent(expr.base, nvars)
        k = expr.exponent
        if k > 0:
            out = {zero: 1.0 + 0.0j}
            b = dict(base)
            kk = k
            while kk:
                if kk & 1:
                    out = _lmul(out, b)
                b = _lmul(b, b)
                kk >>= 1
            return out
        if len(base) != 1:
            raise NotLaurent  # negative power of a non-monomial
        (e, c), = base.items()
        return {tuple(k * a for a in e): c ** k}
    if isinstance(expr, Compose):
        inner = [_laurent(e, nvars) for e in expr.inner]
        # expand outer over the inner Laurent maps; negative outer powers of
        # non-monomial inner parts abort
        return _laurent(_inline(expr.outer, inner, nvars), nvars)
    raise TypeError(f"unknown node {expr!r}")


def _lmul(a, b):
    out: Dict[Exponent, complex] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0.0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _inline(outer: Expr, inner_tables, nvars: int) -> Expr:
    """Rebuild outer with coordinates replaced by Laurent tables as Exprs."""

    def table_expr(t) -> Expr:
        parts = []
        for e, c in sorted(t.items()):
            fs: list = [Const(c)]
            for j, k in enumerate(e):
                if k:
                    fs.append(Power(Coord(j), k) if k != 1 else Coord(j))
            parts.append(fs[0] if len(fs) == 1 else Prod(tuple(fs)))
        if not parts:
            return Const(0.0)
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    mapping = {j: table_expr(t) for j, t in enumerate(inner_tables)}
    return substitute(outer, mapping)


def laurent_form(expr: Expr, nvars: int) -> Optional[Dict[Exponent, complex]]:
    """Canonical sparse Laurent table, or None when no expansion exists."""
    try:
        return _laurent(expr, nvars)
    except NotLaurent:
        return None


def normalize(expr: Expr, nvars: int) -> Expr:
    """Constant folding / power collection via the Laurent canonical form.

    Non-Laurent expressions are returned structurally unchanged.
    """
    table = laurent_form(expr, nvars)
    if table is None:
        return expr
    parts = []
    for e, c in sorted(table.items()):
        fs: list = [] if c == 1 and any(e) else [Const(c)]
        for j, k in enumerate(e):
            if k:
                fs.append(Power(Coord(j), k) if k != 1 else Coord(j))
        if not fs:
            fs = [Const(c)]
        parts.append(fs[0] if len(fs) == 1 else Prod(tuple(fs)))
    if not parts:
        return Const(0.0)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def to_polymap(expr: Expr, nvars: int) -> Optional[PolyMap]:
    table = laurent_form(expr, nvars)
    if table is None or any(min(e) < 0 for e in table):
        return None
    return PolyMap(nvars, table)


def depends_on(expr: Expr, j: int) -> bool:
    if isinstance(expr, Const):
        return False
    if isinstance(expr, Coord):
        return expr.index == j
    if isinstance(expr, (Sum, Prod)):
        return any(depends_on(p, j) for p in expr.parts)
    if isinstance(expr, Power):
        return depends_on(expr.base, j)
    if isinstance(expr, Compose):
        return any(depends_on(e, j) for e in expr.inner)
    raise TypeError(f"unknown node {expr!r}")


def max_coord(expr: Expr) -> int:
    """Largest coordinate index appearing, or -1."""
    if isinstance(expr, Const):
        return -1
    if isinstance(expr, Coord):
        return expr.index
    if isinstance(expr, (Sum, Prod)):
        return max((max_coord(p) for p in expr.parts), default=-1)
    if isinstance(expr, Power):
        return max_coord(expr.base)
    if isinstance(expr, Compose):
        return max((max_coord(e) for e in expr.inner), default=-1)
    raise TypeError(f"unknown node {expr!r}")


def node_count(expr: Expr) -> int:
    if isinstance(expr, (Const, Coord)):
        return 1
    if isinstance(expr, (Sum, Prod)):
        return 1 + sum(node_count(p) for p in expr.parts)
    if isinstance(expr, Power):
        return 1 + node_count(expr.base)
    if isinstance(expr, Compose):
        return 1 + node_count(expr.outer) + sum(node_count(e) for e in expr.inner)
    raise TypeError(f"unknown node {expr!r}")


def is_real_expr(expr: Expr, tol: float = 0.0) -> bool:
    """All constants real (to tol): the map commutes with conjugation."""
    if isinstance(expr, Const):
        return abs(expr.value.imag) <= tol
    if isinstance(expr, Coord):
        return True
    if isinstance(expr, (Sum, Prod)):
        return all(is_real_expr(p, tol) for p in expr.parts)
    if isinstance(expr, Power):
        return is_real_expr(expr.base, tol)
    if isinstance(expr, Compose):
        return is_real_expr(expr.outer, tol) and all(is_real_expr(e, tol) for e in expr.inner)
    raise TypeError(f"unknown node {expr!r}")
