"""Extensions of cells and the two extension parameterizations.

The Euclidean parameter delta in (0, 1) scales radii directly:
D(r) -> D(r/delta), D∘(r) -> D∘(r/delta), D⊂(r) -> D⊂(delta r),
A(r1, r2) -> A(delta r1, r2/delta); smaller delta means a larger extension.
The hyperbolic parameter rho is normalized so that the boundary components
of the cell have hyperbolic length at most rho inside the extension
(curvature -4): for discs rho = 2 pi delta / (1 - delta^2), for the radial
kinds rho = pi^2 / (2 |log delta|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .cells import Cell, Fiber, FiberKind
from .polynomials import PolyMap, univariate_roots
from .sampling import sample_cell

ADMISSIBILITY_SAMPLES = 8192
ADMISSIBILITY_MARGIN = 1e-9


class AdmissibilityError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# -- parameter conversions --------------------------------------------

def delta_to_rho(kind: FiberKind, delta: float) -> float:
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if kind is FiberKind.POINT:
        return math.inf
    if kind is FiberKind.DISC:
        return 2.0 * math.pi * delta / (1.0 - delta * delta)
    return math.pi * math.pi / (2.0 * abs(math.log(delta)))


def rho_to_delta(kind: FiberKind, rho: float) -> float:
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    if kind is FiberKind.POINT:
        return 1.0
    if kind is FiberKind.DISC:
        return (math.sqrt(math.pi**2 + rho**2) - math.pi) / rho
    return math.exp(-(math.pi**2) / (2.0 * rho))


def deltas_for(cell: Cell, rho: float) -> Tuple[float, ...]:
    """Per-fiber Euclidean deltas realizing a common hyperbolic rho."""
    return tuple(
        1.0 if f.kind is FiberKind.POINT else rho_to_delta(f.kind, rho)
        for f in cell.fibers
    )


def ball_extension_radius(r: float, delta: float) -> float:
    """Euclidean ball B(z, r) -> B(z, r/delta); delta >= 1 shrinks."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return r / delta


# -- cell extension ---------------------------------------------------

def _extend_fiber(f: Fiber, delta: float) -> Fiber:
    if f.kind is FiberKind.POINT:
        return f
    if not 0.0 < delta <= 1.0:
        raise ValueError("cell extension needs delta in (0, 1]")
    if f.kind is FiberKind.DISC or f.kind is FiberKind.PUNCTURED:
        return Fiber(f.kind, f.r1 * (1.0 / delta))
    if f.kind is FiberKind.COMPLEMENT:
        return Fiber(f.kind, f.r1 * delta)
    return Fiber(f.kind, f.r1 * delta, f.r2 * (1.0 / delta))


def extend(cell: Cell, delta, check: bool = True,
           samples: int = ADMISSIBILITY_SAMPLES,
           margin: float = ADMISSIBILITY_MARGIN) -> Cell:
    """The delta-extension; delta is a scalar or one value per fiber.

    Admissibility (radii nonvanishing, annulus ordering preserved over the
    extended base) is verified on a low-discrepancy sample; failures raise
    AdmissibilityError with a witness base point.
    """
    if np.isscalar(delta):
        deltas = (float(delta),) * cell.length
    else:
        deltas = tuple(float(d) for d in delta)
        if len(deltas) != cell.length:
            raise ValueError("one delta per fiber required")
    fibers = tuple(_extend_fiber(f, d) for f, d in zip(cell.fibers, deltas))
    out = Cell(fibers)
    if check:
        _check_admissible(out, samples, margin)
    return out


def extend_hyperbolic(cell: Cell, rho: float, check: bool = True) -> Cell:
    return extend(cell, deltas_for(cell, rho), check=check)


def _check_admissible(cell: Cell, samples: int, margin: float) -> None:
    for j, f in enumerate(cell.fibers):
        radii = f.radii()
        if not radii or all(r.is_constant() for r in radii):
            if f.kind is FiberKind.ANNULUS and all(r.is_constant() for r in radii):
                a = abs(f.r1.constant_value())
                b = abs(f.r2.constant_value())
                if not a + margin < b:
                    raise AdmissibilityError(
                        f"annulus ordering violated at fiber {j}: {a} !< {b}"
                    )
            if radii and all(r.is_constant() for r in radii):
                for r in radii:
                    if abs(r.constant_value()) <= margin:
                        raise AdmissibilityError(f"radius vanishes at fiber {j}")
            continue
        base = cell.base(j)
        for r in radii:
            if r.nvars == 1 and r.total_degree() >= 1:
                roots = univariate_roots(r).roots
                hit = base.contains(roots[:, None], closed_tol=margin)
                if np.any(hit):
                    raise AdmissibilityError(
                        f"radius vanishes over extended base at fiber {j}",
                        witness=roots[hit][0:1],
                    )
        pts = sample_cell(base, samples)
        cols = [pts[:, i] for i in range(j)]
        vals = [np.abs(r.evaluate(*cols)) for r in radii]
        for v in vals:
            k = int(np.argmin(v))
            if v[k] <= margin:
                raise AdmissibilityError(
                    f"radius vanishes over extended base at fiber {j}",
                    witness=pts[k],
                )
        if f.kind is FiberKind.ANNULUS:
            gap = vals[1] - vals[0]
            k = int(np.argmin(gap))
            if gap[k] <= margin:
                raise AdmissibilityError(
                    f"annulus ordering violated over extended base at fiber {j}",
                    witness=pts[k],
                )


# -- Weierstrass predicate --------------------------------------------

@dataclass(frozen=True)
class ShellReport:
    ok: bool
    margin: float
    witness: Optional[np.ndarray]


def shell_samples(kind: FiberKind, radii, gamma: float,
                  n_angle: int = 64, n_rad: int = 32) -> np.ndarray:
    """Stratified samples of F_ext \\ F where the given fiber is F^gamma."""
    th = np.exp(2j * np.pi * (np.arange(n_angle) + 0.5) / n_angle)
    out = []
    if kind is FiberKind.DISC or kind is FiberKind.PUNCTURED:
        t = radii[0]
        rr = t * (gamma + (1 - gamma) * (np.arange(n_rad) + 0.5) / n_rad)
        out.append((rr[:, None] * th[None, :]).ravel())
    elif kind is FiberKind.COMPLEMENT:
        t = radii[0]
        rr = t / (gamma + (1 - gamma) * (np.arange(n_rad) + 0.5) / n_rad)
        out.append((rr[:, None] * th[None, :]).ravel())
    elif kind is FiberKind.ANNULUS:
        a, b = radii
        m = max(n_rad // 2, 1)
        rr_in = a / (gamma + (1 - gamma) * (np.arange(m) + 0.5) / m)
        rr_out = b * (gamma + (1 - gamma) * (np.arange(m) + 0.5) / m)
        out.append((rr_in[:, None] * th[None, :]).ravel())
        out.append((rr_out[:, None] * th[None, :]).ravel())
    else:
        raise ValueError("point fiber has no shell")
    return np.concatenate(out)


def is_weierstrass(cell: Cell, gamma: float, hypersurfaces: Sequence[PolyMap],
                   n_base: int = 256, n_angle: int = 64, n_rad: int = 32,
                   tol: float = 0.0) -> ShellReport:
    """Check that the last fiber's gamma-gap shell avoids every hypersurface.

    The cell is read as C ⊙ F^gamma: with last fiber D(t) the shell is
    {gamma t < |w| < t}, with A(a, b) both boundary bands.  Verification is
    sampled (n_base base points, n_angle x n_rad per shell band).
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    L = cell.length
    f = cell.fibers[-1]
    base = cell.base(L - 1)
    if L == 1:
        bpts = np.zeros((1, 0), dtype=complex)
    else:
        bpts = sample_cell(base, n_base)
    worst = math.inf
    witness = None
    for bp in bpts:
        pref = [np.asarray([v]) for v in bp]
        radii = [float(abs(r.evaluate(*pref)[0])) for r in f.radii()]
        ws = shell_samples(f.kind, radii, gamma, n_angle, n_rad)
        cols = [np.full(len(ws), v, dtype=complex) for v in bp] + [ws]
        for Z in hypersurfaces:
            vals = np.abs(Z.evaluate(*cols))
            k = int(np.argmin(vals))
            if vals[k] < worst:
                worst = float(vals[k])
                witness = np.append(bp, ws[k])
    ok = worst > tol
    return ShellReport(ok, worst, witness)
