"""Search for a polydisc, after a unitary rotation, whose last-coordinate
shell avoids a given hypersurface.

Given a ball B(c, r) and a polynomial hypersurface Z = {P = 0}, the search
looks for a unitary U and radii (r_b, ..., r_b, r_l) with

    r_b, r_l >= r * (1 - gamma)      (inner-ball inclusion)
    (l-1) * r_b^2 + r_l^2 <= r^2     (polydisc inside the ball)

such that for points x = c + U y with y in the polydisc, the univariate
restriction w = y_l of P has no roots in the shell gamma*r_l < |w| < r_l.
Verification is sampled by default; an exact mode certifies the shell via
root-distance lower bounds and a Lipschitz bound in the base variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .polynomials import PolyMap, batched_roots, univariate_roots

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class UnitaryMap:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if err > UNITARITY_TOL:
            raise ValueError(f"matrix not unitary (defect {err:.2e})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def identity_unitary(l: int) -> UnitaryMap:
    return UnitaryMap(np.eye(l, dtype=complex))


def haar_unitary(l: int, rng: np.random.Generator) -> UnitaryMap:
    g = rng.standard_normal((l, l)) + 1j * rng.standard_normal((l, l))
    q, r = np.linalg.qr(g)
    ph = np.diag(r).copy()
    ph = ph / np.abs(ph)
    return UnitaryMap(q * ph[None, :])


@dataclass
class WeierstrassResult:
    unitary: UnitaryMap
    center: np.ndarray
    radii: Tuple[float, ...]
    gap: float
    margin: float
    attempts_used: int
    base_samples: int
    meta: dict = field(default_factory=dict)

    @property
    def base_radius(self) -> float:
        return self.radii[0]

    @property
    def last_radius(self) -> float:
        return self.radii[-1]


class SearchFailed(RuntimeError):
    def __init__(self, message: str, best_margin: float):
        super().__init__(message)
        self.best_margin = best_margin


def gamma_floor(degree: int, l: int = 2, c: float = 4.0, k: float = 2.0) -> float:
    """Smallest gap the default schedule will try, 1 - 1/(c * d^k)."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return 1.0 - 1.0 / (c * degree ** k)


def default_schedule(degree: int, l: int = 2) -> List[float]:
    vals = {gamma_floor(degree, l), 0.95, 0.9, 0.8, 0.7, 0.6, 0.5}
    return sorted(vals, reverse=True)


def rotated_polynomial(P: PolyMap, center: Sequence[complex], U: UnitaryMap) -> PolyMap:
    """P(center + U y) as an exact polynomial in y."""
    l = P.nvars
    assignments = {}
    for i in range(l):
        acc = PolyMap.constant(center[i], l)
        for j in range(l):
            cij = U.matrix[i, j]
            if cij != 0:
                acc = acc + PolyMap.coordinate(j, l) * PolyMap.constant(cij, l)
        assignments[i] = acc
    return P.substitute(assignments)


def _base_samples(l: int, r_b: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Base points, half area-uniform and half near the boundary circle,
    where root-modulus extremes concentrate."""
    m = n // 2
    u = rng.random((n - m, l - 1))
    th = rng.random((n - m, l - 1))
    interior = np.sqrt(u) * np.exp(2j * np.pi * th)
    ang = (np.arange(m)[:, None] + rng.random((1, l - 1))) / m
    boundary = np.exp(2j * np.pi * ang)
    return r_b * np.concatenate([interior, boundary], axis=0)


def _shell_margin(moduli: np.ndarray, inner: float, outer: float) -> float:
    """Positive distance to the shell, negative depth inside it."""
    if moduli.size == 0:
        return outer - inner
    inside = (moduli > inner) & (moduli < outer)
    if np.any(inside):
        m = moduli[inside]
        return -float(np.min(np.minimum(m - inner, outer - m)))
    return float(np.min(np.maximum(inner - moduli, moduli - outer)))


def shell_root_margin(Q: PolyMap, r_b: float, r_l: float, gamma: float,
                      n_base: int, rng: np.random.Generator) -> float:
    """Worst-case shell margin over sampled base points.

    Q is the rotated polynomial in polydisc coordinates; its last-variable
    roots are computed for each sampled base point.
    """
    l = Q.nvars
    coeffs = Q.coeffs_in_last()
    if len(coeffs) == 1:
        # no dependence on the last variable: no roots in any fiber
        return r_l * (1.0 - gamma)
    if l == 1:
        roots = univariate_roots(Q.univariate_coeffs()).roots
        return _shell_margin(np.abs(np.asarray(roots)), gamma * r_l, r_l)
    base = _base_samples(l, r_b, n_base, rng)
    cols = [base[:, i] for i in range(l - 1)]
    rows = np.stack(
        [np.broadcast_to(c.evaluate(*cols), (n_base,)) for c in coeffs], axis=1
    )
    roots = batched_roots(rows)
    mod = np.abs(roots)
    mod = np.where(mod > 1e15, np.inf, mod)
    inner, outer = gamma * r_l, r_l
    inside = (mod > inner) & (mod < outer)
    if np.any(inside):
        m = mod[inside]
        return -float(np.min(np.minimum(m - inner, outer - m)))
    dist = np.maximum(inner - mod, mod - outer)
    return float(np.min(dist))


def _radii_at(t: float, r: float, gamma: float, l: int) -> Optional[Tuple[float, float]]:
    """Feasible (r_b, r_l) along the sphere constraint, t in [0, 1]."""
    lo = r * (1.0 - gamma)
    hi = math.sqrt(max(r * r - (l - 1) * lo * lo, 0.0))
    if hi < lo:
        return None
    r_l = lo + (hi - lo) * t
    r_b = math.sqrt((r * r - r_l * r_l) / (l - 1))
    if r_b < lo - 1e-15:
        return None
    return r_b, r_l


def _best_radii(Q: PolyMap, r: float, gamma: float, l: int, n_base: int,
                rng: np.random.Generator, coarse: int = 9,
                refine_steps: int = 10) -> Optional[Tuple[float, float, float]]:
    """Maximize the sampled shell margin over the last-radius parameter."""
    def margin_at(t: float) -> Optional[Tuple[float, float, float]]:
        rr = _radii_at(t, r, gamma, l)
        if rr is None:
            return None
        r_b, r_l = rr
        m = shell_root_margin(Q, r_b, r_l, gamma, n_base, rng)
        return (m, r_b, r_l)

    ts = list(np.linspace(1.0, 0.0, coarse))
    evals = [(t, margin_at(t)) for t in ts]
    evals = [(t, e) for t, e in evals if e is not None]
    if not evals:
        return None
    t_star, best = max(evals, key=lambda p: p[1][0])
    step = 1.0 / (coarse - 1) if coarse > 1 else 0.5
    a, b = max(0.0, t_star - step), min(1.0, t_star + step)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1, f2 = margin_at(x1), margin_at(x2)
    for _ in range(refine_steps):
        if f1 is None or f2 is None:
            break
        if f1[0] >= f2[0]:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = margin_at(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = margin_at(x2)
    for f in (f1, f2):
        if f is not None and f[0] > best[0]:
            best = f
    return best


def find_weierstrass(center: Sequence[complex], radius: float, Z: PolyMap,
                     attempts: int = 40, gamma_schedule: Optional[Sequence[float]] = None,
                     n_base: int = 512, seed: int = 0,
                     margin_frac: float = 0.05) -> WeierstrassResult:
    """First rotation/polydisc/gap combination whose shell is root-free.

    Gaps are tried largest first; for each gap, the identity rotation is
    tried before Haar-random ones, and the last radius is optimized by a
    golden-section scan of the sampled margin.  A result is accepted when
    the nearest root modulus clears the shell by margin_frac times the
    shell thickness.
    """
    l = Z.nvars
    center = np.asarray(list(center), dtype=complex)
    if radius <= 0:
        raise ValueError("ball radius must be positive")
    if all(c == 0 for c in Z.terms.values()):
        raise ValueError("hypersurface polynomial is zero")
    d = max(Z.total_degree(), 1)
    schedule = list(gamma_schedule) if gamma_schedule is not None else default_schedule(d, l)
    schedule = sorted(schedule, reverse=True)
    rng = np.random.default_rng(seed)
    best = -math.inf
    for gamma in schedule:
        for a in range(attempts):
            U = identity_unitary(l) if a == 0 else haar_unitary(l, rng)
            Q = rotated_polynomial(Z, center, U)
            found = _best_radii(Q, radius, gamma, l, n_base, rng)
            if found is None:
                continue
            m, r_b, r_l = found
            best = max(best, m)
            if m > margin_frac * (1.0 - gamma) * r_l:
                # dense confirmation pass before accepting
                m2 = shell_root_margin(Q, r_b, r_l, gamma, 8 * n_base, rng)
                if m2 <= 0.5 * margin_frac * (1.0 - gamma) * r_l:
                    continue
                radii = (r_b,) * (l - 1) + (r_l,)
                return WeierstrassResult(
                    U, center, radii, gamma, min(m, m2), a + 1, n_base,
                    meta={"degree": d, "seed": seed},
                )
    raise SearchFailed(f"no gap found (best margin {best:.3e})", best)


def verify_sampled(res: WeierstrassResult, Z: PolyMap, n_base: int = 10000,
                   seed: int = 1) -> float:
    """Re-verify a result at fresh samples; returns the margin."""
    Q = rotated_polynomial(Z, res.center, res.unitary)
    rng = np.random.default_rng(seed)
    return shell_root_margin(Q, res.base_radius, res.last_radius, res.gap,
                             n_base, rng)


def _coeff_norm(p: PolyMap, radius: float) -> float:
    return sum(abs(c) * radius ** sum(e) for e, c in p.terms.items())


def verify_exact(res: WeierstrassResult, Z: PolyMap, max_grid: int = 600) -> bool:
    """Certify shell emptiness for small degrees.

    On each base grid point, |Q(z, .)| on the shell is bounded below by the
    leading coefficient times the product of root-modulus distances to the
    shell; a Lipschitz bound on the base dependence extends the bound to the
    whole base disc.  The grid is refined until the bound dominates the
    drift between grid points or the budget runs out.
    """
    Q = rotated_polynomial(Z, res.center, res.unitary)
    l = Q.nvars
    r_b, r_l = res.base_radius, res.last_radius
    inner, outer = res.gap * r_l, r_l
    coeffs = Q.coeffs_in_last()
    if len(coeffs) == 1:
        return any(abs(c) > 0 for c in Q.terms.values())
    if l == 1:
        roots = np.abs(np.asarray(univariate_roots(Q.univariate_coeffs()).roots))
        return bool(np.all((roots <= inner) | (roots >= outer)))
    if l != 2:
        raise NotImplementedError("exact mode certifies two variables")
    lip = 0.0
    for k, c in enumerate(coeffs):
        lip += _coeff_norm(c.derivative(0), r_b) * outer ** k
    cmax_all = max(_coeff_norm(c, r_b) for c in coeffs)

    def shell_bound(z: np.ndarray) -> np.ndarray:
        """Lower bounds of |Q(z, .)| on the shell; -inf flags a shell root."""
        rows = np.stack([np.broadcast_to(c.evaluate(z), z.shape) for c in coeffs],
                        axis=1)
        deg = rows.shape[1] - 1
        out = np.empty(z.shape)
        nondeg = np.max(np.abs(rows[:, 1:]), axis=1) > 1e-14 * cmax_all
        out[~nondeg] = np.abs(rows[~nondeg, 0])
        if np.any(nondeg):
            roots = batched_roots(rows[nondeg])
            mod = np.abs(roots)
            finite = mod < 1e15
            dist = np.where(finite,
                            np.minimum(np.abs(mod - inner), np.abs(mod - outer)),
                            1.0)
            lead = rows[nondeg, deg].copy()
            small_lead = np.abs(lead) <= 1e-14 * cmax_all
            for i in np.where(small_lead)[0]:
                row = rows[nondeg][i]
                lead_i = deg
                while lead_i > 0 and abs(row[lead_i]) <= 1e-14 * cmax_all:
                    lead_i -= 1
                lead[i] = row[lead_i]
            b = np.abs(lead) * np.prod(dist, axis=1)
            hit = np.any(finite & (mod > inner) & (mod < outer), axis=1)
            b[hit] = -np.inf
            out[nondeg] = b
        return out

    # adaptive quadtree over the base disc: a square is certified when the
    # shell bound at its center exceeds the Lipschitz drift to its corners
    centers = np.array([0.0 + 0.0j])
    half = np.array([r_b])
    for _ in range(14):
        keep = np.abs(centers) - half * math.sqrt(2.0) <= r_b
        centers, half = centers[keep], half[keep]
        if centers.size == 0:
            return True
        if centers.size > 400000:
            return False
        b = shell_bound(centers)
        in_disc = np.abs(centers) <= r_b
        if np.any(in_disc & np.isneginf(b)):
            return False
        todo = b <= lip * half * math.sqrt(2.0)
        if not np.any(todo):
            return True
        c, h = centers[todo], half[todo]
        q = h / 2.0
        centers = np.concatenate([c + q * (sx + 1j * sy)
                                  for sx in (-1, 1) for sy in (-1, 1)])
        half = np.repeat(q, 4)
    return False
