"""Sparse multivariate polynomials over C and univariate root finding.

PolyMap is the coefficient-level workhorse: radii of cells, hypersurface
equations and fitted section centers are all PolyMaps.  Exponent keys are
tuples of nonnegative ints of length nvars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

Exponent = Tuple[int, ...]

_ZERO_TOL = 0.0


def _clean(terms: Mapping[Exponent, complex]) -> Dict[Exponent, complex]:
    return {e: complex(c) for e, c in terms.items() if c != 0}


@dataclass(frozen=True)
class PolyMap:
    """Sparse polynomial map C^nvars -> C."""

    nvars: int
    terms: Mapping[Exponent, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", _clean(self.terms))
        for e in self.terms:
            if len(e) != self.nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for nvars={self.nvars}")

    # -- constructors -------------------------------------------------
    @staticmethod
    def constant(c: complex, nvars: int = 0) -> "PolyMap":
        return PolyMap(nvars, {(0,) * nvars: complex(c)} if c != 0 else {})

    @staticmethod
    def coordinate(j: int, nvars: int) -> "PolyMap":
        e = [0] * nvars
        e[j] = 1
        return PolyMap(nvars, {tuple(e): 1.0 + 0.0j})

    @staticmethod
    def from_univariate_coeffs(coeffs: Sequence[complex]) -> "PolyMap":
        """coeffs[k] is the coefficient of z^k."""
        return PolyMap(1, {(k,): c for k, c in enumerate(coeffs) if c != 0})

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self.terms)

    def constant_value(self) -> complex:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, 0.0 + 0.0j)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, j: int) -> int:
        if not self.terms:
            return -1
        return max(e[j] for e in self.terms)

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def conjugate_coeffs(self) -> "PolyMap":
        return PolyMap(self.nvars, {e: c.conjugate() for e, c in self.terms.items()})

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def canonical_key(self) -> tuple:
        """Scale-normalized hashable key; proportional polynomials collide."""
        if not self.terms:
            return (self.nvars,)
        lead = min(self.terms)  # lexicographically smallest exponent
        s = self.terms[lead]
        items = sorted((e, self.terms[e] / s) for e in self.terms)
        return (self.nvars, tuple((e, round(c.real, 12), round(c.imag, 12)) for e, c in items))

    # -- arithmetic ---------------------------------------------------
    def _require_same(self, other: "PolyMap"):
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = PolyMap.constant(other, self.nvars)
        self._require_same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0.0) + c
        return PolyMap(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyMap(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = PolyMap.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return PolyMap(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._require_same(other)
        out: Dict[Exponent, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return PolyMap(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a PolyMap")
        out = PolyMap.constant(1.0, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def lift(self, nvars: int, offset: int = 0) -> "PolyMap":
        """Reinterpret in a larger variable list, shifting indices by offset."""
        if offset + self.nvars > nvars:
            raise ValueError("lift does not fit")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for j, k in enumerate(e):
                ne[offset + j] = k
            out[tuple(ne)] = c
        return PolyMap(nvars, out)

    def derivative(self, j: int) -> "PolyMap":
        out: Dict[Exponent, complex] = {}
        for e, c in self.terms.items():
            if e[j] == 0:
                continue
            ne = list(e)
            ne[j] -= 1
            ne = tuple(ne)
            out[ne] = out.get(ne, 0.0) + c * e[j]
        return PolyMap(self.nvars, out)

    # -- evaluation ---------------------------------------------------
    def evaluate(self, *coords) -> np.ndarray:
        """Evaluate at coordinate arrays (broadcast together)."""
        if len(coords) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinate arrays")
        coords = [np.asarray(c, dtype=complex) for c in coords]
        shape = np.broadcast_shapes(*(c.shape for c in coords)) if coords else ()
        acc = np.zeros(shape, dtype=complex)
        pow_cache = [dict() for _ in coords]

        def cpow(j, k):
            d = pow_cache[j]
            if k not in d:
                d[k] = coords[j] ** k
            return d[k]

        for e, c in self.terms.items():
            term = np.full(shape, c, dtype=complex)
            for j, k in enumerate(e):
                if k:
                    term = term * cpow(j, k)
            acc += term
        return acc

    def __call__(self, *coords):
        return self.evaluate(*coords)

    # -- structure ----------------------------------------------------
    def univariate_coeffs(self) -> np.ndarray:
        if self.nvars != 1:
            raise ValueError("not univariate")
        d = self.degree_in(0)
        out = np.zeros(max(d + 1, 1), dtype=complex)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def coeffs_in_last(self) -> list:
        """View as polynomial in the last variable with PolyMap coefficients."""
        if self.nvars < 1:
            raise ValueError("needs at least one variable")
        d = max(self.degree_in(self.nvars - 1), 0)
        buckets: list = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            buckets[e[-1]][e[:-1]] = c
        return [PolyMap(self.nvars - 1, b) for b in buckets]

    def substitute(self, assignments: Mapping[int, "PolyMap"]) -> "PolyMap":
        """Substitute variables by PolyMaps (all in the same new variable set)."""
        if not assignments:
            return self
        new_nvars = next(iter(assignments.values())).nvars
        subs = {}
        for j in range(self.nvars):
            if j in assignments:
                p = assignments[j]
                if p.nvars != new_nvars:
                    raise ValueError("assignment nvars mismatch")
                subs[j] = p
            else:
                if j >= new_nvars:
                    raise ValueError(f"variable {j} unassigned and out of range")
                subs[j] = PolyMap.coordinate(j, new_nvars)
        acc = PolyMap.constant(0.0, new_nvars)
        for e, c in self.terms.items():
            term = PolyMap.constant(c, new_nvars)
            for j, k in enumerate(e):
                if k:
                    term = term * (subs[j] ** k)
            acc = acc + term
        return acc


# -- elementary symmetric functions -----------------------------------

def elementary_symmetric(values: Sequence[complex]) -> np.ndarray:
    """e_0..e_n of the given values (e_0 = 1)."""
    vals = np.asarray(values, dtype=complex)
    e = np.zeros(len(vals) + 1, dtype=complex)
    e[0] = 1.0
    for k, v in enumerate(vals):
        e[1 : k + 2] = e[1 : k + 2] + v * e[0 : k + 1].copy()
    return e


# -- univariate roots: Aberth-Ehrlich ---------------------------------

def cauchy_bound(coeffs: np.ndarray) -> float:
    """Upper bound for root moduli of sum coeffs[k] z^k."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    if n < 1 or c[-1] == 0:
        raise ValueError("degenerate polynomial")
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities, as produced by the clustering pass."""

    roots: np.ndarray
    multiplicities: np.ndarray
    tol: float

    def total(self) -> int:
        return int(np.sum(self.multiplicities))

    def min_separation(self) -> float:
        r = self.roots
        if len(r) < 2:
            return np.inf
        d = np.abs(r[:, None] - r[None, :])
        np.fill_diagonal(d, np.inf)
        return float(d.min())

    def expanded(self) -> np.ndarray:
        return np.repeat(self.roots, self.multiplicities)


def _aberth(coeffs: np.ndarray, maxiter: int = 200, rtol: float = 1e-13) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    dc = c[1:] * np.arange(1, n + 1)
    # companion-matrix eigenvalues are a reliable start even for wide
    # coefficient ranges; the simultaneous iteration then sharpens them
    try:
        z = np.roots(c[::-1])
        if len(z) != n or not np.all(np.isfinite(z)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        R = cauchy_bound(c)
        k = np.arange(n)
        z = R * 0.8 * np.exp(2j * np.pi * (k + 0.35) / n)
    scale = max(np.max(np.abs(c)), 1e-300)
    for _ in range(maxiter):
        p = np.polyval(c[::-1], z)
        dp = np.polyval(dc[::-1], z)
        w = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0.1 + 0.1j)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = w / denom
        z = z - step
        zb = np.maximum(np.abs(z), 1.0)
        if np.all(np.abs(np.polyval(c[::-1], z)) <= rtol * scale * zb**n * (n + 1)):
            break
    return z


def _cluster(roots: np.ndarray, tol: float) -> RootSet:
    order = np.argsort(roots.real, kind="stable")
    rs = roots[order]
    used = np.zeros(len(rs), dtype=bool)
    centers = []
    mults = []
    for i in range(len(rs)):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            a = frontier.pop()
            near = np.where(~used & (np.abs(rs - rs[a]) <= tol))[0]
            for b in near:
                used[b] = True
                group.append(b)
                frontier.append(b)
        pts = rs[group]
        centers.append(pts.mean())
        mults.append(len(pts))
    centers = np.asarray(centers, dtype=complex)
    mults = np.asarray(mults, dtype=int)
    o = np.lexsort((centers.imag, centers.real))
    return RootSet(centers[o], mults[o], tol)


def univariate_roots(poly, tol: float = 1e-7) -> RootSet:
    """All complex roots (Aberth-Ehrlich), clustered into multiplicities.

    Accepts a univariate PolyMap or a coefficient sequence (coeffs[k] ~ z^k).
    """
    if isinstance(poly, PolyMap):
        coeffs = poly.univariate_coeffs()
    else:
        coeffs = np.asarray(list(poly), dtype=complex)
    # strip negligible leading coefficients
    lead = len(coeffs) - 1
    cmax = np.max(np.abs(coeffs)) if len(coeffs) else 0.0
    if cmax == 0.0:
        raise ValueError("zero polynomial has no root set")
    while lead > 0 and abs(coeffs[lead]) <= 1e-300 * cmax:
        lead -= 1
    coeffs = coeffs[: lead + 1]
    if len(coeffs) == 1:
        return RootSet(np.zeros(0, dtype=complex), np.zeros(0, dtype=int), tol)
    # factor out zero roots exactly
    nz = 0
    while nz < len(coeffs) - 1 and coeffs[nz] == 0:
        nz += 1
    core = coeffs[nz:]
    roots = _aberth(core) if len(core) > 1 else np.zeros(0, dtype=complex)
    if nz:
        roots = np.concatenate([roots, np.zeros(nz, dtype=complex)])
    return _cluster(roots, tol)


def batched_roots(coeff_rows: np.ndarray) -> np.ndarray:
    """Roots of many same-degree polynomials via stacked companion matrices.

    coeff_rows has shape (B, d+1) with coeff_rows[:, k] ~ z^k; rows whose
    leading coefficient is (relatively) negligible get their excess roots
    reported at a large modulus so callers can window them out.
    """
    c = np.asarray(coeff_rows, dtype=complex)
    B, m = c.shape
    d = m - 1
    if d == 0:
        return np.zeros((B, 0), dtype=complex)
    cmax = np.max(np.abs(c), axis=1)
    cmax = np.where(cmax == 0, 1.0, cmax)
    lead = c[:, -1].copy()
    bad = np.abs(lead) < 1e-12 * cmax
    lead = np.where(bad, 1.0, lead)
    comp = np.zeros((B, d, d), dtype=complex)
    comp[:, 1:, :-1] = np.broadcast_to(np.eye(d - 1, dtype=complex), (B, d - 1, d - 1))
    comp[:, :, -1] = -c[:, :-1] / lead[:, None]
    roots = np.linalg.eigvals(comp)
    if np.any(bad):
        # degenerate rows: recompute honestly with trimmed degree
        for i in np.where(bad)[0]:
            row = c[i]
            lead_i = d
            while lead_i > 0 and abs(row[lead_i]) <= 1e-12 * cmax[i]:
                lead_i -= 1
            if lead_i == 0:
                roots[i, :] = 1e30
            else:
                r = np.roots(row[: lead_i + 1][::-1])
                roots[i, : len(r)] = r
                roots[i, len(r):] = 1e30
    return roots


# -- resultants -------------------------------------------------------

def _sylvester_det(pc: np.ndarray, qc: np.ndarray) -> complex:
    """Determinant of the Sylvester matrix of two numeric coefficient rows.

    pc[k] ~ z^k, qc[k] ~ z^k, leading coefficients assumed nonzero.
    """
    m = len(pc) - 1
    n = len(qc) - 1
    if m < 0 or n < 0:
        raise ValueError("zero polynomial")
    if m == 0 and n == 0:
        return 1.0 + 0.0j
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i : i + m + 1] = pc[::-1]
    for i in range(m):
        S[n + i, i : i + n + 1] = qc[::-1]
    return complex(np.linalg.det(S))


def resultant(p: PolyMap, q: PolyMap, tol: float = 0.0) -> PolyMap:
    """Resultant of p and q with respect to their *last* variable.

    For univariate inputs the result is a constant PolyMap.  For bivariate
    inputs the result (a polynomial in the first variable) is recovered by
    evaluation at scaled roots of unity and inverse FFT.
    """
    if p.nvars != q.nvars:
        raise ValueError("nvars mismatch")
    if p.nvars == 1:
        return PolyMap.constant(
            _sylvester_det(p.univariate_coeffs(), q.univariate_coeffs()), 0
        )
    if p.nvars != 2:
        raise ValueError("resultant supports 1 or 2 variables")
    dp = p.degree_in(1)
    dq = q.degree_in(1)
    if dp < 0 or dq < 0:
        raise ValueError("zero polynomial")
    # degree bound of the resultant in the base variable
    dbound = p.degree_in(0) * dq + q.degree_in(0) * dp
    N = 1
    while N < dbound + 1:
        N *= 2
    radius = 1.37  # avoids evaluation exactly at structure-heavy points
    zs = radius * np.exp(2j * np.pi * np.arange(N) / N)
    pc = p.coeffs_in_last()
    qc = q.coeffs_in_last()
    vals = np.zeros(N, dtype=complex)
    pc_vals = np.array([c.evaluate(zs) for c in pc])  # (dp+1, N)
    qc_vals = np.array([c.evaluate(zs) for c in qc])
    for i in range(N):
        prow = pc_vals[:, i]
        qrow = qc_vals[:, i]
        # trim true (generic) leading terms; degree drops are handled via
        # the convention Res = lead^(deg drop) * Res(trimmed) = 0-safe det
        vals[i] = _sylvester_det(prow, qrow)
    coeffs = np.fft.fft(vals) / N  # inverse DFT for exp(+2 pi i k/N) nodes
    coeffs = coeffs / radius ** np.arange(N)
    mag = np.max(np.abs(coeffs)) if N else 0.0
    cut = (tol if tol > 0 else 1e-9) * max(mag, 1.0)
    out = {
        (k,): complex(coeffs[k])
        for k in range(min(N, dbound + 1))
        if abs(coeffs[k]) > cut
    }
    return PolyMap(1, out)
