"""Deterministic samplers for cells.

Discs are sampled uniformly in area, annuli / punctured discs / disc
complements uniformly in (log r, theta); the unbounded log ranges of
punctured discs and complements are truncated to a finite window
(LOG_WINDOW natural-log units from the finite boundary).
"""

from __future__ import annotations

import numpy as np

from .cells import Cell, FiberKind

LOG_WINDOW = 9.0


def halton(n: int, dims: int, start: int = 1) -> np.ndarray:
    """Halton low-discrepancy points in [0,1)^dims."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]
    if dims > len(primes):
        raise ValueError("too many dimensions")
    out = np.empty((n, dims))
    idx = np.arange(start, start + n, dtype=np.int64)
    for d in range(dims):
        b = primes[d]
        x = np.zeros(n)
        f = 1.0
        i = idx.copy()
        while np.any(i > 0):
            f /= b
            x += f * (i % b)
            i //= b
        out[:, d] = x
    return out


def _fiber_points(kind: FiberKind, radii, u: np.ndarray, v: np.ndarray,
                  log_window: float = LOG_WINDOW) -> np.ndarray:
    theta = 2 * np.pi * v
    if kind is FiberKind.POINT:
        return np.zeros(len(u), dtype=complex)
    if kind is FiberKind.DISC:
        r = radii[0] * np.sqrt(u)
        return r * np.exp(1j * theta)
    if kind is FiberKind.PUNCTURED:
        if log_window <= 0:
            r = radii[0] * np.sqrt(np.maximum(u, 1e-300))
        else:
            r = radii[0] * np.exp(-log_window * u)
        return r * np.exp(1j * theta)
    if kind is FiberKind.COMPLEMENT:
        if log_window <= 0:
            r = radii[0] / np.sqrt(np.maximum(u, 1e-300))
        else:
            r = radii[0] * np.exp(log_window * u)
        return r * np.exp(1j * theta)
    if kind is FiberKind.ANNULUS:
        a, b = radii
        if log_window <= 0:
            r = np.sqrt(a * a + u * (b * b - a * a))
        else:
            r = a * np.exp(np.log(b / a) * u)
        return r * np.exp(1j * theta)
    raise ValueError(kind)


def sample_cell(cell: Cell, n: int, rng=None, seed: int = 0,
                log_window: float = LOG_WINDOW) -> np.ndarray:
    """n points of the (open) cell, shape (n, length).

    Deterministic: Halton when rng is None, else the supplied generator.
    """
    L = cell.length
    if rng is None:
        uv = halton(n, max(2 * L, 1), start=1 + 977 * seed)
    else:
        uv = rng.random((n, max(2 * L, 1)))
    pts = np.zeros((n, L), dtype=complex)
    for j, f in enumerate(cell.fibers):
        prefix = [pts[:, i] for i in range(j)]
        radii = [np.abs(r.evaluate(*prefix)) for r in f.radii()]
        pts[:, j] = _fiber_points(f.kind, radii, uv[:, 2 * j], uv[:, 2 * j + 1],
                                  log_window)
    return pts


def sample_real_trace(cell: Cell, n: int, rng=None, seed: int = 0,
                      log_window: float = LOG_WINDOW) -> np.ndarray:
    """Points of the real trace: each non-point coordinate real, both signs."""
    L = cell.length
    if rng is None:
        uv = halton(n, max(2 * L, 1), start=1 + 977 * seed)
    else:
        uv = rng.random((n, max(2 * L, 1)))
    pts = np.zeros((n, L), dtype=complex)
    for j, f in enumerate(cell.fibers):
        prefix = [pts[:, i] for i in range(j)]
        radii = [np.abs(r.evaluate(*prefix)) for r in f.radii()]
        u = uv[:, 2 * j]
        sign = np.where(uv[:, 2 * j + 1] < 0.5, -1.0, 1.0)
        if f.kind is FiberKind.POINT:
            continue
        if f.kind is FiberKind.DISC:
            pts[:, j] = sign * radii[0] * u
        elif f.kind is FiberKind.PUNCTURED:
            pts[:, j] = sign * radii[0] * np.exp(-log_window * u)
        elif f.kind is FiberKind.COMPLEMENT:
            pts[:, j] = sign * radii[0] * np.exp(log_window * u)
        else:
            a, b = radii
            pts[:, j] = sign * a * np.exp(np.log(b / a) * u)
    return pts
