"""Optimal reparametrisation of one transform against another.

Dynamic programming over monotone lattice paths: an arc from node (k, l) to
(i, j) means "the source time interval [t_k, t_i] is matched linearly onto
[t_l, t_j]".  Arc costs integrate the squared difference between the first
path and the linearly warped second path; by default the warped values are
scaled by the square root of the warp slope so the cost agrees with the
transform of the warped curve.  ``paper_literal=True`` drops that factor
and integrates the raw composition.

Both paths are piecewise constant, so every arc integral is evaluated
exactly over the union of native and pulled-back breakpoints.  Small
problems and non-uniform grids run through a scalar fill; large uniform
grids with a modest search band use a vectorised fill with precomputed
per-shape breakpoint patterns (same quadrature, different float roundings,
never mixed within one solve).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import ReparamMap
from .errors import ConfigurationError, InputError, InvalidArcError
from .transforms import AlgebraPath, require_same_grid

_VECTOR_MIN_N = 32
_VECTOR_MAX_WINDOW = 16
_BRUTE_FORCE_MAX_N = 6


@dataclass(eq=False)
class DPTable:
    """Accumulated costs and predecessor links of one DP solve."""

    cost: np.ndarray
    pred: np.ndarray


def _grams(q1: AlgebraPath, q2: AlgebraPath) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pairwise inner products of the two value sequences."""
    if q1.inner != q2.inner:
        raise InputError("paths use different inner-product modes")
    mode = q1.inner
    a = q1.values
    b = q2.values
    if mode == "killing" and q1.spec.n < 3:
        raise ConfigurationError(
            "the scaled Killing form degenerates on so(2); use mode='frobenius'"
        )
    factor = 1.0 if mode == "frobenius" else float(q1.spec.n - 2)
    p1 = factor * np.einsum("iab,iab->i", a, a)
    p2 = factor * np.einsum("iab,iab->i", b, b)
    cross = factor * np.einsum("iab,jab->ij", a, b)
    return p1, p2, cross


def _arc_cost(
    grid: np.ndarray,
    p1: np.ndarray,
    p2: np.ndarray,
    cross: np.ndarray,
    i: int,
    j: int,
    k: int,
    l: int,
    scaled: bool,
) -> float:
    """Exact integral of |q1 - warp(q2)|^2 over [t_k, t_i]."""
    slope = (grid[j] - grid[l]) / (grid[i] - grid[k])
    if scaled:
        root = np.sqrt(slope)
        weight = slope
    else:
        root = 1.0
        weight = 1.0
    native = grid[k : i + 1]
    pulled = grid[k] + (grid[l : j + 1] - grid[l]) / slope
    pts = np.unique(np.concatenate([native, pulled]))
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (a + b)
        m = min(max(int(np.searchsorted(grid, mid, side="right")) - 1, k), i - 1)
        tau = grid[l] + slope * (mid - grid[k])
        r = min(max(int(np.searchsorted(grid, tau, side="right")) - 1, l), j - 1)
        total += (b - a) * (p1[m] + weight * p2[r] - 2.0 * root * cross[m, r])
    return total


def local_cost(
    q1: AlgebraPath,
    q2: AlgebraPath,
    i: int,
    j: int,
    k: int,
    l: int,
    scaled: bool = True,
) -> float:
    """Cost of matching segment [t_k, t_i] of q1 against [t_l, t_j] of q2."""
    require_same_grid(q1, q2)
    n = q1.n_segments
    if not (0 <= k < i <= n and 0 <= l < j <= n):
        raise InvalidArcError(
            f"arc ({k},{l}) -> ({i},{j}) must advance strictly in both indices"
        )
    p1, p2, cross = _grams(q1, q2)
    return _arc_cost(q1.grid, p1, p2, cross, i, j, k, l, scaled)


def _fill_scalar(
    grid: np.ndarray,
    p1: np.ndarray,
    p2: np.ndarray,
    cross: np.ndarray,
    window: int,
    scaled: bool,
) -> DPTable:
    n = grid.size - 1
    cost = np.full((n + 1, n + 1), np.inf)
    cost[0, 0] = 0.0
    pred = np.full((n + 1, n + 1, 2), -1, dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            best = np.inf
            bk = bl = -1
            for k in range(max(0, i - window), i):
                for l in range(max(0, j - window), j):
                    base = cost[k, l]
                    if not np.isfinite(base):
                        continue
                    c = base + _arc_cost(grid, p1, p2, cross, i, j, k, l, scaled)
                    if c < best:
                        best, bk, bl = c, k, l
            if bk >= 0:
                cost[i, j] = best
                pred[i, j] = (bk, bl)
    return DPTable(cost=cost, pred=pred)


def _patterns(di: int, dj: int) -> list[tuple[Fraction, int, int]]:
    """Breakpoint pattern of a (di, dj) arc on a uniform grid.

    Returned pieces are (width fraction of the arc, q1 cell offset, q2 cell
    offset); exact rational arithmetic keeps coincident breakpoints merged.
    """
    cuts = sorted({Fraction(m, di) for m in range(di + 1)} | {Fraction(r, dj) for r in range(dj + 1)})
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = (a + b) / 2
        pieces.append((b - a, int(mid * di), int(mid * dj)))
    return pieces


def _fill_vectorised(
    grid: np.ndarray,
    p1: np.ndarray,
    p2: np.ndarray,
    cross: np.ndarray,
    window: int,
    scaled: bool,
) -> DPTable:
    n = grid.size - 1
    h = (grid[-1] - grid[0]) / n
    arc_costs: dict[tuple[int, int], np.ndarray] = {}
    for di in range(1, window + 1):
        for dj in range(1, window + 1):
            slope = dj / di
            root = np.sqrt(slope) if scaled else 1.0
            weight = slope if scaled else 1.0
            ks = np.arange(n - di + 1)
            ls = np.arange(n - dj + 1)
            table = np.zeros((ks.size, ls.size))
            for frac, dm, dr in _patterns(di, dj):
                width = float(frac) * di * h
                table += width * (
                    p1[ks + dm][:, None]
                    + weight * p2[ls + dr][None, :]
                    - 2.0 * root * cross[np.ix_(ks + dm, ls + dr)]
                )
            arc_costs[(di, dj)] = table
    cost = np.full((n + 1, n + 1), np.inf)
    cost[0, 0] = 0.0
    pred = np.full((n + 1, n + 1, 2), -1, dtype=np.int64)
    for i in range(1, n + 1):
        best = np.full(n + 1, np.inf)
        bk = np.full(n + 1, -1, dtype=np.int64)
        bl = np.full(n + 1, -1, dtype=np.int64)
        # Descending shape order with strict improvement keeps the
        # lexicographically smallest predecessor on ties, matching the
        # scalar fill.
        for di in range(min(window, i), 0, -1):
            k = i - di
            for dj in range(window, 0, -1):
                js = np.arange(dj, n + 1)
                cand = cost[k, js - dj] + arc_costs[(di, dj)][k, js - dj]
                better = cand < best[js]
                idx = js[better]
                best[idx] = cand[better]
                bk[idx] = k
                bl[idx] = idx - dj
        found = bk >= 0
        cost[i, found] = best[found]
        pred[i, found, 0] = bk[found]
        pred[i, found, 1] = bl[found]
    return DPTable(cost=cost, pred=pred)


def dp_table(
    q1: AlgebraPath,
    q2: AlgebraPath,
    window: int | None = None,
    paper_literal: bool = False,
) -> DPTable:
    """Fill the dynamic-programming table for the given search band."""
    require_same_grid(q1, q2)
    n = q1.n_segments
    if n < 1:
        raise InputError("need at least one segment")
    if window is None:
        window = n
    window = int(window)
    if window < 1:
        raise InputError("window must be at least 1")
    window = min(window, n)
    p1, p2, cross = _grams(q1, q2)
    diffs = np.diff(q1.grid)
    uniform = np.allclose(diffs, diffs[0], rtol=1e-12, atol=0.0)
    scaled = not paper_literal
    if uniform and n >= _VECTOR_MIN_N and window <= _VECTOR_MAX_WINDOW:
        return _fill_vectorised(q1.grid, p1, p2, cross, window, scaled)
    return _fill_scalar(q1.grid, p1, p2, cross, window, scaled)


def _backtrace(table: DPTable) -> np.ndarray:
    n = table.cost.shape[0] - 1
    if not np.isfinite(table.cost[n, n]):
        raise InputError("no admissible warp reaches the end node")
    node = (n, n)
    verts = [node]
    while node != (0, 0):
        k, l = table.pred[node[0], node[1]]
        if k < 0:
            raise InputError("predecessor chain broken before reaching the origin")
        node = (int(k), int(l))
        verts.append(node)
    verts.reverse()
    return np.asarray(verts, dtype=np.int64)


def _warp_from_path(grid: np.ndarray, verts: np.ndarray) -> ReparamMap:
    n = grid.size - 1
    s = np.empty(n + 1)
    for (pa, qa), (pb, qb) in zip(verts[:-1], verts[1:]):
        for idx in range(pa, pb):
            s[idx] = grid[qa] + (grid[qb] - grid[qa]) * (grid[idx] - grid[pa]) / (
                grid[pb] - grid[pa]
            )
    s[n] = grid[n]
    return ReparamMap(grid.copy(), s, path=verts)


def reparametrise(
    q1: AlgebraPath,
    q2: AlgebraPath,
    window: int | None = None,
    paper_literal: bool = False,
) -> tuple[ReparamMap, float]:
    """Optimal monotone warp of ``q2``'s time axis towards ``q1``.

    Returns the warp (as times ``s_i`` at which to resample the second
    curve) and the accumulated cost at the end node.  ``window`` bounds how
    many grid cells an arc may span in either index; ``None`` searches all
    arcs, which is the full O(N^4) algorithm.
    """
    table = dp_table(q1, q2, window=window, paper_literal=paper_literal)
    verts = _backtrace(table)
    warp = _warp_from_path(q1.grid, verts)
    n = q1.n_segments
    return warp, float(table.cost[n, n])


def brute_force_reparam(
    q1: AlgebraPath,
    q2: AlgebraPath,
    paper_literal: bool = False,
) -> tuple[np.ndarray, float]:
    """Exhaustive enumeration oracle over all strict monotone lattice paths.

    Uses the same arc-cost arithmetic as the scalar DP fill, accumulating
    left to right, and resolves cost ties exactly the way the DP backtrace
    does.  Refuses grids with more than 6 segments.
    """
    require_same_grid(q1, q2)
    n = q1.n_segments
    if n > _BRUTE_FORCE_MAX_N:
        raise InputError(
            f"brute force refuses N={n} > {_BRUTE_FORCE_MAX_N} (combinatorial blow-up)"
        )
    p1, p2, cross = _grams(q1, q2)
    grid = q1.grid
    scaled = not paper_literal
    best: tuple[float, tuple] | None = None
    best_verts: list[tuple[int, int]] | None = None

    def extend(node: tuple[int, int], acc: float, verts: list[tuple[int, int]]):
        nonlocal best, best_verts
        if node == (n, n):
            # Ties resolve to the path whose vertex sequence, read backwards
            # from the end, is lexicographically smallest.
            key = (acc, tuple(verts[-2::-1]))
            if best is None or key < best:
                best = key
                best_verts = list(verts)
            return
        i0, j0 = node
        for i in range(i0 + 1, n + 1):
            for j in range(j0 + 1, n + 1):
                c = _arc_cost(grid, p1, p2, cross, i, j, i0, j0, scaled)
                extend((i, j), acc + c, verts + [(i, j)])

    extend((0, 0), 0.0, [(0, 0)])
    assert best is not None and best_verts is not None
    return np.asarray(best_verts, dtype=np.int64), best[0]
