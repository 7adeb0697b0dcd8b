"""Brute-force reference computations used to cross-check the engine.

Nothing here shares code with the routines it checks: ranks come from exact
rational elimination instead of an SVD, set algebra from Python sets instead
of row matching, and subspace distances from a certified grid search instead
of least squares or linear programming.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def exact_rank(mat):
    """Rank of an integer (or rational) matrix by fraction-exact Gaussian elimination."""
    rows = [[Fraction(int(v)) if float(v).is_integer() else Fraction(v) for v in row] for row in np.asarray(mat)]
    if not rows:
        return 0
    nrow, ncol = len(rows), len(rows[0])
    rank = 0
    for col in range(ncol):
        piv = next((r for r in range(rank, nrow) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(nrow):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == nrow:
            break
    return rank


# -- soft set algebra on hashable points ------------------------------------


def set_union(f, g):
    """Three-case union of dict-of-frozenset soft sets over ``A ∪ B``."""
    out = {}
    for e in set(f) | set(g):
        if e in f and e in g:
            out[e] = f[e] | g[e]
        else:
            out[e] = f.get(e, g.get(e))
    return out


def set_intersection(f, g):
    return {e: f[e] & g[e] for e in set(f) & set(g)}


def set_complement(f, universe):
    return {e: frozenset(universe) - s for e, s in f.items()}


# -- distances ----------------------------------------------------------------


def _norm_constants(p, weights, n):
    """``α, β`` with ``α‖x‖₂ ⩽ ‖x‖ ⩽ β‖x‖₂`` for a weighted p-norm on ``R^n``."""
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    lo, hi = float(w.min()), float(w.max())
    if p == 1:
        return lo, hi * math.sqrt(n)
    if p == 2:
        return math.sqrt(lo), math.sqrt(hi)
    return lo / math.sqrt(n), hi


def weighted_norm(p, weights, x):
    x = np.asarray(x, dtype=float)
    w = np.ones(x.shape[-1]) if weights is None else np.asarray(weights, dtype=float)
    if p == 1:
        return np.sum(w * np.abs(x), axis=-1)
    if p == 2:
        return np.sqrt(np.sum(w * x * x, axis=-1))
    return np.max(w * np.abs(x), axis=-1)


def grid_distance(p, weights, basis, y, step=1e-3, max_cells=2_000_000):
    """Certified bounds ``(lower, upper)`` on ``min_c ‖y - B c‖``.

    Branch and bound on a grid in orthonormal coordinates of ``span(B)``:
    each cell is scored at its centre, discarded when its Lipschitz lower
    bound exceeds the best centre value, and halved until the cells are
    ``step`` wide.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    basis = np.asarray(basis, dtype=float).reshape(n, -1)
    if basis.shape[1] == 0 or not np.any(basis):
        d = float(weighted_norm(p, weights, y))
        return d, d
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    q = u[:, s > 1e-12 * s.max()]
    r = q.shape[1]
    alpha, beta = _norm_constants(p, weights, n)
    radius = 2.0 * float(weighted_norm(p, weights, y)) / alpha
    half = radius / 8
    ticks = np.arange(-radius + half, radius, 2 * half)
    centres = np.array(list(itertools.product(ticks, repeat=r)))
    slack = beta * math.sqrt(r)
    while True:
        vals = weighted_norm(p, weights, y - centres @ q.T)
        upper = float(vals.min())
        lower_cells = vals - slack * half
        keep = lower_cells <= upper
        if 2 * half <= step:
            return float(lower_cells[keep].min()), upper
        centres = centres[keep]
        offs = np.array(list(itertools.product((-0.5 * half, 0.5 * half), repeat=r)))
        centres = (centres[:, None, :] + offs[None]).reshape(-1, r)
        half /= 2
        if centres.shape[0] > max_cells:
            raise RuntimeError("grid distance search did not narrow down")


def l1_sphere_minimum(p, weights, vecs, per_axis=401):
    """Dense-grid minimum of ``‖Σ αᵢ vᵢ‖`` over ``Σ|αᵢ| = 1`` (upper estimate)."""
    vecs = np.asarray(vecs, dtype=float)  # (m, n)
    m = vecs.shape[0]
    ticks = np.linspace(-1.0, 1.0, per_axis)
    best = math.inf
    for head in itertools.product(ticks, repeat=m - 1):
        rest = 1.0 - sum(abs(h) for h in head)
        if rest < 0:
            continue
        for last in (rest, -rest):
            a = np.array(head + (last,))
            best = min(best, float(weighted_norm(p, weights, a @ vecs)))
    return best
