"""Small dense linear-algebra helpers shared by the soft-space modules.

All rank decisions go through :func:`numerical_rank`, which thresholds the
singular values at ``tol * max(m, n) * sigma_max``.
"""

import numpy as np
import scipy.linalg


def as_matrix(columns, dim):
    """Return a float ``(dim, r)`` matrix; ``columns`` may be empty."""
    m = np.asarray(columns, dtype=float)
    if m.size == 0:
        return np.zeros((dim, 0))
    if m.ndim == 1:
        m = m.reshape(dim, 1)
    if m.shape[0] != dim:
        raise ValueError(f"expected {dim} rows, got matrix of shape {m.shape}")
    return m


def singular_threshold(m, tol):
    if m.size == 0:
        return 0.0, np.zeros(0)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0.0, s
    return tol * max(m.shape) * s[0], s


def numerical_rank(m, tol):
    """Rank of ``m`` with singular values below ``tol*max(m,n)*sigma_max`` dropped."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0:
        return 0
    thresh, s = singular_threshold(m, tol)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > thresh))


def column_basis(m, tol):
    """Select a maximal independent subset of the columns of ``m``.

    Columns are chosen by QR with column pivoting and returned in their
    original order, so ``span{e1}`` stays ``e1`` rather than some rotation.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("column_basis expects a 2-D matrix")
    r = numerical_rank(m, tol)
    if r == 0:
        return np.zeros((m.shape[0], 0))
    _, _, piv = scipy.linalg.qr(m, mode="economic", pivoting=True)
    keep = np.sort(piv[:r])
    return m[:, keep].copy()


def null_space(m, tol):
    """Orthonormal basis (columns) of the numerical null space of ``m``."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    ncols = m.shape[1]
    if m.shape[0] == 0 or m.size == 0:
        return np.eye(ncols)
    r = numerical_rank(m, tol)
    _, _, vh = np.linalg.svd(m, full_matrices=True)
    return vh[r:].T.copy()


def orthonormal_basis(m, tol):
    m = np.asarray(m, dtype=float)
    r = numerical_rank(m, tol)
    if r == 0:
        return np.zeros((m.shape[0], 0))
    u, _, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, :r].copy()


def span_residual(basis, x):
    """Euclidean distance from ``x`` to the column space of ``basis``."""
    x = np.asarray(x, dtype=float)
    if basis.shape[1] == 0:
        return float(np.linalg.norm(x))
    coef, *_ = np.linalg.lstsq(basis, x, rcond=None)
    return float(np.linalg.norm(x - basis @ coef))


def span_contains(big, small, tol):
    """True if every column of ``small`` lies in span(``big``) to tolerance.

    The tolerance is scaled by the column length so that long basis vectors
    are not penalised for rounding in the projection.
    """
    if small.shape[1] == 0:
        return True
    if big.shape[1] == 0:
        return bool(np.all(np.linalg.norm(small, axis=0) <= tol))
    q = orthonormal_basis(big, tol)
    resid = small - q @ (q.T @ small)
    scale = np.maximum(1.0, np.linalg.norm(small, axis=0))
    return bool(np.all(np.linalg.norm(resid, axis=0) <= tol * scale))


def intersect_spans(bases, dim, tol):
    """Basis of the intersection of the column spaces in ``bases``.

    Stacks the orthogonal-complement projectors ``I - Q Q^T`` of every
    subspace and takes the null space of the stack.
    """
    if not bases:
        return np.eye(dim)
    blocks = []
    for b in bases:
        q = orthonormal_basis(b, tol) if b.shape[1] else np.zeros((dim, 0))
        blocks.append(np.eye(dim) - q @ q.T)
    ns = null_space(np.vstack(blocks), tol)
    return column_basis(ns, tol) if ns.shape[1] else np.zeros((dim, 0))
