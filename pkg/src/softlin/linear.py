"""Soft vector spaces: sums and scalings of soft sets, subspaces, soft vectors
and per-parameter linear (in)dependence."""

from dataclasses import dataclass

import numpy as np

from . import _linalg
from .core import (
    DEFAULT_TOL,
    SetKind,
    SoftInputError,
    SoftReal,
    SoftSet,
    SoftVector,
    SoftVectorSpace,
    UnsupportedRepresentationError,
    _require_dim,
    _unique_rows,
    require_same_params,
)

__all__ = [
    "IndependenceVerdict",
    "SoftVectorSpace",
    "intersect_spaces",
    "is_linearly_independent",
    "is_soft_subspace",
    "is_soft_vector_space",
    "linear_combination",
    "scale_soft_set",
    "sum_soft_sets",
    "translate_soft_set",
    "vector_arith",
]


def sum_soft_sets(sets, tol=DEFAULT_TOL):
    """Sum ``F1 + ... + Fk`` of soft sets sharing a parameter set.

    Finite sets give the enumerated Minkowski sum (deduplicated); subspace
    sets give the span of the concatenated bases.
    """
    sets = list(sets)
    if not sets:
        raise SoftInputError("sum of an empty list of soft sets")
    require_same_params(*sets)
    dim = _require_dim(*sets)
    kinds = {s.kind for s in sets}
    if len(kinds) != 1:
        raise UnsupportedRepresentationError("cannot add finite and subspace soft sets")
    params = sets[0].params
    if kinds == {SetKind.SUBSPACE}:
        bases = [np.hstack([s.payload[i] for s in sets]) for i in range(len(params))]
        return SoftVectorSpace.from_bases(params, dim, bases, tol)
    payload = []
    for i in range(len(params)):
        acc = sets[0].payload[i]
        for s in sets[1:]:
            rows = s.payload[i]
            if acc.shape[0] == 0 or rows.shape[0] == 0:
                acc = np.zeros((0, dim))
                continue
            acc = _unique_rows((acc[:, None, :] + rows[None, :, :]).reshape(-1, dim), tol)
        payload.append(acc)
    return SoftSet(params, dim, SetKind.FINITE, payload)


def scale_soft_set(alpha, f, tol=DEFAULT_TOL):
    """The soft set ``αF`` with ``(αF)(λ) = {αx : x ∈ F(λ)}``."""
    alpha = float(alpha)
    if f.kind is SetKind.SUBSPACE:
        if alpha == 0.0:
            return SoftVectorSpace.zero(f.params, f.dim)
        return SoftVectorSpace.from_bases(f.params, f.dim, [alpha * b for b in f.payload], tol)
    payload = [_unique_rows(alpha * rows, tol) for rows in f.payload]
    return SoftSet(f.params, f.dim, SetKind.FINITE, payload)


def translate_soft_set(u, f, tol=DEFAULT_TOL):
    """Translate a finite soft set by a vector ``x`` or by every vector of a set ``U``.

    ``U + F`` is computed as the union of the translates ``x + F``.
    """
    if f.kind is not SetKind.FINITE:
        raise UnsupportedRepresentationError(
            "the translate of a subspace is affine and has no subspace representation"
        )
    shifts = np.atleast_2d(np.asarray(u, dtype=float))
    if shifts.shape[1] != f.dim:
        raise SoftInputError(f"translation vectors must have dimension {f.dim}")
    payload = []
    for rows in f.payload:
        moved = (shifts[:, None, :] + rows[None, :, :]).reshape(-1, f.dim)
        payload.append(_unique_rows(moved, tol))
    return SoftSet(f.params, f.dim, SetKind.FINITE, payload)


def is_soft_vector_space(f, tol=DEFAULT_TOL):
    """True iff every ``F(λ)`` is a linear subspace.

    A finite subset of ``R^n`` is a subspace only when it is ``{θ}``.
    """
    if f.kind is SetKind.SUBSPACE:
        return True
    return all(rows.shape[0] == 1 and np.all(np.abs(rows) <= tol) for rows in f.payload)


def is_soft_subspace(g, f, samples=32, seed=0, tol=DEFAULT_TOL):
    """Decide whether the soft vector space ``g`` is a soft subspace of ``f``.

    The verdict is inclusion ``G(λ) ⊆ F(λ)`` at every parameter.  When that
    holds, the closure criterion ``αG + βG ⊂ G`` is also exercised on
    ``samples`` random scalar and member pairs.  For subspace-represented
    soft sets the criterion is implied by inclusion, so it acts as a
    redundant cross-check.
    """
    for s in (g, f):
        s._require_kind(SetKind.SUBSPACE, "is_soft_subspace")
    require_same_params(g, f)
    _require_dim(g, f)
    included = all(
        _linalg.span_contains(fb, gb, tol) for fb, gb in zip(f.payload, g.payload)
    )
    if not included or samples <= 0:
        return included
    rng = np.random.default_rng(seed)
    for gb, fb in zip(g.payload, f.payload):
        r = gb.shape[1]
        for _ in range(samples):
            a, b = rng.normal(size=2)
            x = gb @ rng.normal(size=r)
            y = gb @ rng.normal(size=r)
            z = a * x + b * y
            scale = max(1.0, float(np.linalg.norm(z)))
            if _linalg.span_residual(gb, z) > tol * scale or _linalg.span_residual(fb, z) > tol * scale:
                return False
    return True


def linear_combination(coeffs, vectors):
    """``Σ c̃ᵢ·x̃ᵢ`` with soft scalar (or plain real) coefficients."""
    coeffs, vectors = list(coeffs), list(vectors)
    if len(coeffs) != len(vectors) or not vectors:
        raise SoftInputError("linear combination needs matching, non-empty coefficient and vector lists")
    require_same_params(*vectors)
    _require_dim_vec(vectors)
    acc = np.zeros_like(vectors[0].values)
    for c, v in zip(coeffs, vectors):
        acc = acc + (c * v).values
    return SoftVector(vectors[0].params, acc)


def _require_dim_vec(vectors):
    d = vectors[0].dim
    for v in vectors[1:]:
        if v.dim != d:
            raise SoftInputError(f"dimension mismatch: {d} vs {v.dim}")


def vector_arith(op, *args):
    """Dispatch soft vector arithmetic.

    ``add(x, y)``, ``scalar_mul(k, x)`` or ``linear_combination(coeffs, vectors)``.
    """
    if op == "add":
        if len(args) != 2:
            raise SoftInputError("add takes two soft vectors")
        return args[0] + args[1]
    if op == "scalar_mul":
        if len(args) != 2:
            raise SoftInputError("scalar_mul takes a soft scalar and a soft vector")
        k, x = args
        if isinstance(k, SoftReal):
            require_same_params(k, x)
        return k * x
    if op == "linear_combination":
        if len(args) != 2:
            raise SoftInputError("linear_combination takes a coefficient list and a vector list")
        return linear_combination(*args)
    raise SoftInputError(f"unknown vector operation {op!r}")


@dataclass(frozen=True)
class IndependenceVerdict:
    """Outcome of an independence test.

    When dependent, ``witness_coefficients`` is a null vector of the matrix
    ``[x̃₁(λ) ... x̃ₘ(λ)]`` at ``witness_parameter``, scaled so its entry of
    largest magnitude is exactly ``+1``.
    """

    independent: bool
    witness_parameter: str | None = None
    witness_coefficients: tuple | None = None
    ranks: tuple = ()

    def witness_scalars(self, params):
        """Soft scalars that vanish away from the witness parameter."""
        if self.independent:
            return None
        i = params.index(self.witness_parameter)
        out = []
        for c in self.witness_coefficients:
            vals = np.zeros(len(params))
            vals[i] = c
            out.append(SoftReal(params, vals))
        return out


def _normalise_witness(v):
    j = int(np.argmax(np.abs(v)))
    return v / v[j]


def is_linearly_independent(vectors, tol=DEFAULT_TOL):
    """Test a finite family of soft vectors for linear independence.

    The family is independent iff the crisp vectors are independent at every
    parameter; rank is decided by SVD thresholding.
    """
    vectors = list(vectors)
    if not vectors:
        raise SoftInputError("independence of an empty family is undefined here")
    params = require_same_params(*vectors)
    _require_dim_vec(vectors)
    m = len(vectors)
    stacked = np.stack([v.values for v in vectors], axis=2)  # (k, n, m)
    ranks = []
    witness = None
    for lab, mat in zip(params, stacked):
        r = _linalg.numerical_rank(mat, tol)
        ranks.append(r)
        if r < m and witness is None:
            ns = _linalg.null_space(mat, tol)
            witness = (lab, tuple(float(c) for c in _normalise_witness(ns[:, 0])))
    if witness is None:
        return IndependenceVerdict(True, ranks=tuple(ranks))
    return IndependenceVerdict(False, witness[0], witness[1], tuple(ranks))


def intersect_spaces(spaces, tol=DEFAULT_TOL):
    """Parameterwise intersection of soft vector spaces."""
    spaces = list(spaces)
    if not spaces:
        raise SoftInputError("intersection of an empty family")
    for s in spaces:
        s._require_kind(SetKind.SUBSPACE, "intersect_spaces")
    params = require_same_params(*spaces)
    dim = _require_dim(*spaces)
    bases = [
        _linalg.intersect_spans([s.payload[i] for s in spaces], dim, tol)
        for i in range(len(params))
    ]
    return SoftVectorSpace.from_bases(params, dim, bases, tol)


def standard_basis(params, dim):
    """Constant soft vectors ``ẽ₁..ẽₙ``; a basis of the absolute space at every parameter."""
    return [SoftVector.constant(params, row) for row in np.eye(dim)]


def is_basis(vectors, tol=DEFAULT_TOL):
    """True iff the values form a basis of ``R^n`` at every parameter."""
    vectors = list(vectors)
    if not vectors or len(vectors) != vectors[0].dim:
        return False
    return is_linearly_independent(vectors, tol).independent


def coordinates(y, basis):
    """Soft scalars ``α̃ⱼ`` with ``y = Σ α̃ⱼ ẽⱼ`` for a basis of the absolute space."""
    stacked = np.stack([e.values for e in basis], axis=2)  # (k, n, n)
    coef = np.linalg.solve(stacked, y.values[:, :, None])[:, :, 0]
    return [SoftReal(y.params, coef[:, j]) for j in range(len(basis))]


def span_members(space, rng, count, scale=1.0):
    """Random soft elements of ``space``: Gaussian coefficients in each basis."""
    k = len(space.params)
    out = np.zeros((count, k, space.dim))
    for i, b in enumerate(space.payload):
        if b.shape[1]:
            out[:, i, :] = (scale * rng.normal(size=(count, b.shape[1]))) @ b.T
    return out
