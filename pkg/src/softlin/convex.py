"""Segments and randomized convexity checks for soft regions.

A region is a membership rule on soft elements of ``R^n``.  Balls,
subspaces and their intersections are decided parameter by parameter, so a
soft element belongs to the region iff its value at every parameter belongs
to the crisp region there.  That product structure is what makes sampling
members cheap: each parameter is sampled independently.
"""

from dataclasses import dataclass

import numpy as np

from . import _linalg
from .core import (
    DEFAULT_TOL,
    SetKind,
    SoftInputError,
    SoftReal,
    SoftVector,
    _params,
    require_same_params,
)
from .linear import span_members
from .norm import BallKind, ball_mask


class EmptyRegionError(SoftInputError):
    """No members could be sampled at some parameter."""


def segment_point(x1, x2, t):
    """``t̃ x̃₁ + (1̄ - t̃) x̃₂`` with ``t̃(λ) ∈ [0, 1]``."""
    if not isinstance(t, SoftReal):
        t = SoftReal.constant(x1.params, t)
    require_same_params(x1, x2, t)
    if x1.dim != x2.dim:
        raise SoftInputError(f"dimension mismatch: {x1.dim} vs {x2.dim}")
    tv = t.values
    if np.any(tv < 0) or np.any(tv > 1) or not np.all(np.isfinite(tv)):
        raise SoftInputError("segment parameter must lie in [0, 1] at every parameter")
    return SoftVector(x1.params, tv[:, None] * x1.values + (1.0 - tv)[:, None] * x2.values)


class SoftRegion:
    """Base class for regions; subclasses set ``params`` and ``dim``."""

    decomposable = True

    def mask(self, values, tol=DEFAULT_TOL):
        """Per-parameter membership ``(..., k, n) -> (..., k)``."""
        raise NotImplementedError

    def propose(self, rng, count):
        """Candidate points ``(count, k, n)``; rejected later by :meth:`mask`."""
        raise NotImplementedError

    def contains(self, x, tol=DEFAULT_TOL):
        require_same_params(self, x)
        return bool(np.all(self.mask(x.values, tol)))

    def sample(self, rng, count, tol=DEFAULT_TOL, rounds=50):
        """``count`` member soft elements as a ``(count, k, n)`` array."""
        k = len(self.params)
        got = [np.zeros((0, self.dim)) for _ in range(k)]
        for _ in range(rounds):
            cand = self.propose(rng, max(count, 64))
            ok = self.mask(cand, tol)
            for i in range(k):
                if got[i].shape[0] < count:
                    got[i] = np.vstack([got[i], cand[ok[:, i], i, :]])
            if all(g.shape[0] >= count for g in got):
                return np.stack([g[:count] for g in got], axis=1)
        empty = [lab for lab, g in zip(self.params, got) if g.shape[0] < count]
        raise EmptyRegionError(f"could not sample enough members at parameters {empty}")


class BallRegion(SoftRegion):
    """Soft ball ``{ỹ : ‖c̃ - ỹ‖ (<, ⩽, =) r̃}`` under a norm family."""

    def __init__(self, fam, ball):
        require_same_params(fam, ball.center)
        fam.check_dim(ball.center.dim)
        self.fam, self.ball = fam, ball
        self.params, self.dim = fam.params, ball.center.dim

    def mask(self, values, tol=DEFAULT_TOL):
        return ball_mask(self.fam, self.ball, values, tol)

    def propose(self, rng, count):
        k, n = len(self.params), self.dim
        d = rng.normal(size=(count, k, n))
        d /= self.fam.evaluate(d)[..., None]
        if self.ball.kind is BallKind.SPHERE:
            s = np.ones((count, k))
        else:
            s = rng.random((count, k)) ** (1.0 / n)
            if self.ball.kind is BallKind.OPEN:
                s *= 1.0 - 1e-9
            else:
                s[rng.random((count, k)) < 0.3] = 1.0
        return self.ball.center.values + (s * self.ball.radius.values)[..., None] * d


class SubspaceRegion(SoftRegion):
    """A soft vector space viewed as a region."""

    def __init__(self, space):
        space._require_kind(SetKind.SUBSPACE, "SubspaceRegion")
        self.space = space
        self.params, self.dim = space.params, space.dim
        self._q = [_linalg.orthonormal_basis(b, DEFAULT_TOL) if b.shape[1] else b for b in space.payload]

    def project(self, values):
        out = np.zeros_like(values)
        for i, q in enumerate(self._q):
            if q.shape[1]:
                out[..., i, :] = values[..., i, :] @ q @ q.T
        return out

    def mask(self, values, tol=DEFAULT_TOL):
        values = np.asarray(values, dtype=float)
        resid = np.linalg.norm(values - self.project(values), axis=-1)
        scale = np.maximum(1.0, np.linalg.norm(values, axis=-1))
        return resid <= tol * scale

    def propose(self, rng, count):
        scale = 10.0 ** rng.uniform(-2, 1, size=(count, 1, 1))
        return scale * span_members(self.space, rng, count)


class IntersectionRegion(SoftRegion):
    """Conjunction of regions; proposals come from a ball projected onto subspaces."""

    def __init__(self, regions):
        flat = []
        for r in regions:
            flat.extend(r.regions if isinstance(r, IntersectionRegion) else [r])
        if not flat:
            raise SoftInputError("intersection of no regions")
        for r in flat[1:]:
            require_same_params(flat[0], r)
            if r.dim != flat[0].dim:
                raise SoftInputError(f"dimension mismatch: {flat[0].dim} vs {r.dim}")
        self.regions = tuple(flat)
        self.params, self.dim = flat[0].params, flat[0].dim
        self.decomposable = all(r.decomposable for r in flat)

    def mask(self, values, tol=DEFAULT_TOL):
        out = self.regions[0].mask(values, tol)
        for r in self.regions[1:]:
            out = out & r.mask(values, tol)
        return out

    def contains(self, x, tol=DEFAULT_TOL):
        return all(r.contains(x, tol) for r in self.regions)

    def propose(self, rng, count):
        balls = [r for r in self.regions if isinstance(r, BallRegion)]
        subs = [r for r in self.regions if isinstance(r, SubspaceRegion)]
        if balls:
            cand = balls[0].propose(rng, count)
        elif subs:
            cand = subs[0].propose(rng, count)
        else:
            cand = self.regions[0].propose(rng, count)
        for s in subs:
            cand = s.project(cand)
        return cand


class PredicateRegion(SoftRegion):
    """Arbitrary membership rule on whole soft elements, with its own sampler.

    ``predicate(SoftVector, tol) -> bool``; ``sampler(rng, count)`` returns
    candidate points ``(count, k, n)``.  Membership is not assumed to split
    by parameter, so candidates are accepted or rejected as whole elements.
    """

    decomposable = False

    def __init__(self, params, dim, predicate, sampler):
        self.params, self.dim = _params(params), int(dim)
        self.predicate, self.sampler = predicate, sampler

    def contains(self, x, tol=DEFAULT_TOL):
        require_same_params(self, x)
        return bool(self.predicate(x, tol))

    def mask(self, values, tol=DEFAULT_TOL):
        values = np.asarray(values, dtype=float)
        flat = values.reshape(-1, len(self.params), self.dim)
        ok = np.array([self.predicate(SoftVector(self.params, v), tol) for v in flat])
        return np.repeat(ok[:, None], len(self.params), axis=1).reshape(values.shape[:-1])

    def propose(self, rng, count):
        return np.asarray(self.sampler(rng, count), dtype=float)

    def sample(self, rng, count, tol=DEFAULT_TOL, rounds=50):
        got = []
        for _ in range(rounds):
            cand = self.propose(rng, max(count, 64))
            got.extend(c for c in cand if self.predicate(SoftVector(self.params, c), tol))
            if len(got) >= count:
                return np.array(got[:count])
        raise EmptyRegionError("could not sample enough members of the predicate region")


def intersect_regions(regions):
    return IntersectionRegion(list(regions))


@dataclass(frozen=True)
class ConvexityReport:
    convex_on_samples: bool
    pairs: int
    segment_samples: int
    counterexample: dict | None = None


def check_convex(region, trials=200, seed=0, tol=DEFAULT_TOL, per_pair=5):
    """Sampled convexity check: segments between random members stay inside.

    Draws ``trials`` member pairs and ``per_pair`` random segment parameters
    ``t̃`` (uniform in [0, 1] independently per parameter) for each pair.
    A clean run is evidence, not proof; the report carries the counts.
    """
    if trials < 1:
        raise SoftInputError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    members = region.sample(rng, 2 * trials, tol)
    x1, x2 = members[:trials], members[trials:]
    k = len(region.params)
    t = rng.random((trials, per_pair, k))
    y = t[..., None] * x1[:, None] + (1.0 - t[..., None]) * x2[:, None]
    if region.decomposable:
        ok = region.mask(y, tol).all(axis=-1)
    else:
        ok = np.array([[region.contains(SoftVector(region.params, y[i, j]), tol)
                        for j in range(per_pair)] for i in range(trials)])
    bad = np.argwhere(~ok)
    counter = None
    if bad.size:
        i, j = bad[0]
        counter = {
            "x1": SoftVector(region.params, x1[i]),
            "x2": SoftVector(region.params, x2[i]),
            "t": SoftReal(region.params, t[i, j]),
        }
    return ConvexityReport(not bad.size, trials, trials * per_pair, counter)
