import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softlin.convex import (
    BallRegion,
    EmptyRegionError,
    PredicateRegion,
    SubspaceRegion,
    check_convex,
    intersect_regions,
    segment_point,
)
from softlin.core import ParameterSet, SoftInputError, SoftReal, SoftVector, SoftVectorSpace
from softlin.norm import INF, P1, P2, BallKind, BallSpec, NormDescriptor, NormFamily, eval_norm
from softlin.seq import Generated, construct_limit

AB = ParameterSet(["a", "b"])


def ball(fam, centre, radius, kind=BallKind.CLOSED):
    return BallRegion(fam, BallSpec(centre, SoftReal.constant(AB, radius), kind))


def test_segment_points():
    x1 = SoftVector.constant(AB, [0.0, 0.0])
    x2 = SoftVector.constant(AB, [2.0, 2.0])
    assert segment_point(x1, x2, 1.0).allclose(x1)
    assert segment_point(x1, x2, 0.0).allclose(x2)
    assert np.allclose(segment_point(x1, x2, 0.5).values, 1.0)
    y1 = SoftVector(AB, [[1, 1], [3, 3]])
    y2 = SoftVector(AB, [[5, 5], [7, 7]])
    mixed = segment_point(y1, y2, SoftReal(AB, [0.0, 1.0]))
    assert np.array_equal(mixed.values, [[5, 5], [3, 3]])
    with pytest.raises(SoftInputError):
        segment_point(x1, x2, 1.5)


def test_closed_ball_and_subspace_are_convex():
    fam = NormFamily(AB, [P1, NormDescriptor(INF, (1.0, 2.0))])
    reg = ball(fam, SoftVector(AB, [[1, -1], [0, 3]]), 2.0)
    rep = check_convex(reg, trials=200, seed=4)
    assert rep.convex_on_samples and rep.counterexample is None
    assert rep.segment_samples == 1000
    space = SoftVectorSpace.from_columns(AB, 3, [[[1, 0, 1]], [[1, 1, 0], [0, 0, 1]]])
    assert check_convex(SubspaceRegion(space), trials=200, seed=4).convex_on_samples


def test_open_ball_is_convex():
    fam = NormFamily.constant(AB, P2)
    reg = ball(fam, SoftVector.zero(AB, 3), 1.5, BallKind.OPEN)
    assert check_convex(reg, trials=200, seed=9).convex_on_samples


def test_sphere_yields_counterexample():
    fam = NormFamily.constant(AB, P2)
    reg = ball(fam, SoftVector.zero(AB, 2), 1.0, BallKind.SPHERE)
    rep = check_convex(reg, trials=50, seed=0)
    assert not rep.convex_on_samples
    ce = rep.counterexample
    y = segment_point(ce["x1"], ce["x2"], ce["t"])
    assert not reg.contains(y)
    assert reg.contains(ce["x1"]) and reg.contains(ce["x2"])


def test_intersections():
    fam = NormFamily.constant(AB, P2)
    b1 = ball(fam, SoftVector.zero(AB, 2), 1.0)
    b2 = ball(NormFamily.constant(AB, P1), SoftVector.constant(AB, [0.5, 0.5]), 1.0)
    assert check_convex(intersect_regions([b1, b2]), trials=200, seed=1).convex_on_samples
    line = SubspaceRegion(SoftVectorSpace.from_columns(AB, 2, [[[1, 1]]] * 2))
    assert check_convex(intersect_regions([b1, line]), trials=200, seed=1).convex_on_samples
    same = intersect_regions([b1, b1])
    pts = np.random.default_rng(0).normal(size=(100, 2, 2))
    assert np.array_equal(same.mask(pts), b1.mask(pts))


def test_empty_intersection_raises():
    fam = NormFamily.constant(AB, P2)
    far = ball(fam, SoftVector.constant(AB, [10.0, 10.0]), 1.0)
    near = ball(fam, SoftVector.zero(AB, 2), 1.0)
    with pytest.raises(EmptyRegionError):
        check_convex(intersect_regions([near, far]), trials=5)


def test_predicate_region_annulus_not_convex():
    def pred(x, tol):
        r = np.linalg.norm(x.values, axis=1)
        return bool(np.all((r >= 1) & (r <= 2)))

    def sampler(rng, count):
        return rng.uniform(-2, 2, size=(count, 2, 2))

    reg = PredicateRegion(AB, 2, pred, sampler)
    rep = check_convex(reg, trials=100, seed=0)
    assert not rep.convex_on_samples


def test_closure_limit_stays_in_closed_ball():
    # members (1 - 1/n) e1 of the closed unit ball converge to the boundary point e1
    fam = NormFamily.constant(AB, P2)
    reg = ball(fam, SoftVector.zero(AB, 2), 1.0)
    seq = Generated(AB, 2, const=[1.0, 0.0], inv_n=[-1.0, 0.0])
    assert all(reg.contains(seq(n)) for n in (1, 10, 1000))
    lim = construct_limit(seq, fam, 100_000, 1e-3)
    assert reg.contains(lim, tol=1e-3)
    assert np.allclose(eval_norm(fam, lim).values, 1.0, atol=1e-4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2, INF]), st.integers(1, 4),
       st.sampled_from([BallKind.OPEN, BallKind.CLOSED]))
def test_random_balls_are_convex(seed, p, n, kind):
    rng = np.random.default_rng(seed)
    fam = NormFamily(AB, [NormDescriptor(p, tuple(rng.uniform(0.5, 2, n))), NormDescriptor(p)])
    centre = SoftVector(AB, rng.normal(size=(2, n)))
    reg = BallRegion(fam, BallSpec(centre, SoftReal(AB, rng.uniform(0.1, 3, 2)), kind))
    assert check_convex(reg, trials=40, seed=seed).convex_on_samples
