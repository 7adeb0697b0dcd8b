import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softlin.core import ParameterSet, Relation, SoftInputError, SoftSet, SoftVector, SoftVectorSpace, soft_set_relate
from softlin.norm import P1, P2, NormDescriptor, NormFamily, PInf
from softlin.seq import (
    Generated,
    NotCauchyError,
    Status,
    Tabulated,
    check_cauchy_bounded,
    check_convergence,
    combine_sequences,
    construct_limit,
    is_bounded_soft_set,
    scalar_sequence,
    subspace_closure,
    window_range,
)

AB = ParameterSet(["a", "b"])
R1 = NormFamily.constant(AB, P1)


def inv_n(params=AB, dim=1):
    return Generated(params, dim, inv_n=1.0)


def test_window_is_final_quarter():
    assert window_range(10_000) == (7500, 10_000)
    assert window_range(5) == (4, 5)
    with pytest.raises(SoftInputError):
        window_range(1)


def test_convergence_examples():
    v = check_convergence(inv_n(), R1, SoftVector.zero(AB, 1), 10_000, 1e-3)
    assert v.status is Status.CONVERGED
    half = Generated(AB, 1, const=0.5)
    v = check_convergence(half, R1, SoftVector.constant(AB, [0.5]), 100, 1e-3)
    assert v.status is Status.CONVERGED
    assert np.all(v.last_residual.values == 0)
    alt = Generated(AB, 1, alt=1.0)
    assert check_convergence(alt, R1, SoftVector.zero(AB, 1), 1000, 1e-3).status is Status.DIVERGENT_WINDOW
    assert check_convergence(alt, R1, None, 1000, 1e-3).status is Status.DIVERGENT_WINDOW


def test_convergence_without_candidate_estimates_limit():
    v = check_convergence(inv_n(), R1, None, 10_000, 1e-3)
    assert v.status is Status.CONVERGED
    assert np.allclose(v.limit.values, 0, atol=1e-3)


def test_cauchy_examples():
    r = check_cauchy_bounded(inv_n(), R1, 1000, 1e-3)
    assert r.cauchy and r.bounded
    assert np.all(r.bound_m.values <= 1.0)
    # oracle: max |1/i - 1/j| over 1 <= i, j <= N is 1 - 1/N
    assert np.allclose(r.bound_m.values, 1 - 1 / 1000)
    r = check_cauchy_bounded(Generated(AB, 1, alt=1.0), R1, 1000, 1e-3)
    assert not r.cauchy and r.bounded
    assert np.allclose(r.bound_m.values, 2.0)
    grow = Generated(AB, 1, lin=1.0)
    small = check_cauchy_bounded(grow, R1, 100, 1e-3)
    big = check_cauchy_bounded(grow, R1, 1000, 1e-3)
    assert not big.cauchy and big.unbounded_window
    assert np.all(big.bound_m.values > small.bound_m.values)


def test_exact_diameters_match_pairwise_oracle():
    rng = np.random.default_rng(5)
    terms = rng.normal(size=(60, 2, 3))
    fam = NormFamily(AB, [NormDescriptor(1, (1.0, 2.0, 0.5)), NormDescriptor(2, (1.0, 3.0, 1.0))])
    r = check_cauchy_bounded(Tabulated(AB, terms), fam, 60, 1e-3)
    diffs = terms[:, None] - terms[None]
    brute = fam.evaluate(diffs).max(axis=(0, 1))
    assert r.exact
    assert np.allclose(r.bound_m.values, brute, rtol=1e-12)
    pinf = NormFamily.constant(AB, PInf)
    r = check_cauchy_bounded(Tabulated(AB, terms), pinf, 60, 1e-3)
    assert np.allclose(r.bound_m.values, pinf.evaluate(diffs).max(axis=(0, 1)))


def test_construct_limit():
    lim = construct_limit(inv_n(), R1, 1_000_000, 1e-3)
    assert np.allclose(lim.values, 0, atol=1e-6)
    const = Generated(AB, 2, const=[[1.5, -2.0], [0.0, 4.0]])
    assert np.array_equal(construct_limit(const, NormFamily.constant(AB, P2), 50, 1e-6).values,
                          [[1.5, -2.0], [0.0, 4.0]])
    with pytest.raises(NotCauchyError):
        construct_limit(Generated(AB, 1, alt=1.0), R1, 100, 1e-3)


def test_basis_expansion_replay():
    # coefficients alpha_j + 1/m in a fixed basis; the limit recovers alpha
    basis = np.array([[1.0, 1.0], [0.0, 2.0]])  # columns e1, e2
    alpha = np.array([[0.5, -1.0], [2.0, 3.0]])  # per parameter
    const = alpha @ basis.T
    drift = np.ones(2) @ basis.T
    seq = Generated(AB, 2, const=const, inv_n=np.broadcast_to(drift, (2, 2)))
    lim = construct_limit(seq, NormFamily.constant(AB, P2), 1_000_000, 1e-3)
    recovered = np.linalg.solve(basis, lim.values.T).T
    assert np.allclose(recovered, alpha, atol=1e-5)


def test_tabulated_too_short():
    seq = Tabulated(AB, np.zeros((10, 2, 1)))
    with pytest.raises(SoftInputError):
        check_cauchy_bounded(seq, R1, 20, 1e-3)


def test_combine_sequences():
    s = combine_sequences("add", inv_n(), Generated(AB, 1, const=0.5))
    v = check_convergence(s, R1, SoftVector.constant(AB, [0.5]), 10_000, 1e-3)
    assert v.status is Status.CONVERGED
    lam = scalar_sequence(AB, const=2.0, inv_n=1.0)
    x = Generated(AB, 2, const=[1.0, 0.0], inv_n=[1.0, 0.0])
    prod = combine_sequences("scalar_mul", x, lam)
    target = SoftVector.constant(AB, [2.0, 0.0])
    fam = NormFamily.constant(AB, P2)
    assert check_convergence(prod, fam, target, 100_000, 1e-3).status is Status.CONVERGED
    assert prod.limit().allclose(target)
    both = combine_sequences("add", inv_n(), Generated(AB, 1, inv_n=-3.0))
    assert check_cauchy_bounded(both, R1, 10_000, 2e-3).cauchy
    with pytest.raises(SoftInputError):
        combine_sequences("add", inv_n(), Generated(AB, 2, const=1.0))


def test_bounded_sets():
    fam = NormFamily.constant(AB, P2)
    f = SoftSet.finite(AB, 2, [[(3, 4), (0, 1)]] * 2)
    rep = is_bounded_soft_set(f, fam)
    assert rep.bounded and np.allclose(rep.k.values, 5.0)
    zero = SoftVectorSpace.zero(AB, 2)
    rep = is_bounded_soft_set(zero, fam)
    assert rep.bounded and np.all(rep.k.values == 0)
    line = SoftVectorSpace.from_columns(AB, 2, [[[1, 0]]] * 2)
    assert not is_bounded_soft_set(line, fam).bounded


def test_subspace_closure_is_identity():
    for space in (SoftVectorSpace.from_columns(AB, 3, [[[1, 2, 0]]] * 2),
                  SoftVectorSpace.zero(AB, 3), SoftVectorSpace.absolute(AB, 3)):
        assert soft_set_relate(subspace_closure(space), space) is Relation.EQUAL


# -- properties -----------------------------------------------------------------------

coef = st.floats(-5, 5)


@settings(max_examples=40, deadline=None)
@given(coef, coef, st.floats(0.5, 2.0))
def test_convergent_implies_cauchy_implies_bounded(c, u, scale):
    seq = Generated(AB, 1, const=[[c], [c * scale]], inv_n=[[u], [-u]])
    tol = 1e-2
    v = check_convergence(seq, R1, seq.limit(), 10_000, tol)
    if v.status is Status.CONVERGED:
        r = check_cauchy_bounded(seq, R1, 10_000, 2 * tol)
        assert r.cauchy and r.bounded
        assert np.all(np.isfinite(r.bound_m.values))


@settings(max_examples=40, deadline=None)
@given(coef, coef, st.floats(-1e-4, 1e-4))
def test_limit_uniqueness_on_window(c, u, shift):
    seq = Generated(AB, 1, const=c, inv_n=u)
    tol = 1e-2
    x = SoftVector.constant(AB, [c])
    y = SoftVector.constant(AB, [c + shift])
    vx = check_convergence(seq, R1, x, 10_000, tol)
    vy = check_convergence(seq, R1, y, 10_000, tol)
    if vx.status is Status.CONVERGED and vy.status is Status.CONVERGED:
        assert np.all(np.abs(x.values - y.values) < 2 * tol)


@settings(max_examples=30, deadline=None)
@given(coef, coef, coef, coef)
def test_limit_algebra(c1, u1, c2, u2):
    s1 = Generated(AB, 1, const=c1, inv_n=u1)
    s2 = Generated(AB, 1, const=c2, inv_n=u2)
    tol = 1e-3
    total = combine_sequences("add", s1, s2)
    lim = SoftVector.constant(AB, [c1 + c2])
    assert check_convergence(total, R1, lim, 100_000, tol).status is Status.CONVERGED
    prod = combine_sequences("scalar_mul", s1, scalar_sequence(AB, const=c2, inv_n=u2))
    assert check_convergence(prod, R1, SoftVector.constant(AB, [c1 * c2]), 100_000, 2 * tol).status \
        is Status.CONVERGED
