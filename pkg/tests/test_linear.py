import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from softlin import oracles
from softlin.core import (
    ParameterSet,
    Relation,
    SoftInputError,
    SoftReal,
    SoftSet,
    SoftVector,
    SoftVectorSpace,
    soft_set_relate,
)
from softlin.linear import (
    coordinates,
    intersect_spaces,
    is_basis,
    is_linearly_independent,
    is_soft_subspace,
    is_soft_vector_space,
    linear_combination,
    scale_soft_set,
    standard_basis,
    sum_soft_sets,
    translate_soft_set,
    vector_arith,
)
from softlin.selftest import remark_vectors

L = ParameterSet(["l"])
AB = ParameterSet(["a", "b"])


def span(params, dim, cols):
    return SoftVectorSpace.from_columns(params, dim, [cols] * len(params))


def rows(s, lab="l"):
    return sorted(map(tuple, s.at(lab).tolist()))


def test_minkowski_sum_finite():
    f = SoftSet.finite(L, 2, [[(1, 0)]])
    g = SoftSet.finite(L, 2, [[(0, 1), (1, 1)]])
    assert rows(sum_soft_sets([f, g])) == [(1.0, 1.0), (2.0, 1.0)]
    zero = SoftSet.finite(L, 2, [[(0, 0)]])
    assert soft_set_relate(sum_soft_sets([g, zero]), g) is Relation.EQUAL


def test_sum_of_subspaces():
    s = sum_soft_sets([span(L, 2, [[1, 0]]), span(L, 2, [[0, 1]])])
    assert s.dims() == {"l": 2}


def test_scale_and_translate():
    f = SoftSet.finite(L, 2, [[(1, 2)]])
    assert rows(scale_soft_set(2.0, f)) == [(2.0, 4.0)]
    g = SoftSet.finite(L, 2, [[(1, 2), (3, 4)]])
    assert rows(scale_soft_set(0.0, g)) == [(0.0, 0.0)]
    sp = span(L, 3, [[1, 1, 0], [0, 0, 1]])
    assert soft_set_relate(scale_soft_set(-1.0, sp), sp) is Relation.EQUAL
    h = SoftSet.finite(L, 2, [[(0, 0), (1, 0)]])
    assert rows(translate_soft_set(np.array([1.0, 1.0]), h)) == [(1.0, 1.0), (2.0, 1.0)]
    u = np.array([[1.0, 0.0], [0.0, 1.0]])
    origin = SoftSet.finite(L, 2, [[(0, 0)]])
    assert rows(translate_soft_set(u, origin)) == [(0.0, 1.0), (1.0, 0.0)]


def test_vector_space_recognition():
    coord = SoftVectorSpace.coordinate_zero(4)
    assert is_soft_vector_space(coord)
    assert is_soft_vector_space(SoftSet.finite(AB, 2, [[(0, 0)], [(0, 0)]]))
    assert not is_soft_vector_space(SoftSet.finite(AB, 2, [[(1, 0)], [(1, 0)]]))


def test_subspace_check():
    p = ParameterSet(["x", "y"])
    plane = span(p, 3, [[1, 0, 0], [0, 1, 0]])
    line = span(p, 3, [[1, 0, 0]])
    assert is_soft_subspace(line, plane)
    assert is_soft_subspace(plane, plane)
    assert not is_soft_subspace(span(p, 3, [[0, 0, 1]]), line)


def test_null_vector_theorems():
    rng = np.random.default_rng(3)
    x = SoftVector(AB, rng.normal(size=(2, 3)))
    zero = vector_arith("scalar_mul", SoftReal.zero(AB), x)
    assert zero.is_null()
    neg = vector_arith("scalar_mul", SoftReal.constant(AB, -1.0), x)
    assert np.array_equal(neg.values, -x.values)
    theta = SoftVector.zero(AB, 3)
    assert vector_arith("scalar_mul", SoftReal(AB, [4.0, -2.0]), theta).is_null()


def test_remark_zero_product_with_nonzero_factors():
    k, alpha = remark_vectors(2)
    prod = vector_arith("scalar_mul", k, alpha)
    assert prod.is_null()
    assert not np.all(k.values == 0)
    assert not alpha.is_null()


def test_independence_examples():
    e = standard_basis(AB, 2)
    assert is_linearly_independent(e).independent
    x1 = SoftVector(AB, [[1, 0], [1, 0]])
    x2 = SoftVector(AB, [[0, 1], [2, 0]])
    v = is_linearly_independent([x1, x2])
    assert not v.independent
    assert v.witness_parameter == "b"
    assert v.witness_coefficients == pytest.approx((1.0, -0.5))
    assert v.ranks == (2, 1)
    combo = linear_combination(v.witness_scalars(AB), [x1, x2])
    assert np.allclose(combo.values, 0)
    w = is_linearly_independent([SoftVector.zero(AB, 2)])
    assert not w.independent and w.ranks == (0, 0)
    with pytest.raises(SoftInputError):
        is_linearly_independent([])


def test_intersect_spaces():
    p = ParameterSet(["x"])
    s = intersect_spaces([span(p, 3, [[1, 0, 0], [0, 1, 0]]), span(p, 3, [[0, 1, 0], [0, 0, 1]])])
    assert soft_set_relate(s, span(p, 3, [[0, 1, 0]])) is Relation.EQUAL
    f = span(p, 3, [[1, 2, 3]])
    assert soft_set_relate(intersect_spaces([f, f]), f) is Relation.EQUAL
    assert intersect_spaces([span(p, 2, [[1, 0]]), span(p, 2, [[0, 1]])]).dims() == {"x": 0}


def test_basis_and_coordinates():
    basis = [SoftVector(AB, [[1, 0], [2, 0]]), SoftVector(AB, [[1, 1], [0, 3]])]
    assert is_basis(basis)
    y = SoftVector(AB, [[3, 1], [4, 6]])
    alpha = coordinates(y, basis)
    assert np.allclose(linear_combination(alpha, basis).values, y.values)


# -- properties -----------------------------------------------------------------------


small_ints = arrays(np.int64, st.tuples(st.integers(1, 3), st.integers(1, 4), st.integers(1, 4)),
                    elements=st.integers(-2, 2))


@settings(max_examples=100, deadline=None)
@given(small_ints)
def test_independence_agrees_with_exact_elimination(vals):
    k, n, m = vals.shape
    params = ParameterSet([f"p{i}" for i in range(k)])
    vecs = [SoftVector(params, vals[:, :, j].astype(float)) for j in range(m)]
    v = is_linearly_independent(vecs)
    exact = [oracles.exact_rank(vals[i]) for i in range(k)]
    assert list(v.ranks) == exact
    assert v.independent == all(r == m for r in exact)
    if not v.independent:
        i = params.index(v.witness_parameter)
        assert exact[i] < m and all(r == m for r in exact[:i])
        resid = vals[i].astype(float) @ np.array(v.witness_coefficients)
        assert np.abs(resid).max() <= 1e-8
        assert max(v.witness_coefficients, key=abs) == 1.0


@settings(max_examples=50, deadline=None)
@given(arrays(float, (2, 3), elements=st.floats(-100, 100)))
def test_scalar_identities(vals):
    x = SoftVector(AB, vals)
    assert vector_arith("scalar_mul", SoftReal.zero(AB), x).is_null()
    assert np.array_equal(vector_arith("scalar_mul", SoftReal.constant(AB, -1), x).values, -vals)
