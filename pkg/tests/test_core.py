import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softlin import oracles
from softlin.core import (
    ParameterSet,
    Relation,
    SetKind,
    SoftInputError,
    SoftReal,
    SoftSet,
    SoftVector,
    SoftVectorSpace,
    TriState,
    UnsupportedRepresentationError,
    contains_element,
    difference,
    intersection,
    soft_complement,
    soft_real_arith,
    soft_real_compare,
    soft_set_algebra,
    soft_set_relate,
    union,
)

AB = ParameterSet(["a", "b"])


def sr(*vals):
    return SoftReal(AB, list(vals))


def finite(params, dim, members):
    return SoftSet.finite(params, dim, members)


def span(params, dim, cols):
    """Same column span at every parameter."""
    params = ParameterSet(params) if not isinstance(params, ParameterSet) else params
    return SoftVectorSpace.from_columns(params, dim, [cols] * len(params))


def test_parameter_set_rejects_empty_and_duplicates():
    with pytest.raises(SoftInputError):
        ParameterSet([])
    with pytest.raises(SoftInputError):
        ParameterSet(["a", "a"])


def test_soft_real_arithmetic():
    assert soft_real_arith("add", sr(2, 3), sr(1, -1)).to_dict() == {"a": 3.0, "b": 2.0}
    assert soft_real_arith("abs", sr(-1, -1)).to_dict() == {"a": 1.0, "b": 1.0}
    z = soft_real_arith("mul", SoftReal.zero(AB), sr(7, -4))
    assert np.all(z.values == 0)
    with pytest.raises(SoftInputError):
        soft_real_arith("pow", sr(1, 1), sr(1, 1))


def test_soft_real_compare():
    assert soft_real_compare("le", sr(1, 1), sr(2, 2)) is TriState.HOLDS
    assert soft_real_compare("le", sr(1, 3), sr(2, 2)) is TriState.INCOMPARABLE
    assert soft_real_compare("eq", sr(0.5, 0.5), SoftReal.constant(AB, 0.5)) is TriState.HOLDS
    assert soft_real_compare("le", sr(3, 3), sr(2, 2)) is TriState.FAILS


def test_mismatched_parameters_rejected():
    other = ParameterSet(["a", "c"])
    with pytest.raises(SoftInputError):
        sr(1, 2) + SoftReal(other, [1, 2])


def test_union_disjoint_parameters():
    f = finite(["e1"], 2, {"e1": [(1, 0)]})
    g = finite(["e2"], 2, {"e2": [(0, 1)]})
    h = union(f, g)
    assert tuple(h.params) == ("e1", "e2")
    assert h.at("e1").tolist() == [[1.0, 0.0]]
    assert h.at("e2").tolist() == [[0.0, 1.0]]


def test_intersection_and_difference():
    v1, v2 = (1.0, 0.0), (0.0, 1.0)
    f = finite(["l"], 2, {"l": [v1, v2]})
    g = finite(["l"], 2, {"l": [v2]})
    assert intersection(f, g).at("l").tolist() == [list(v2)]
    assert difference(f, g).at("l").tolist() == [list(v1)]
    assert soft_set_algebra("union", f, g).at("l").shape == (2, 2)


def test_complement_cases():
    u = finite(["l"], 1, {"l": [(1,), (2,), (3,)]})
    f = finite(["l"], 1, {"l": [(1,)]})
    assert sorted(soft_complement(f, u).at("l").ravel().tolist()) == [2.0, 3.0]
    assert soft_complement(u, u).at("l").shape[0] == 0
    empty = SoftSet.null(["l"], 1)
    assert soft_set_relate(soft_complement(empty, u), u) is Relation.EQUAL
    outside = finite(["l"], 1, {"l": [(9,)]})
    with pytest.raises(SoftInputError):
        soft_complement(outside, u)


def test_relate():
    f = finite(["l"], 1, {"l": [(1,)]})
    g = finite(["l"], 1, {"l": [(1,), (2,)]})
    assert soft_set_relate(f, g) is Relation.SUBSET
    assert soft_set_relate(g, f) is Relation.SUPERSET
    assert soft_set_relate(f, f) is Relation.EQUAL
    sf = span(["l"], 2, [[1, 0]])
    sg = span(["l"], 2, [[1, 0], [0, 1]])
    assert soft_set_relate(sf, sg) is Relation.SUBSET
    with pytest.raises(UnsupportedRepresentationError):
        soft_set_relate(f, sf)


def test_contains_element():
    params = ParameterSet(["x", "y"])
    coord = span(params, 3, [[0, 1, 0], [0, 0, 1]])
    assert contains_element(coord, SoftVector.constant(params, [0, 1, 1]))
    assert not contains_element(coord, SoftVector.constant(params, [1, 0, 0]))
    assert not contains_element(SoftSet.null(params, 3), SoftVector.constant(params, [0, 0, 0]))


def test_finite_members_deduplicated():
    f = finite(["l"], 2, {"l": [(1, 2), (1, 2), (3, 4)]})
    assert f.kind is SetKind.FINITE
    assert f.at("l").shape == (2, 2)


# -- properties -----------------------------------------------------------------------

POINTS = [(i,) for i in range(8)]


@st.composite
def soft_subsets(draw, labels=("p", "q", "r")):
    return {lab: frozenset(draw(st.sets(st.sampled_from(POINTS)))) for lab in labels}


def to_soft(d, labels=("p", "q", "r")):
    return finite(list(labels), 1, {lab: sorted(d[lab]) for lab in labels})


def to_dict(s):
    return {lab: frozenset(tuple(r) for r in s.at(lab).tolist()) for lab in s.params}


@settings(max_examples=60, deadline=None)
@given(soft_subsets(), soft_subsets())
def test_set_algebra_matches_python_sets(f, g):
    sf, sg = to_soft(f), to_soft(g)
    assert to_dict(union(sf, sg, 0.0)) == oracles.set_union(f, g)
    assert to_dict(intersection(sf, sg, 0.0)) == oracles.set_intersection(f, g)


@settings(max_examples=60, deadline=None)
@given(soft_subsets(), soft_subsets())
def test_de_morgan_identities(f, g):
    universe = finite(["p", "q", "r"], 1, {lab: POINTS for lab in "pqr"})
    sf, sg = to_soft(f), to_soft(g)

    def c(s):
        return soft_complement(s, universe, 0.0)

    assert soft_set_relate(c(union(sf, sg, 0.0)), intersection(c(sf), c(sg), 0.0), 0.0) is Relation.EQUAL
    assert soft_set_relate(c(intersection(sf, sg, 0.0)), union(c(sf), c(sg), 0.0), 0.0) is Relation.EQUAL


@settings(max_examples=60, deadline=None)
@given(soft_subsets(), soft_subsets())
def test_union_and_intersection_commute(f, g):
    sf, sg = to_soft(f), to_soft(g)
    assert soft_set_relate(union(sf, sg), union(sg, sf)) is Relation.EQUAL
    assert soft_set_relate(intersection(sf, sg), intersection(sg, sf)) is Relation.EQUAL
    assert soft_set_relate(intersection(sf, sg), sf) in (Relation.SUBSET, Relation.EQUAL)


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=2),
       st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=2))
def test_soft_real_order_is_pointwise(x, y):
    rx, ry = SoftReal(AB, x), SoftReal(AB, y)
    verdict = soft_real_compare("le", rx, ry, 0.0)
    if all(a <= b for a, b in zip(x, y)):
        assert verdict is TriState.HOLDS
    elif all(a > b for a, b in zip(x, y)):
        assert verdict is TriState.FAILS
    else:
        assert verdict is TriState.INCOMPARABLE
