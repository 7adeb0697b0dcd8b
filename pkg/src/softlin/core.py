"""Soft sets, soft elements and soft real numbers over a finite parameter set.

A soft set over a universe ``U`` with parameter set ``A`` is a map
``A -> P(U)``.  Everything here is stored densely in the order of the
:class:`ParameterSet`, so a soft real number is a length-``k`` vector and a
soft element of ``R^n`` is a ``(k, n)`` array.

Two representations of soft subsets of ``R^n`` are supported:

* ``FINITE``: an explicit list of vectors at every parameter;
* ``SUBSPACE``: a basis matrix (columns) at every parameter.
"""

import enum
from collections.abc import Mapping

import numpy as np

from . import _linalg

DEFAULT_TOL = 1e-9


class SoftInputError(ValueError):
    """Inputs do not share a parameter set, dimension, or violate a precondition."""


class UnsupportedRepresentationError(TypeError):
    """The operation has no closed form for the given soft-set representation."""


class TriState(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCOMPARABLE = "incomparable"


class Relation(enum.Enum):
    SUBSET = "subset"
    SUPERSET = "superset"
    EQUAL = "equal"
    NONE = "none"


class SetKind(enum.Enum):
    FINITE = "finite"
    SUBSPACE = "subspace"


class ParameterSet:
    """Ordered finite collection of distinct parameter labels."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels):
        labels = tuple(str(lab) for lab in labels)
        if not labels:
            raise SoftInputError("parameter set must be non-empty")
        if len(set(labels)) != len(labels):
            raise SoftInputError(f"duplicate parameter labels in {labels!r}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    def __setattr__(self, name, value):
        raise AttributeError("ParameterSet is immutable")

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        return isinstance(other, ParameterSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"ParameterSet({list(self.labels)!r})"

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise SoftInputError(f"unknown parameter {label!r}") from None


def _params(obj):
    return obj if isinstance(obj, ParameterSet) else ParameterSet(obj)


def require_same_params(*objs):
    first = objs[0].params
    for o in objs[1:]:
        if o.params != first:
            raise SoftInputError(
                f"parameter sets differ: {list(first.labels)} vs {list(o.params.labels)}"
            )
    return first


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _dense(params, values, shape_tail=()):
    """Turn a label mapping or an ordered sequence into a dense array."""
    if isinstance(values, Mapping):
        missing = [lab for lab in params if lab not in values]
        if missing:
            raise SoftInputError(f"no value given for parameters {missing}")
        extra = [lab for lab in values if lab not in params]
        if extra:
            raise SoftInputError(f"values given for unknown parameters {extra}")
        values = [values[lab] for lab in params]
    arr = np.asarray(values, dtype=float)
    if arr.shape[:1] != (len(params),) or arr.shape[1:] != tuple(shape_tail):
        raise SoftInputError(
            f"expected shape {(len(params),) + tuple(shape_tail)}, got {arr.shape}"
        )
    return arr


class SoftReal:
    """Soft real number: a real value at each parameter.

    Arithmetic is pointwise.  The order is only partial, so comparisons go
    through :meth:`compare` and return a :class:`TriState`.
    """

    __slots__ = ("params", "values")

    def __init__(self, params, values):
        params = _params(params)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "values", _frozen(_dense(params, values)))

    def __setattr__(self, name, value):
        raise AttributeError("SoftReal is immutable")

    @classmethod
    def constant(cls, params, r):
        """The constant lift ``r̄`` with ``r̄(λ) = r`` everywhere."""
        params = _params(params)
        return cls(params, np.full(len(params), float(r)))

    @classmethod
    def zero(cls, params):
        return cls.constant(params, 0.0)

    def __getitem__(self, label):
        return float(self.values[self.params.index(label)])

    def __len__(self):
        return len(self.params)

    def to_dict(self):
        return {lab: float(v) for lab, v in zip(self.params, self.values)}

    def __repr__(self):
        return f"SoftReal({self.to_dict()!r})"

    def _coerce(self, other):
        if isinstance(other, SoftReal):
            require_same_params(self, other)
            return other.values
        if isinstance(other, (int, float, np.floating, np.integer)):
            return float(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else SoftReal(self.params, self.values + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else SoftReal(self.params, self.values - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else SoftReal(self.params, o - self.values)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else SoftReal(self.params, self.values * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else SoftReal(self.params, self.values / o)

    def __neg__(self):
        return SoftReal(self.params, -self.values)

    def __abs__(self):
        return SoftReal(self.params, np.abs(self.values))

    def is_positive(self):
        return bool(np.all(self.values > 0))

    def compare(self, rel, other, tol=DEFAULT_TOL):
        return soft_real_compare(rel, self, other, tol)

    def allclose(self, other, tol=DEFAULT_TOL):
        require_same_params(self, other)
        return bool(np.all(np.abs(self.values - other.values) <= tol))


SoftScalar = SoftReal


def soft_real_arith(op, x, y=None):
    """Apply ``op`` in {add, sub, mul, neg, abs} pointwise."""
    if op in ("neg", "abs"):
        if y is not None:
            raise SoftInputError(f"{op} takes a single operand")
        return -x if op == "neg" else abs(x)
    if y is None:
        raise SoftInputError(f"{op} needs two operands")
    require_same_params(x, y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise SoftInputError(f"unknown soft real operation {op!r}")


def soft_real_compare(rel, x, y, tol=DEFAULT_TOL):
    """Partial-order comparison of soft reals.

    HOLDS when ``rel`` holds at every parameter, FAILS when the opposite
    strict relation holds at every parameter, INCOMPARABLE otherwise.  For
    ``eq``, FAILS means the values differ by more than ``tol`` everywhere.
    """
    if tol < 0:
        raise SoftInputError("tol must be non-negative")
    if not isinstance(y, SoftReal):
        y = SoftReal.constant(x.params, y)
    require_same_params(x, y)
    d = x.values - y.values
    if rel == "le":
        holds, fails = d <= tol, d > tol
    elif rel == "ge":
        holds, fails = d >= -tol, d < -tol
    elif rel == "eq":
        holds = np.abs(d) <= tol
        fails = ~holds
    else:
        raise SoftInputError(f"unknown relation {rel!r}")
    if holds.all():
        return TriState.HOLDS
    if fails.all():
        return TriState.FAILS
    return TriState.INCOMPARABLE


class SoftVector:
    """Soft element of ``R^n``: one vector per parameter, stored as ``(k, n)``."""

    __slots__ = ("params", "values")

    def __init__(self, params, values):
        params = _params(params)
        if isinstance(values, Mapping):
            first = next(iter(values.values()), ())
            n = np.asarray(first, dtype=float).reshape(-1).size
        else:
            arr = np.asarray(values, dtype=float)
            n = arr.shape[1] if arr.ndim == 2 else -1
        if n < 1:
            raise SoftInputError("soft vector needs dimension >= 1 at every parameter")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "values", _frozen(_dense(params, values, (n,))))

    def __setattr__(self, name, value):
        raise AttributeError("SoftVector is immutable")

    @classmethod
    def zero(cls, params, dim):
        """The null soft vector Θ."""
        params = _params(params)
        return cls(params, np.zeros((len(params), dim)))

    @classmethod
    def constant(cls, params, vector):
        params = _params(params)
        v = np.asarray(vector, dtype=float).reshape(-1)
        return cls(params, np.tile(v, (len(params), 1)))

    @property
    def dim(self):
        return self.values.shape[1]

    def __getitem__(self, label):
        return self.values[self.params.index(label)]

    def to_dict(self):
        return {lab: [float(t) for t in row] for lab, row in zip(self.params, self.values)}

    def __repr__(self):
        return f"SoftVector({self.to_dict()!r})"

    def _check(self, other):
        require_same_params(self, other)
        if other.dim != self.dim:
            raise SoftInputError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, SoftVector):
            return NotImplemented
        self._check(other)
        return SoftVector(self.params, self.values + other.values)

    def __sub__(self, other):
        if not isinstance(other, SoftVector):
            return NotImplemented
        self._check(other)
        return SoftVector(self.params, self.values - other.values)

    def __neg__(self):
        return SoftVector(self.params, -self.values)

    def __rmul__(self, k):
        if isinstance(k, SoftReal):
            require_same_params(self, k)
            return SoftVector(self.params, k.values[:, None] * self.values)
        if isinstance(k, (int, float, np.floating, np.integer)):
            return SoftVector(self.params, float(k) * self.values)
        return NotImplemented

    def is_null(self, tol=0.0):
        return bool(np.all(np.abs(self.values) <= tol))

    def allclose(self, other, tol=DEFAULT_TOL):
        self._check(other)
        return bool(np.all(np.abs(self.values - other.values) <= tol))

    def component(self, i=0):
        """The ``i``-th coordinate as a soft real (for ``R^1`` soft elements)."""
        return SoftReal(self.params, self.values[:, i])

    @classmethod
    def from_soft_real(cls, r):
        return cls(r.params, r.values[:, None])


SoftElement = SoftVector


def _unique_rows(rows, tol):
    """Drop rows within ``tol`` (max-abs) of an earlier kept row, keeping order."""
    if rows.shape[0] <= 1:
        return rows
    if tol == 0:
        seen, keep = set(), []
        for i, key in enumerate(_row_keys(rows)):
            if key not in seen:
                seen.add(key)
                keep.append(i)
        return rows if len(keep) == rows.shape[0] else rows[keep]
    earlier = np.tril(_match_matrix(rows, rows, tol), -1)
    if not earlier.any():
        return rows
    keep = []
    for i in range(rows.shape[0]):
        if not earlier[i, keep].any():
            keep.append(i)
    return rows[keep]


def _within(rows, v, tol):
    return np.abs(rows - v).max(axis=1) <= tol


def _match_matrix(a, b, tol):
    """Boolean ``(len(a), len(b))`` matrix of tolerance matches."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]), dtype=bool)
    return np.abs(a[:, None, :] - b[None, :, :]).max(axis=2) <= tol


def _row_keys(a):
    raw = (a + 0.0).tobytes()  # + 0.0 folds -0.0 into 0.0
    w = 8 * a.shape[1]
    return [raw[i:i + w] for i in range(0, len(raw), w)]


def _pick(f, i, g, j, tol, matched=True):
    """Indices of rows of ``f.payload[i]`` that have (or lack) a match in ``g.payload[j]``.

    Exact matching (``tol == 0``) looks the rows up by their byte keys,
    otherwise rows are compared by max-abs distance.
    """
    a, b = f.payload[i], g.payload[j]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return [] if matched or a.shape[0] == 0 else list(range(a.shape[0]))
    if tol == 0:
        kb = g._keyset_at(j)
        return [t for t, k in enumerate(f._keys_at(i)) if (k in kb) is matched]
    hit = _match_matrix(a, b, tol).any(axis=1)
    return np.flatnonzero(hit if matched else ~hit).tolist()


def _take(s, i, idx):
    """Rows ``idx`` of ``s.payload[i]`` together with their cached keys (or None)."""
    rows, keys = s.payload[i], s._keys.get(i)
    if len(idx) == rows.shape[0]:
        return rows, keys
    return rows[idx], (None if keys is None else [keys[t] for t in idx])


class SoftSet:
    """Soft subset of ``R^n`` in finite or subspace representation.

    Build with :meth:`finite`, :meth:`null` or :meth:`subspace` rather than
    the constructor.  ``payload[i]`` is a ``(m, n)`` array of members for
    FINITE sets and a ``(n, r)`` basis matrix for SUBSPACE sets.
    """

    __slots__ = ("params", "dim", "kind", "payload", "_keys")

    def __init__(self, params, dim, kind, payload):
        object.__setattr__(self, "params", _params(params))
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "kind", kind)
        frozen = []
        for p in payload:
            a = np.array(p, dtype=float)
            a.setflags(write=False)
            frozen.append(a)
        object.__setattr__(self, "payload", tuple(frozen))
        object.__setattr__(self, "_keys", {})

    def __setattr__(self, name, value):
        raise AttributeError("SoftSet is immutable")

    @classmethod
    def finite(cls, params, dim, members, tol=DEFAULT_TOL):
        params = _params(params)
        if isinstance(members, Mapping):
            bad = [lab for lab in members if lab not in params]
            if bad:
                raise SoftInputError(f"members given for unknown parameters {bad}")
            members = [members.get(lab, ()) for lab in params]
        if len(members) != len(params):
            raise SoftInputError("one member list per parameter is required")
        payload = []
        for vecs in members:
            rows = np.asarray(vecs, dtype=float)
            if rows.size == 0:
                rows = np.zeros((0, dim))
            rows = rows.reshape(-1, dim) if rows.ndim == 1 and dim == 1 else rows
            if rows.ndim != 2 or rows.shape[1] != dim:
                raise SoftInputError(f"member vectors must have dimension {dim}")
            payload.append(_unique_rows(rows, tol))
        return cls(params, dim, SetKind.FINITE, payload)

    @classmethod
    def null(cls, params, dim):
        """The null soft set Φ (empty at every parameter)."""
        params = _params(params)
        return cls(params, dim, SetKind.FINITE, [np.zeros((0, dim))] * len(params))

    @classmethod
    def subspace(cls, params, dim, bases, tol=DEFAULT_TOL):
        return SoftVectorSpace.from_bases(params, dim, bases, tol)

    @classmethod
    def _wrap(cls, params, dim, parts):
        """Finite set from ``(rows, keys)`` pairs without copying.

        Arrays are frozen in place and may be shared between sets; known
        row keys seed the exact-matching cache.
        """
        obj = cls.__new__(cls)
        payload, cache = [], {}
        for i, (rows, keys) in enumerate(parts):
            rows.setflags(write=False)
            payload.append(rows)
            if keys is not None:
                cache[i] = keys
        object.__setattr__(obj, "params", params)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "kind", SetKind.FINITE)
        object.__setattr__(obj, "payload", tuple(payload))
        object.__setattr__(obj, "_keys", cache)
        return obj

    def at(self, label):
        return self.payload[self.params.index(label)]

    def _keys_at(self, i):
        if i not in self._keys:
            self._keys[i] = _row_keys(self.payload[i])
        return self._keys[i]

    def _keyset_at(self, i):
        key = ("set", i)
        if key not in self._keys:
            self._keys[key] = frozenset(self._keys_at(i))
        return self._keys[key]

    def __repr__(self):
        if self.kind is SetKind.FINITE:
            body = {lab: p.tolist() for lab, p in zip(self.params, self.payload)}
        else:
            body = {lab: p.T.tolist() for lab, p in zip(self.params, self.payload)}
        return f"SoftSet({self.kind.value}, dim={self.dim}, {body!r})"

    def _require_kind(self, kind, opname):
        if self.kind is not kind:
            raise UnsupportedRepresentationError(
                f"{opname} is not supported for {self.kind.value} soft sets"
            )


class SoftVectorSpace(SoftSet):
    """Soft set whose value at every parameter is a linear subspace of ``R^n``.

    The stored basis at each parameter is a set of linearly independent
    columns selected from the inputs by pivoted QR; zero columns vanish.
    """

    __slots__ = ()

    @classmethod
    def from_bases(cls, params, dim, bases, tol=DEFAULT_TOL):
        params = _params(params)
        if isinstance(bases, Mapping):
            bad = [lab for lab in bases if lab not in params]
            if bad:
                raise SoftInputError(f"bases given for unknown parameters {bad}")
            missing = [lab for lab in params if lab not in bases]
            if missing:
                raise SoftInputError(f"no basis given for parameters {missing}")
            bases = [bases[lab] for lab in params]
        if len(bases) != len(params):
            raise SoftInputError("one basis per parameter is required")
        payload = []
        for b in bases:
            try:
                m = _linalg.as_matrix(b, dim)
            except ValueError as exc:
                raise SoftInputError(str(exc)) from None
            payload.append(_linalg.column_basis(m, tol) if m.shape[1] else m)
        return cls(params, dim, SetKind.SUBSPACE, payload)

    @classmethod
    def from_columns(cls, params, dim, columns, tol=DEFAULT_TOL):
        """Bases given as lists of column vectors (the scene-file layout)."""
        params = _params(params)
        if isinstance(columns, Mapping):
            columns = [columns.get(lab, ()) for lab in params]
        mats = []
        for cols in columns:
            c = np.asarray(cols, dtype=float)
            mats.append(c.reshape(-1, dim).T if c.size else np.zeros((dim, 0)))
        return cls.from_bases(params, dim, mats, tol)

    @classmethod
    def absolute(cls, params, dim):
        """The absolute soft vector space with value ``R^n`` everywhere."""
        params = _params(params)
        return cls(params, dim, SetKind.SUBSPACE, [np.eye(dim)] * len(params))

    @classmethod
    def zero(cls, params, dim):
        params = _params(params)
        return cls(params, dim, SetKind.SUBSPACE, [np.zeros((dim, 0))] * len(params))

    @classmethod
    def coordinate_zero(cls, n):
        """Parameters ``1..n``; at parameter ``i`` the hyperplane ``t_i = 0``."""
        params = ParameterSet([str(i) for i in range(1, n + 1)])
        eye = np.eye(n)
        return cls(params, n, SetKind.SUBSPACE, [np.delete(eye, i, axis=1) for i in range(n)])

    def basis(self, label):
        return self.at(label)

    def dims(self):
        return {lab: int(b.shape[1]) for lab, b in zip(self.params, self.payload)}


def _require_finite(*sets):
    for s in sets:
        s._require_kind(SetKind.FINITE, "this set operation")


def _require_dim(*sets):
    d = sets[0].dim
    for s in sets[1:]:
        if s.dim != d:
            raise SoftInputError(f"dimension mismatch: {d} vs {s.dim}")
    return d


def union(f, g, tol=DEFAULT_TOL):
    """Union over ``A ∪ B``: F on A-B, G on B-A, F∪G on the overlap."""
    _require_finite(f, g)
    dim = _require_dim(f, g)
    extra = [lab for lab in g.params if lab not in f.params]
    params = ParameterSet(list(f.params.labels) + extra) if extra else f.params
    parts = []
    for lab in params:
        if lab not in g.params:
            i = f.params.index(lab)
            parts.append((f.payload[i], f._keys.get(i)))
            continue
        j = g.params.index(lab)
        if lab not in f.params:
            parts.append((g.payload[j], g._keys.get(j)))
            continue
        i = f.params.index(lab)
        new = _pick(g, j, f, i, tol, matched=False)
        rows, keys = f.payload[i], f._keys.get(i)
        if new:
            more, more_keys = _take(g, j, new)
            rows = np.concatenate([rows, more])
            keys = None if keys is None or more_keys is None else keys + more_keys
        parts.append((rows, keys))
    return SoftSet._wrap(params, dim, parts)


def intersection(f, g, tol=DEFAULT_TOL):
    """Bi-intersection over the common parameters ``A ∩ B``."""
    _require_finite(f, g)
    dim = _require_dim(f, g)
    labels = [lab for lab in f.params if lab in g.params]
    if not labels:
        raise SoftInputError("intersection of soft sets with disjoint parameter sets")
    params = f.params if len(labels) == len(f.params) else ParameterSet(labels)
    parts = []
    for lab in labels:
        i, j = f.params.index(lab), g.params.index(lab)
        parts.append(_take(f, i, _pick(f, i, g, j, tol)))
    return SoftSet._wrap(params, dim, parts)


def difference(f, g, tol=DEFAULT_TOL):
    _require_finite(f, g)
    dim = _require_dim(f, g)
    require_same_params(f, g)
    parts = [_take(f, i, _pick(f, i, g, i, tol, matched=False)) for i in range(len(f.params))]
    return SoftSet._wrap(f.params, dim, parts)


def soft_set_algebra(op, f, g, tol=DEFAULT_TOL):
    """Dispatch ``op`` in {union, intersection, difference} on finite soft sets."""
    ops = {"union": union, "intersection": intersection, "difference": difference}
    if op not in ops:
        raise SoftInputError(f"unknown soft set operation {op!r}")
    return ops[op](f, g, tol)


def soft_complement(f, universe, tol=DEFAULT_TOL):
    """Relative complement ``universe(λ) - F(λ)``; F must sit inside the universe."""
    _require_finite(f, universe)
    _require_dim(f, universe)
    require_same_params(f, universe)
    parts = []
    for i, lab in enumerate(f.params):
        if not _inside(f, i, universe, i, tol):
            raise SoftInputError(f"soft set is not contained in the universe at {lab!r}")
        parts.append(_take(universe, i, _pick(universe, i, f, i, tol, matched=False)))
    return SoftSet._wrap(f.params, f.dim, parts)


def _inside(f, i, g, j, tol):
    """Every row of ``f.payload[i]`` has a match in ``g.payload[j]``."""
    if tol == 0:
        return g._keyset_at(j).issuperset(f._keys_at(i))
    return len(_pick(f, i, g, j, tol)) == f.payload[i].shape[0]


def _pointwise_subset(f, g, tol):
    if any(lab not in g.params for lab in f.params):
        return False
    if f.kind is SetKind.FINITE:
        return all(_inside(f, i, g, g.params.index(lab), tol) for i, lab in enumerate(f.params))
    return all(_linalg.span_contains(g.at(lab), b, tol) for lab, b in zip(f.params, f.payload))


def soft_set_relate(f, g, tol=DEFAULT_TOL):
    """Classify F against G as SUBSET, SUPERSET, EQUAL or NONE.

    Subset requires the parameter set of F to be contained in that of G and
    inclusion at every parameter of F.  EQUAL is mutual inclusion.
    """
    if f.kind is not g.kind:
        raise UnsupportedRepresentationError(
            f"cannot relate a {f.kind.value} soft set with a {g.kind.value} one"
        )
    _require_dim(f, g)
    sub = _pointwise_subset(f, g, tol)
    sup = _pointwise_subset(g, f, tol)
    if sub and sup:
        return Relation.EQUAL
    if sub:
        return Relation.SUBSET
    if sup:
        return Relation.SUPERSET
    return Relation.NONE


def contains_element(f, x, tol=DEFAULT_TOL):
    """True iff ``x(λ) ∈ F(λ)`` at every parameter (to tolerance)."""
    require_same_params(f, x)
    if x.dim != f.dim:
        raise SoftInputError(f"dimension mismatch: set in R^{f.dim}, element in R^{x.dim}")
    for row, p in zip(x.values, f.payload):
        if f.kind is SetKind.FINITE:
            if p.shape[0] == 0 or not _within(p, row, tol).any():
                return False
        elif _linalg.span_residual(p, row) > tol:
            return False
    return True
