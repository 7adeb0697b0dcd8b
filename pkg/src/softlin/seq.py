"""Sequences of soft vectors: windowed convergence, Cauchy and boundedness checks.

Convergence is only ever decided on a finite prefix ``x̃₁..x̃_N``.  All
window checks look at the final quarter ``[⌈3N/4⌉, N]`` of the prefix, and
verdicts say so: a CONVERGED verdict is empirical evidence, not a proof.
"""

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    SetKind,
    SoftInputError,
    SoftReal,
    SoftVector,
    _params,
    require_same_params,
)
from .norm import PreconditionError

# exact pairwise diameters are computed up to this many terms
EXACT_DIAMETER_LIMIT = 4096
SIGN_PATTERN_LIMIT = 12


class NotCauchyError(PreconditionError):
    """Raised when a limit is requested from a window that is not Cauchy."""


class SequenceSource:
    """Base class: a pure map ``n -> x̃ₙ`` (``n >= 1``) into soft vectors of ``R^dim``."""

    params = None
    dim = None
    length = None

    def values(self, ns):
        """Stacked values ``(len(ns), k, dim)`` for 1-based indices ``ns``."""
        raise NotImplementedError

    def __call__(self, n):
        return SoftVector(self.params, self.values(np.array([n]))[0])

    def limit(self):
        """Analytic limit when the closed form has one, else ``None``."""
        return None

    def _check_n(self, ns):
        ns = np.asarray(ns)
        if ns.size and ns.min() < 1:
            raise SoftInputError("sequence indices start at 1")
        if self.length is not None and ns.size and ns.max() > self.length:
            raise SoftInputError(
                f"tabulated sequence has {self.length} terms, index {int(ns.max())} requested"
            )
        return ns


class Tabulated(SequenceSource):
    """Finite table of terms; asking past the end is an error."""

    def __init__(self, params, terms):
        self.params = _params(params)
        terms = [t.values if isinstance(t, SoftVector) else t for t in terms]
        arr = np.asarray(terms, dtype=float)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[1] != len(self.params) or arr.shape[0] == 0:
            raise SoftInputError(f"tabulated terms must have shape (N, {len(self.params)}, dim)")
        arr.setflags(write=False)
        self.terms = arr
        self.dim = arr.shape[2]
        self.length = arr.shape[0]

    def values(self, ns):
        ns = self._check_n(ns)
        return self.terms[ns - 1]


class Generated(SequenceSource):
    """Closed-form ``x̃ₙ = c + u/n + a(-1)ⁿ + l·n`` with per-parameter coefficients.

    Each coefficient is a ``(k, dim)`` array (or anything broadcastable to
    it); omitted coefficients are zero.
    """

    TERMS = ("const", "inv_n", "alt", "lin")

    def __init__(self, params, dim, const=None, inv_n=None, alt=None, lin=None):
        self.params = _params(params)
        self.dim = int(dim)
        shape = (len(self.params), self.dim)
        self.coef = {}
        for name, c in zip(self.TERMS, (const, inv_n, alt, lin)):
            if c is None:
                continue
            if isinstance(c, SoftVector):
                c = c.values
            elif isinstance(c, SoftReal):
                c = c.values[:, None]
            arr = np.broadcast_to(np.asarray(c, dtype=float), shape).copy()
            arr.setflags(write=False)
            self.coef[name] = arr

    def values(self, ns):
        ns = self._check_n(ns).astype(float)
        out = np.zeros((ns.size, len(self.params), self.dim))
        nb = ns[:, None, None]
        if "const" in self.coef:
            out += self.coef["const"]
        if "inv_n" in self.coef:
            out += self.coef["inv_n"] / nb
        if "alt" in self.coef:
            out += self.coef["alt"] * np.where(ns % 2 == 0, 1.0, -1.0)[:, None, None]
        if "lin" in self.coef:
            out += self.coef["lin"] * nb
        return out

    def limit(self):
        for name in ("alt", "lin"):
            if name in self.coef and np.any(self.coef[name] != 0):
                return None
        c = self.coef.get("const", np.zeros((len(self.params), self.dim)))
        return SoftVector(self.params, c)


class Combined(SequenceSource):
    """Lazy termwise ``s1 + s2`` or ``λ̃ₙ · x̃ₙ`` (``s2`` a sequence in ``R^1``)."""

    def __init__(self, op, s1, s2):
        if op not in ("add", "scalar_mul"):
            raise SoftInputError(f"unknown sequence combination {op!r}")
        require_same_params(s1, s2)
        if op == "add" and s1.dim != s2.dim:
            raise SoftInputError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
        if op == "scalar_mul" and s2.dim != 1:
            raise SoftInputError("scalar_mul needs a scalar sequence (dimension 1) as second operand")
        self.op, self.s1, self.s2 = op, s1, s2
        self.params = s1.params
        self.dim = s1.dim
        lengths = [s.length for s in (s1, s2) if s.length is not None]
        self.length = min(lengths) if lengths else None

    def values(self, ns):
        ns = self._check_n(ns)
        a, b = self.s1.values(ns), self.s2.values(ns)
        return a + b if self.op == "add" else a * b

    def limit(self):
        la, lb = self.s1.limit(), self.s2.limit()
        if la is None or lb is None:
            return None
        if self.op == "add":
            return la + lb
        return lb.component() * la


def combine_sequences(op, s1, s2):
    """Termwise sum of two sequences, or product with a scalar sequence."""
    return Combined(op, s1, s2)


def scalar_sequence(params, const=None, inv_n=None, alt=None, lin=None):
    """A generated sequence of soft reals (dimension 1); coefficients are length-k."""
    params = _params(params)

    def col(c):
        if c is None:
            return None
        if isinstance(c, SoftReal):
            return c.values[:, None]
        return np.broadcast_to(np.asarray(c, dtype=float), (len(params),))[:, None]

    return Generated(params, 1, col(const), col(inv_n), col(alt), col(lin))


class Status(enum.Enum):
    CONVERGED = "converged"
    CAUCHY_ONLY = "cauchy_only"
    DIVERGENT_WINDOW = "divergent_window"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConvergenceVerdict:
    status: Status
    limit: SoftVector | None
    last_residual: SoftReal
    window: tuple
    window_max_residual: SoftReal


@dataclass(frozen=True)
class CauchyReport:
    cauchy: bool
    bounded: bool
    bound_m: SoftReal
    window: tuple
    window_diameter: SoftReal
    exact: bool
    unbounded_window: bool


def window_range(n):
    if n < 2:
        raise SoftInputError("N must be at least 2")
    return math.ceil(3 * n / 4), n


def _terms(seq, lo, hi):
    return seq.values(np.arange(lo, hi + 1))


def _diameter_one(desc, x):
    """``max_{i,j} ‖xᵢ - xⱼ‖`` for rows of ``x`` ``(W, n)``; second result says if exact."""
    w, n = x.shape
    wts = np.ones(n) if desc.weights is None else np.asarray(desc.weights, dtype=float)
    if desc.p == np.inf:
        return float((wts * (x.max(axis=0) - x.min(axis=0))).max()), True
    if desc.p == 1.0 and n <= SIGN_PATTERN_LIMIT:
        # ‖v‖₁ = max over sign vectors s of s·v; the sign of one coordinate is free
        signs = np.array([(1.0,) + t for t in itertools.product((1.0, -1.0), repeat=n - 1)])
        proj = x @ (signs * wts).T
        return float((proj.max(axis=0) - proj.min(axis=0)).max()), True
    if desc.p == 2.0 and w <= EXACT_DIAMETER_LIMIT:
        y = x * np.sqrt(wts)
        y = y - y.mean(axis=0)
        sq = np.einsum("ij,ij->i", y, y)
        best = 0.0
        for s0 in range(0, w, 1024):
            blk = sq[s0:s0 + 1024, None] + sq[None, :] - 2.0 * (y[s0:s0 + 1024] @ y.T)
            best = max(best, float(blk.max()))
        return math.sqrt(max(best, 0.0)), True
    if w <= EXACT_DIAMETER_LIMIT:
        best = 0.0
        for s0 in range(0, w, 256):
            best = max(best, float(desc(x[s0:s0 + 256, None] - x[None, :]).max()))
        return best, True
    return 2.0 * float(desc(x - x[-1]).max()), False


def _diameter(fam, vals):
    """Per-parameter ``max_{i,j} ‖xᵢ - xⱼ‖`` over stacked terms ``(W, k, n)``.

    Exact for p = inf (coordinate spreads) and p = 1 (spreads of sign-vector
    projections), and for p = 2 on windows of at most
    ``EXACT_DIAMETER_LIMIT`` terms via a centred Gram matrix.  Longer p = 2
    windows get the triangle bound ``2 max_i ‖xᵢ - x_W‖``; the second
    result reports whether every parameter was exact.
    """
    out = [_diameter_one(d, vals[:, i, :]) for i, d in enumerate(fam.descriptors)]
    return np.array([v for v, _ in out]), all(e for _, e in out)


def check_cauchy_bounded(seq, fam, n=10_000, tol=1e-3):
    """Cauchy test on the final-quarter window plus the bound ``M̃`` over ``1..N``.

    ``bounded`` is always true for a finite prefix; ``bound_m`` reports
    ``max_{1<=i,j<=N} ‖x̃ᵢ - x̃ⱼ‖`` (or its triangle bound, see ``exact``).
    ``unbounded_window`` flags prefixes whose spread from the first term
    keeps growing: the radius over ``1..N`` exceeds 1.5 times the radius
    over the first half.
    """
    require_same_params(seq, fam)
    fam.check_dim(seq.dim)
    lo, hi = window_range(n)
    full = _terms(seq, 1, hi)
    win = full[lo - 1:]
    wdiam, wexact = _diameter(fam, win)
    bound, bexact = _diameter(fam, full)
    radius = fam.evaluate(full - full[0])
    half = radius[: math.ceil(hi / 2)].max(axis=0)
    growing = bool(np.any(radius.max(axis=0) > 1.5 * half + tol))
    return CauchyReport(
        cauchy=bool(np.all(wdiam < tol)),
        bounded=True,
        bound_m=SoftReal(seq.params, bound),
        window=(lo, hi),
        window_diameter=SoftReal(seq.params, wdiam),
        exact=wexact and bexact,
        unbounded_window=growing,
    )


def _window_cauchy(seq, fam, n, tol):
    lo, hi = window_range(n)
    win = _terms(seq, lo, hi)
    diam, _ = _diameter(fam, win)
    return bool(np.all(diam < tol)), win, diam


def construct_limit(seq, fam, n=10_000, tol=1e-3):
    """Limit estimate ``x̃_N`` once the window is Cauchy.

    Mirrors the completeness argument: the limit is built parameter by
    parameter from the tail of the sequence.
    """
    require_same_params(seq, fam)
    fam.check_dim(seq.dim)
    ok, win, diam = _window_cauchy(seq, fam, n, tol)
    if not ok:
        bad = [lab for lab, d in zip(seq.params, diam) if not d < tol]
        raise NotCauchyError(
            f"window {window_range(n)} is not Cauchy at tol={tol}: "
            + ", ".join(f"{lab}: diameter {d:.3g}" for lab, d in zip(seq.params, diam) if lab in bad)
        )
    return SoftVector(seq.params, win[-1])


def check_convergence(seq, fam, candidate=None, n=10_000, tol=1e-3):
    """Windowed convergence verdict.

    With a candidate: CONVERGED iff ``‖x̃ₙ - candidate‖ < tol`` at every
    parameter for every ``n`` in the window.  Without one the limit is first
    estimated with :func:`construct_limit`.  Otherwise CAUCHY_ONLY when the
    window is Cauchy and DIVERGENT_WINDOW when it is not; INCONCLUSIVE when
    the terms are not finite.
    """
    require_same_params(seq, fam)
    fam.check_dim(seq.dim)
    lo, hi = window_range(n)
    win = _terms(seq, lo, hi)
    k = len(seq.params)
    if not np.all(np.isfinite(win)):
        nan = SoftReal(seq.params, np.full(k, np.nan))
        return ConvergenceVerdict(Status.INCONCLUSIVE, None, nan, (lo, hi), nan)
    diam, _ = _diameter(fam, win)
    cauchy = bool(np.all(diam < tol))
    if candidate is None:
        # residuals against the last term still describe a divergent window
        ref = win[-1]
        if not cauchy:
            resid = fam.evaluate(win - ref)
            return ConvergenceVerdict(
                Status.DIVERGENT_WINDOW, None, SoftReal(seq.params, resid[-1]), (lo, hi),
                SoftReal(seq.params, resid.max(axis=0)),
            )
        candidate = SoftVector(seq.params, ref)
    require_same_params(seq, candidate)
    resid = fam.evaluate(win - candidate.values)
    wmax = resid.max(axis=0)
    last = SoftReal(seq.params, resid[-1])
    wmax_r = SoftReal(seq.params, wmax)
    if np.all(wmax < tol):
        return ConvergenceVerdict(Status.CONVERGED, candidate, last, (lo, hi), wmax_r)
    status = Status.CAUCHY_ONLY if cauchy else Status.DIVERGENT_WINDOW
    return ConvergenceVerdict(status, None, last, (lo, hi), wmax_r)


@dataclass(frozen=True)
class BoundedSetReport:
    bounded: bool
    k: SoftReal | None


def is_bounded_soft_set(f, fam):
    """Bound ``k̃`` with ``‖x̃‖ ⩽ k̃`` for every soft element of ``F``.

    Finite sets are always bounded (the max norm per parameter); a
    subspace set is bounded only if it is the zero subspace everywhere.
    """
    require_same_params(f, fam)
    fam.check_dim(f.dim)
    if f.kind is SetKind.SUBSPACE:
        if all(b.shape[1] == 0 for b in f.payload):
            return BoundedSetReport(True, SoftReal.zero(f.params))
        return BoundedSetReport(False, None)
    if any(rows.shape[0] == 0 for rows in f.payload):
        raise SoftInputError("boundedness is defined for soft sets non-empty at every parameter")
    k = [float(d(rows).max()) for d, rows in zip(fam.descriptors, f.payload)]
    return BoundedSetReport(True, SoftReal(f.params, k))


def subspace_closure(space):
    """Closure of a soft subspace; finite-dimensional subspaces are already closed."""
    space._require_kind(SetKind.SUBSPACE, "subspace_closure")
    return space
