"""Built-in theorem suite: twelve numbered checks run at fixed sizes.

Each ``criterion_*`` function returns a :class:`CriterionResult` whose
``detail`` holds only deterministic numbers, so the json rendering of a run
is byte-identical for a fixed seed.  Wall-clock time is kept separately.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .convex import BallRegion, SubspaceRegion, check_convex, intersect_regions
from .core import (
    ParameterSet,
    Relation,
    SoftReal,
    SoftSet,
    SoftVector,
    SoftVectorSpace,
    intersection,
    soft_complement,
    soft_set_relate,
    union,
)
from .linear import is_linearly_independent
from .norm import (
    INF,
    P1,
    P2,
    BallKind,
    BallSpec,
    NormDescriptor,
    NormFamily,
    PInf,
    equivalence_candidates,
    equivalence_constants,
    independence_constant,
    riesz_witness,
    verify_metric_axioms,
    verify_norm_axioms,
)
from .seq import (
    Generated,
    Status,
    Tabulated,
    check_cauchy_bounded,
    check_convergence,
    combine_sequences,
    construct_limit,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self):
        return {"id": self.number, "name": self.name, "passed": self.passed, "detail": self.detail}


def random_params(rng, max_k=5):
    k = int(rng.integers(1, max_k + 1))
    return ParameterSet([f"l{i}" for i in range(k)])


def random_descriptor(rng, n):
    p = (1, 2, INF)[int(rng.integers(3))]
    if rng.random() < 0.5:
        return NormDescriptor(p)
    return NormDescriptor(p, tuple(rng.uniform(0.5, 2.0, n)))


def random_family(rng, params, n):
    return NormFamily(params, [random_descriptor(rng, n) for _ in params])


def _f(x):
    return float(x)


# 1 ---------------------------------------------------------------------------


def criterion_norm_axioms(seed=0, families=20, samples=10_000):
    rng = np.random.default_rng(seed)
    total = 0
    for i in range(families):
        params = random_params(rng)
        n = int(rng.integers(1, 7))
        rep = verify_norm_axioms(random_family(rng, params, n), n, samples, seed=seed + i)
        total += len(rep.violations)
    return CriterionResult(1, "norm axioms N1-N4", total == 0,
                           {"families": families, "samples": samples, "violations": total})


# 2 ---------------------------------------------------------------------------


def _random_subsets(rng, params, points):
    m = points.shape[0]
    picks = rng.random((len(params), m)) < 0.5
    return {lab: [tuple(points[j]) for j in range(m) if picks[i, j]] for i, lab in enumerate(params)}


def criterion_de_morgan(seed=0, trials=1000):
    """Both De Morgan identities on random finite soft sets, matched exactly."""
    rng = np.random.default_rng(seed)
    failures = oracle_mismatch = 0
    for _ in range(trials):
        params = random_params(rng)
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, 21))
        points = np.unique(rng.integers(-3, 4, size=(m, n)), axis=0).astype(float)
        uni = {lab: [tuple(p) for p in points] for lab in params}
        fd, gd = _random_subsets(rng, params, points), _random_subsets(rng, params, points)
        U = SoftSet.finite(params, n, uni, tol=0)
        F = SoftSet.finite(params, n, fd, tol=0)
        G = SoftSet.finite(params, n, gd, tol=0)
        lhs1 = soft_complement(union(F, G, 0), U, 0)
        rhs1 = intersection(soft_complement(F, U, 0), soft_complement(G, U, 0), 0)
        lhs2 = soft_complement(intersection(F, G, 0), U, 0)
        rhs2 = union(soft_complement(F, U, 0), soft_complement(G, U, 0), 0)
        if soft_set_relate(lhs1, rhs1, 0) is not Relation.EQUAL or soft_set_relate(lhs2, rhs2, 0) is not Relation.EQUAL:
            failures += 1
        # same identities on plain Python sets
        fo = {lab: frozenset(v) for lab, v in fd.items()}
        go = {lab: frozenset(v) for lab, v in gd.items()}
        univ = frozenset(map(tuple, points))
        want = oracles.set_complement(oracles.set_union(fo, go), univ)
        got = {lab: frozenset(map(tuple, lhs1.at(lab))) for lab in params}
        if want != got:
            oracle_mismatch += 1
    ok = failures == 0 and oracle_mismatch == 0
    return CriterionResult(2, "De Morgan identities", ok,
                           {"trials": trials, "failures": failures, "oracle_mismatches": oracle_mismatch})


# 3 ---------------------------------------------------------------------------


def _random_family_values(rng, k, m, n):
    vals = rng.integers(-3, 4, size=(k, m, n)).astype(float)
    for i in range(k):
        if rng.random() < 0.4:
            j = int(rng.integers(m))
            others = [t for t in range(m) if t != j]
            coef = rng.integers(-2, 3, size=len(others)).astype(float)
            vals[i, j] = coef @ vals[i, others] if others else 0.0
    return vals


def criterion_independence(seed=0, trials=1000):
    rng = np.random.default_rng(seed)
    disagree = 0
    worst = 0.0
    for _ in range(trials):
        params = random_params(rng)
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 7))
        vals = _random_family_values(rng, len(params), m, n)
        vecs = [SoftVector(params, vals[:, j]) for j in range(m)]
        verdict = is_linearly_independent(vecs)
        ranks = [oracles.exact_rank(vals[i]) for i in range(len(params))]
        expect = all(r == m for r in ranks)
        if verdict.independent != expect or list(verdict.ranks) != ranks:
            disagree += 1
            continue
        if not expect:
            first = next(i for i, r in enumerate(ranks) if r < m)
            if verdict.witness_parameter != params.labels[first]:
                disagree += 1
                continue
            c = np.array(verdict.witness_coefficients)
            worst = max(worst, float(np.abs(c @ vals[first]).max()))
    ok = disagree == 0 and worst <= 1e-8
    return CriterionResult(3, "per-parameter independence", ok,
                           {"trials": trials, "disagreements": disagree, "max_witness_residual": worst})


# 4 ---------------------------------------------------------------------------


def remark_vectors(n):
    """``k̃`` and ``α̃`` over labels ``1..n`` with ``k̃·α̃ = Θ`` though neither vanishes."""
    params = ParameterSet([str(i) for i in range(1, n + 1)])
    k = SoftReal(params, [1.0] + [0.0] * (n - 1))
    alpha = np.ones((n, n)) - np.eye(n)
    alpha[0] = 0.0
    return k, SoftVector(params, alpha)


def criterion_null_vector(seed=0, draws=10_000):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(draws):
        params = random_params(rng)
        n = int(rng.integers(1, 7))
        a = SoftVector(params, rng.normal(size=(len(params), n)) * 10.0 ** rng.uniform(-3, 3))
        k = SoftReal(params, rng.normal(size=len(params)))
        theta = SoftVector.zero(params, n)
        if not (np.all((SoftReal.zero(params) * a).values == 0)
                and np.all((k * theta).values == 0)
                and np.array_equal((SoftReal.constant(params, -1.0) * a).values, (-a).values)):
            bad += 1
    k, alpha = remark_vectors(4)
    prod = k * alpha
    remark = bool(np.all(prod.values == 0) and np.any(k.values != 0) and not alpha.is_null())
    return CriterionResult(4, "null vector identities and zero divisors", bad == 0 and remark,
                           {"draws": draws, "failures": bad, "zero_divisor_example": remark})


# 5 ---------------------------------------------------------------------------


def criterion_metric(seed=0, families=20, samples=10_000):
    rng = np.random.default_rng(seed)
    total = 0
    for i in range(families):
        params = random_params(rng)
        n = int(rng.integers(1, 7))
        rep = verify_metric_axioms(random_family(rng, params, n), n, samples, seed=seed + i, tol=1e-9)
        total += len(rep.violations)
    return CriterionResult(5, "induced metric M1-M4 and translation identities", total == 0,
                           {"families": families, "samples": samples, "violations": total})


# 6 ---------------------------------------------------------------------------


def _soundness_failures(fam, vecs, c, rng, tuples):
    k, m = len(fam.params), len(vecs)
    stacked = np.stack([v.values for v in vecs], axis=1)  # (k, m, n)
    alpha = rng.normal(size=(tuples, k, m)) * 10.0 ** rng.uniform(-2, 2, size=(tuples, 1, 1))
    combo = np.einsum("tkm,kmn->tkn", alpha, stacked)
    lhs = fam.evaluate(combo)
    rhs = c.values * np.abs(alpha).sum(axis=2)
    return int(np.sum(lhs < rhs * (1 - 1e-9)))


def criterion_independence_constant(seed=0, tuples=10_000):
    rng = np.random.default_rng(seed)
    params = ParameterSet(["a", "b", "c"])
    e = [SoftVector.constant(params, row) for row in np.eye(2)]
    c2 = independence_constant(NormFamily.constant(params, P2), e)
    c1 = independence_constant(NormFamily.constant(params, P1), e)
    p2_ok = bool(np.all((c2.values >= 0.7070) & (c2.values <= 0.7072)))
    p1_ok = bool(np.all(np.abs(c1.values - 1.0) <= 1e-9))
    fails = 0
    fails += _soundness_failures(NormFamily.constant(params, P2), e, c2, rng, tuples)
    fails += _soundness_failures(NormFamily.constant(params, P1), e, c1, rng, tuples)
    # a random family of vectors under a random family of norms
    for _ in range(5):
        rp = random_params(rng)
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, n + 1))
        vecs = [SoftVector(rp, rng.normal(size=(len(rp), n))) for _ in range(m)]
        fam = random_family(rng, rp, n)
        fails += _soundness_failures(fam, vecs, independence_constant(fam, vecs), rng, tuples // 5)
    ok = p2_ok and p1_ok and fails == 0
    return CriterionResult(6, "independence constant", ok, {
        "c_p2": [_f(v) for v in c2.values], "c_p1": [_f(v) for v in c1.values],
        "soundness_failures": fails,
    })


# 7 ---------------------------------------------------------------------------


def criterion_equivalence(seed=0, pairs=20, samples=2000):
    rng = np.random.default_rng(seed)
    params = ParameterSet(["a", "b", "c"])
    ec = equivalence_constants(NormFamily.constant(params, P1), NormFamily.constant(params, PInf), 3,
                               samples, seed)
    exact = bool(np.all(np.abs(ec.a.values - 1) <= 1e-9) and np.all(np.abs(ec.b.values - 3) <= 1e-9))
    broken = 0
    for i in range(pairs):
        rp = random_params(rng)
        n = int(rng.integers(1, 7))
        f1, f2 = random_family(rng, rp, n), random_family(rng, rp, n)
        c = equivalence_constants(f1, f2, n, samples, seed + i)
        dirs = equivalence_candidates(n, samples, seed + i)
        x = dirs * 10.0 ** rng.uniform(-3, 3, size=(dirs.shape[0], 1))
        xs = np.repeat(x[:, None, :], len(rp), axis=1)
        n1, n2 = f1.evaluate(xs), f2.evaluate(xs)
        slack = 1e-12 * n1
        broken += int(np.sum(c.a.values * n2 > n1 + slack) + np.sum(n1 > c.b.values * n2 + slack))
    return CriterionResult(7, "norm equivalence constants", exact and broken == 0, {
        "a": [_f(v) for v in ec.a.values], "b": [_f(v) for v in ec.b.values],
        "pairs": pairs, "sandwich_failures": broken,
    })


# 8 ---------------------------------------------------------------------------


def criterion_riesz(seed=0, instances=50):
    rng = np.random.default_rng(seed)
    norm_err = 0.0
    min_margin = math.inf
    failures = 0
    for i in range(instances):
        params = random_params(rng, 3)
        n = int(rng.integers(2, 4))
        fam = random_family(rng, params, n)
        bases = [rng.normal(size=(n, int(rng.integers(0, n)))) for _ in params]
        space = SoftVectorSpace.from_bases(params, n, bases)
        eps = SoftReal(params, rng.uniform(0.05, 0.9, len(params)))
        y = riesz_witness(fam, space, eps, seed=seed + i)
        norm_err = max(norm_err, float(np.abs(fam.evaluate(y.values) - 1).max()))
        for d, b, row, e in zip(fam.descriptors, space.payload, y.values, eps.values):
            lower, _ = oracles.grid_distance(d.p, d.weights, b, row, step=1e-3)
            margin = lower - (1 - e)
            min_margin = min(min_margin, margin)
            failures += int(margin <= 0)
    ok = failures == 0 and norm_err <= 1e-9
    return CriterionResult(8, "Riesz witnesses", ok, {
        "instances": instances, "max_norm_error": norm_err,
        "min_distance_margin": float(min_margin), "failures": failures,
    })


# 9 ---------------------------------------------------------------------------


def _cauchy_case(rng, i):
    """A Cauchy-by-construction sequence, its analytic limit and the window size."""
    params = random_params(rng)
    n = 1 if i % 2 == 0 else int(rng.integers(2, 5))
    k = len(params)
    c = rng.uniform(-5, 5, size=(k, n))
    if i % 4 < 2:
        seq = Generated(params, n, const=c, inv_n=rng.uniform(-0.01, 0.01, size=(k, n)))
        return seq, c, 100_000
    length = 2000
    rho = rng.uniform(0.5, 0.9, size=(k, 1))
    u = rng.uniform(-1, 1, size=(k, n))
    a = rng.uniform(-0.5, 0.5, size=(k, n))
    ns = np.arange(1, length + 1, dtype=float)[:, None, None]
    terms = c + u * rho ** ns + a * (-1.0) ** ns / ns**2
    return Tabulated(params, terms), c, length


def criterion_completeness(seed=0, cases=100, tol=1e-6):
    rng = np.random.default_rng(seed)
    worst = 0.0
    chain_breaks = 0
    for i in range(cases):
        seq, c, N = _cauchy_case(rng, i)
        fam = NormFamily.constant(seq.params, P2)
        lim = construct_limit(seq, fam, n=N, tol=tol)
        worst = max(worst, float(np.abs(lim.values - c).max()))
        conv = check_convergence(seq, fam, SoftVector(seq.params, c), n=N, tol=tol)
        cb = check_cauchy_bounded(seq, fam, n=N, tol=2 * tol)
        if not (conv.status is Status.CONVERGED and cb.cauchy and cb.bounded
                and np.all(np.isfinite(cb.bound_m.values))):
            chain_breaks += 1
    ok = worst < tol and chain_breaks == 0
    return CriterionResult(9, "completeness replay", ok,
                           {"cases": cases, "max_limit_error": worst, "chain_breaks": chain_breaks})


# 10 --------------------------------------------------------------------------


def criterion_limit_algebra(seed=0, cases=100, tol=1e-3, window_n=100_000):
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for i in range(cases):
        params = random_params(rng)
        k, n = len(params), int(rng.integers(1, 5))
        s1 = Generated(params, n, const=rng.uniform(-2, 2, (k, n)), inv_n=rng.uniform(-1, 1, (k, n)))
        if i % 2 == 0:
            s2 = Generated(params, n, const=rng.uniform(-2, 2, (k, n)), inv_n=rng.uniform(-1, 1, (k, n)))
            combo = combine_sequences("add", s1, s2)
            want = s1.limit().values + s2.limit().values
        else:
            s2 = Generated(params, 1, const=rng.uniform(-2, 2, (k, 1)), inv_n=rng.uniform(-1, 1, (k, 1)))
            combo = combine_sequences("scalar_mul", s1, s2)
            want = s2.limit().values * s1.limit().values
        fam = random_family(rng, params, n)
        verdict = check_convergence(combo, fam, n=window_n, tol=tol)
        if verdict.status is not Status.CONVERGED:
            failures += 1
            continue
        err = float(fam.evaluate(verdict.limit.values - want).max())
        worst = max(worst, err)
        failures += int(err >= 2 * tol)
    return CriterionResult(10, "limit algebra", failures == 0,
                           {"cases": cases, "failures": failures, "max_limit_error": worst})


# 11 --------------------------------------------------------------------------


def _sphere_counterexample_confirmed(region, report, tol):
    ce = report.counterexample
    if ce is None:
        return False
    y = ce["t"].values[:, None] * ce["x1"].values + (1 - ce["t"].values[:, None]) * ce["x2"].values
    d = region.fam.evaluate(y - region.ball.center.values)
    return bool(np.any(np.abs(d - region.ball.radius.values) > tol))


def criterion_convexity(seed=0, trials=200, tol=1e-9):
    rng = np.random.default_rng(seed)
    params = ParameterSet(["a", "b", "c"])
    results = {}
    closed_bad = subspace_bad = 0
    regions = []
    for i in range(5):
        n = int(rng.integers(1, 5))
        fam = random_family(rng, params, n)
        centre = SoftVector(params, rng.normal(size=(3, n)))
        ball = BallSpec(centre, SoftReal(params, rng.uniform(0.5, 3, 3)), BallKind.CLOSED)
        reg = BallRegion(fam, ball)
        closed_bad += int(not check_convex(reg, trials, seed + i, tol).convex_on_samples)
        if n >= 2:
            space = SoftVectorSpace.from_bases(params, n, [rng.normal(size=(n, n - 1)) for _ in params])
            sreg = SubspaceRegion(space)
            subspace_bad += int(not check_convex(sreg, trials, seed + i, tol).convex_on_samples)
            regions.append((reg, sreg))
    results["closed_ball_failures"] = closed_bad
    results["subspace_failures"] = subspace_bad
    # boundary-only region in R^2
    fam = NormFamily.constant(params, P2)
    sph = BallRegion(fam, BallSpec(SoftVector.zero(params, 2), SoftReal.constant(params, 1.0), BallKind.SPHERE))
    srep = check_convex(sph, trials, seed, tol)
    results["sphere_counterexample"] = _sphere_counterexample_confirmed(sph, srep, tol)
    # intersections: two overlapping closed balls, and ball with subspace
    inter_bad = 0
    c1 = SoftVector(params, np.zeros((3, 2)))
    c2 = SoftVector(params, np.full((3, 2), 0.5))
    b1 = BallRegion(fam, BallSpec(c1, SoftReal.constant(params, 1.0), BallKind.CLOSED))
    b2 = BallRegion(NormFamily.constant(params, P1), BallSpec(c2, SoftReal.constant(params, 1.0), BallKind.CLOSED))
    inter_bad += int(not check_convex(intersect_regions([b1, b2]), trials, seed, tol).convex_on_samples)
    for reg, sreg in regions:
        # centre the ball on the subspace so the intersection is never empty
        centre = SoftVector(params, sreg.project(reg.ball.center.values))
        moved = BallRegion(reg.fam, BallSpec(centre, reg.ball.radius, BallKind.CLOSED))
        inter_bad += int(not check_convex(intersect_regions([moved, sreg]), trials, seed, tol).convex_on_samples)
    results["intersection_failures"] = inter_bad
    results["segment_samples_per_region"] = trials * 5
    ok = closed_bad == 0 and subspace_bad == 0 and results["sphere_counterexample"] and inter_bad == 0
    return CriterionResult(11, "convexity", ok, results)


CRITERIA = (
    criterion_norm_axioms,
    criterion_de_morgan,
    criterion_independence,
    criterion_null_vector,
    criterion_metric,
    criterion_independence_constant,
    criterion_equivalence,
    criterion_riesz,
    criterion_completeness,
    criterion_limit_algebra,
    criterion_convexity,
)


def run_all(seed=0):
    out = []
    for fn in CRITERIA:
        t0 = time.perf_counter()
        res = fn(seed=seed)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
