"""Run scene tasks and collect one result record per task, in input order."""

import math
import time
from dataclasses import dataclass, field

from ..convex import check_convex
from ..core import (
    DEFAULT_TOL,
    Relation,
    SetKind,
    SoftInputError,
    UnsupportedRepresentationError,
    intersection,
    soft_complement,
    soft_set_algebra,
    soft_set_relate,
    union,
)
from ..linear import is_linearly_independent, is_soft_subspace, is_soft_vector_space
from ..norm import (
    PreconditionError,
    distance_to_subspace,
    equivalence_constants,
    independence_constant,
    riesz_witness,
    verify_metric_axioms,
    verify_norm_axioms,
)
from ..seq import (
    NotCauchyError,
    Status,
    check_cauchy_bounded,
    check_convergence,
    construct_limit,
)

PASS, FAIL, ERROR = "pass", "fail", "error"
SEQUENCE_TOL = 1e-3


@dataclass
class Options:
    tol: float | None = None
    samples: int | None = None
    seed: int = 0
    window_n: int = 10_000


@dataclass
class TaskResult:
    index: int
    id: str
    kind: str
    status: str
    outcome: str
    result: dict = field(default_factory=dict)
    message: str | None = None
    seconds: float = 0.0

    def to_dict(self):
        d = {"index": self.index, "id": self.id, "kind": self.kind, "status": self.status,
             "outcome": self.outcome, "result": self.result}
        if self.message is not None:
            d["message"] = self.message
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["index"], d["id"], d["kind"], d["status"], d["outcome"], d.get("result", {}),
                   d.get("message"))


@dataclass
class Report:
    tasks: list = field(default_factory=list)

    def to_dict(self):
        return {"tasks": [t.to_dict() for t in self.tasks]}

    @classmethod
    def from_dict(cls, d):
        return cls([TaskResult.from_dict(t) for t in d["tasks"]])

    @property
    def exit_code(self):
        statuses = {t.status for t in self.tasks}
        if ERROR in statuses:
            return 2
        return 1 if FAIL in statuses else 0


# -- serialization of soft objects ----------------------------------------------------


def num(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def real_map(r):
    return {lab: num(v) for lab, v in zip(r.params, r.values)}


def vector_map(x):
    return {lab: [num(v) for v in row] for lab, row in zip(x.params, x.values)}


def set_map(s):
    if s.kind is SetKind.FINITE:
        return {"kind": "finite", "members": {lab: p.tolist() for lab, p in zip(s.params, s.payload)}}
    return {"kind": "subspace", "bases": {lab: p.T.tolist() for lab, p in zip(s.params, s.payload)}}


# -- handlers: each returns (passed, outcome, result) ---------------------------------------


def _tol(task, opts, default=DEFAULT_TOL):
    if "tol" in task:
        return float(task["tol"])
    return default if opts.tol is None else opts.tol


def _seq_tol(task):
    # sequence windows have their own scale; --tol is for algebraic checks
    return float(task.get("tol", SEQUENCE_TOL))


def _samples(task, opts, default):
    if "samples" in task:
        return int(task["samples"])
    return default if opts.samples is None else opts.samples


def _expect(task, outcome, default):
    want = task.get("expect", default)
    return outcome == want


def _norm_axioms(scene, task, opts):
    fam = scene.objects[task["norm"]]
    space = scene.objects.get(task["space"]) if "space" in task else None
    rep = verify_norm_axioms(fam, scene.dim, _samples(task, opts, 10_000), opts.seed, _tol(task, opts), space)
    outcome = "holds" if rep.passed else "violated"
    return _expect(task, outcome, "holds"), outcome, rep.to_dict()


def _metric_axioms(scene, task, opts):
    fam = scene.objects[task["norm"]]
    rep = verify_metric_axioms(fam, scene.dim, _samples(task, opts, 10_000), opts.seed, _tol(task, opts))
    outcome = "holds" if rep.passed else "violated"
    return _expect(task, outcome, "holds"), outcome, rep.to_dict()


def _independence(scene, task, opts):
    vecs = [scene.objects[nm] for nm in task["vectors"]]
    v = is_linearly_independent(vecs, _tol(task, opts))
    outcome = "independent" if v.independent else "dependent"
    params = vecs[0].params
    result = {"ranks": dict(zip(params, v.ranks)), "witness_parameter": v.witness_parameter,
              "witness_coefficients": None if v.independent else [num(c) for c in v.witness_coefficients]}
    ok = _expect(task, outcome, outcome)
    return ok, outcome, result


def _independence_constant(scene, task, opts):
    fam = scene.objects[task["norm"]]
    vecs = [scene.objects[nm] for nm in task["vectors"]]
    c = independence_constant(fam, vecs, tol=_tol(task, opts))
    return True, "computed", {"c": real_map(c)}


def _equivalence(scene, task, opts):
    f1, f2 = scene.objects[task["norm"]], scene.objects[task["other"]]
    ec = equivalence_constants(f1, f2, scene.dim, _samples(task, opts, 2000), opts.seed)
    return True, "computed", {"a": real_map(ec.a), "b": real_map(ec.b)}


def _riesz(scene, task, opts):
    fam, space = scene.objects[task["norm"]], scene.objects[task["space"]]
    eps = task.get("eps", 0.1)
    eps = scene.objects[eps] if isinstance(eps, str) else float(eps)
    y = riesz_witness(fam, space, eps, _samples(task, opts, 64), opts.seed, _tol(task, opts))
    dist = {lab: num(distance_to_subspace(d, b, row)[0])
            for lab, d, b, row in zip(space.params, fam.descriptors, space.payload, y.values)}
    norms = fam.evaluate(y.values)
    return True, "found", {"witness": vector_map(y), "norm": dict(zip(space.params, map(num, norms))),
                           "distance": dist}


def _convergence(scene, task, opts):
    seq, fam = scene.objects[task["sequence"]], scene.objects[task["norm"]]
    cand = scene.objects[task["candidate"]] if "candidate" in task else None
    n = int(task.get("window_n", opts.window_n))
    v = check_convergence(seq, fam, cand, n, _seq_tol(task))
    result = {"window": list(v.window), "last_residual": real_map(v.last_residual),
              "window_max_residual": real_map(v.window_max_residual),
              "limit": None if v.limit is None else vector_map(v.limit)}
    return _expect(task, v.status.value, Status.CONVERGED.value), v.status.value, result


def _cauchy(scene, task, opts):
    seq, fam = scene.objects[task["sequence"]], scene.objects[task["norm"]]
    n = int(task.get("window_n", opts.window_n))
    r = check_cauchy_bounded(seq, fam, n, _seq_tol(task))
    outcome = "cauchy" if r.cauchy else "not_cauchy"
    result = {"window": list(r.window), "window_diameter": real_map(r.window_diameter),
              "bounded": r.bounded, "bound_m": real_map(r.bound_m), "exact": r.exact,
              "unbounded_window": r.unbounded_window}
    return _expect(task, outcome, "cauchy"), outcome, result


def _limit(scene, task, opts):
    seq, fam = scene.objects[task["sequence"]], scene.objects[task["norm"]]
    n = int(task.get("window_n", opts.window_n))
    try:
        lim = construct_limit(seq, fam, n, _seq_tol(task))
    except NotCauchyError as e:
        return _expect(task, "not_cauchy", "constructed"), "not_cauchy", {"reason": str(e)}
    return _expect(task, "constructed", "constructed"), "constructed", {"limit": vector_map(lim)}


def _convexity(scene, task, opts):
    region = scene.objects[task["region"]]
    trials = _samples(task, opts, 200) if "trials" not in task else int(task["trials"])
    r = check_convex(region, trials, opts.seed, _tol(task, opts))
    outcome = "convex_on_samples" if r.convex_on_samples else "counterexample"
    result = {"pairs": r.pairs, "segment_samples": r.segment_samples, "counterexample": None}
    if r.counterexample is not None:
        ce = r.counterexample
        result["counterexample"] = {"x1": vector_map(ce["x1"]), "x2": vector_map(ce["x2"]), "t": real_map(ce["t"])}
    return _expect(task, outcome, "convex_on_samples"), outcome, result


def _set_algebra(scene, task, opts):
    op = task.get("op")
    tol = _tol(task, opts)
    left = scene.objects[task["left"]]
    right = scene.objects.get(task.get("right")) if "right" in task else None
    universe = scene.objects.get(task.get("universe")) if "universe" in task else None

    def need(x, name):
        if x is None:
            raise SoftInputError(f"set_algebra op {op!r} needs field {name!r}")
        return x

    if op in ("union", "intersection", "difference"):
        out = soft_set_algebra(op, left, need(right, "right"), tol)
        return True, "computed", {"set": set_map(out), "parameters": list(out.params)}
    if op == "complement":
        out = soft_complement(left, need(universe, "universe"), tol)
        return True, "computed", {"set": set_map(out), "parameters": list(out.params)}
    if op == "relate":
        rel = soft_set_relate(left, need(right, "right"), tol).value
        return _expect(task, rel, rel), rel, {}
    if op == "is_vector_space":
        outcome = "vector_space" if is_soft_vector_space(left, tol) else "not_vector_space"
        return _expect(task, outcome, outcome), outcome, {}
    if op == "de_morgan":
        right, universe = need(right, "right"), need(universe, "universe")
        c = lambda s: soft_complement(s, universe, tol)  # noqa: E731
        first = soft_set_relate(c(union(left, right, tol)), intersection(c(left), c(right), tol), tol)
        second = soft_set_relate(c(intersection(left, right, tol)), union(c(left), c(right), tol), tol)
        ok = first is Relation.EQUAL and second is Relation.EQUAL
        outcome = "holds" if ok else "violated"
        return _expect(task, outcome, "holds"), outcome, {
            "union_identity": first.value, "intersection_identity": second.value}
    raise SoftInputError(f"unknown set_algebra op {op!r}")


def _subspace_check(scene, task, opts):
    sub, space = scene.objects[task["sub"]], scene.objects[task["space"]]
    ok = is_soft_subspace(sub, space, _samples(task, opts, 32), opts.seed, _tol(task, opts))
    outcome = "subspace" if ok else "not_subspace"
    return _expect(task, outcome, "subspace"), outcome, {}


HANDLERS = {
    "norm_axioms": _norm_axioms,
    "metric_axioms": _metric_axioms,
    "independence": _independence,
    "independence_constant": _independence_constant,
    "equivalence": _equivalence,
    "riesz": _riesz,
    "convergence": _convergence,
    "cauchy": _cauchy,
    "limit": _limit,
    "convexity": _convexity,
    "set_algebra": _set_algebra,
    "subspace_check": _subspace_check,
}


def run_task(scene, index, task, opts):
    kind = task["kind"]
    tid = str(task.get("id", f"task{index}"))
    t0 = time.perf_counter()
    try:
        ok, outcome, result = HANDLERS[kind](scene, task, opts)
        res = TaskResult(index, tid, kind, PASS if ok else FAIL, outcome, result)
        if not ok and "expect" in task:
            res.message = f"expected {task['expect']!r}, got {outcome!r}"
    except (PreconditionError, UnsupportedRepresentationError, SoftInputError) as e:
        res = TaskResult(index, tid, kind, ERROR, "precondition", {}, f"{type(e).__name__}: {e}")
    res.seconds = time.perf_counter() - t0
    return res


def execute(scene, opts=None):
    """Run every task of a parsed scene; the report keeps input order."""
    opts = opts or Options()
    return Report([run_task(scene, i, t, opts) for i, t in enumerate(scene.tasks)])

