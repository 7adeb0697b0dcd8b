"""
Sequences on a finite window, and sampled convexity
===================================================

Convergence is judged on the last quarter of the first N terms, so every
verdict is empirical and states its window.  Convexity is checked by
sampling segments between members of a region.
"""

# %%
from softlin import (
    P2,
    BallKind,
    BallRegion,
    BallSpec,
    Generated,
    NormFamily,
    ParameterSet,
    SoftReal,
    SoftVector,
    check_cauchy_bounded,
    check_convergence,
    check_convex,
    combine_sequences,
    construct_limit,
)

A = ParameterSet(["a", "b"])
fam = NormFamily.constant(A, P2)

inv = Generated(A, 1, inv_n=1.0)  # 1/n
half = Generated(A, 1, const=0.5)
v = check_convergence(combine_sequences("add", inv, half), fam, SoftVector.constant(A, [0.5]), 10_000, 1e-3)
print("1/n + 1/2:", v.status.value, "on window", v.window)

# %%
flip = Generated(A, 1, alt=1.0)  # (-1)^n
r = check_cauchy_bounded(flip, fam, 1000, 1e-3)
print("(-1)^n: cauchy", r.cauchy, " bound", r.bound_m)

# %%
# the limit estimate is the last term of a Cauchy window
print("limit of 1/n:", construct_limit(inv, fam, 1_000_000, 1e-3))

# %%
# closed balls are convex; the bare sphere is not
centre, one = SoftVector.zero(A, 2), SoftReal.constant(A, 1.0)
for kind in (BallKind.CLOSED, BallKind.SPHERE):
    rep = check_convex(BallRegion(fam, BallSpec(centre, one, kind)), trials=200)
    print(kind.value, "convex on samples:", rep.convex_on_samples, f"({rep.segment_samples} segment points)")
