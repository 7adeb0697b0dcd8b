"""
Norm families, independence constants and Riesz witnesses
=========================================================

A soft norm here is a family of weighted p-norms, one per parameter.  The
demo evaluates norms, checks the axioms on random samples, and computes the
constants that tie a finite family to its coefficients.
"""

# %%
import numpy as np

from softlin import (
    P1,
    P2,
    NormDescriptor,
    NormFamily,
    ParameterSet,
    PInf,
    SoftReal,
    SoftVector,
    SoftVectorSpace,
    equivalence_constants,
    eval_norm,
    independence_constant,
    riesz_witness,
    verify_norm_axioms,
)
from softlin.linear import standard_basis

A = ParameterSet(["l1", "l2", "weighted_inf"])
fam = NormFamily(A, [P1, P2, NormDescriptor("inf", (1.0, 2.0))])

x = SoftVector.constant(A, [3.0, -4.0])
print("||(3,-4)|| per parameter:", eval_norm(fam, x))
print("axioms on 10^4 samples:", verify_norm_axioms(fam, 2, samples=10_000).passed)

# %%
# ||a1 e1 + a2 e2|| >= c (|a1| + |a2|); for the Euclidean norm c = 1/sqrt(2)
c = independence_constant(fam, standard_basis(A, 2))
print("independence constant:", c)

# %%
# l1 against sup norm in R^3: 1 <= ||x||_1 / ||x||_inf <= 3
B = ParameterSet(["p"])
ec = equivalence_constants(NormFamily.constant(B, P1), NormFamily.constant(B, PInf), 3)
print("a =", ec.a["p"], " b =", ec.b["p"])

# %%
# a unit vector far from a proper subspace
line = SoftVectorSpace.from_columns(A, 2, [[[1, 1]]] * 3)
y = riesz_witness(fam, line, SoftReal.constant(A, 0.1))
print("witness:", y)
print("norms:", np.round(eval_norm(fam, y).values, 12))
