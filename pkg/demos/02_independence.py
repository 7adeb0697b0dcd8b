"""
Independence of soft vectors, one parameter at a time
=====================================================

A family of soft vectors is independent only if it is independent at every
parameter.  A single bad parameter is enough to produce a dependence
witness, and scalars that vanish elsewhere turn it into a zero combination.
"""

# %%
import numpy as np

from softlin import ParameterSet, SoftReal, SoftVector, is_linearly_independent, linear_combination
from softlin.linear import vector_arith

A = ParameterSet(["a", "b"])
x1 = SoftVector(A, [[1, 0], [1, 0]])
x2 = SoftVector(A, [[0, 1], [2, 0]])  # parallel to x1 at b

verdict = is_linearly_independent([x1, x2])
print("independent:", verdict.independent)
print("ranks per parameter:", dict(zip(A, verdict.ranks)))
print("witness at", verdict.witness_parameter, "coefficients", verdict.witness_coefficients)

# %%
# the witness scalars are zero away from b, so the combination is the null vector
alphas = verdict.witness_scalars(A)
print("sum alpha_i x_i =", linear_combination(alphas, [x1, x2]))

# %%
# zero divisors: k * alpha can vanish with neither factor the zero element
k = SoftReal(A, [1.0, 0.0])
alpha = SoftVector(A, [[0, 0], [3, -1]])
print("k * alpha =", vector_arith("scalar_mul", k, alpha))
print("k is zero:", bool(np.all(k.values == 0)), "  alpha is null:", alpha.is_null())
