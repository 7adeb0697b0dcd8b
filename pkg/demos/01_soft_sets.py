"""
Soft sets as parameter-indexed families
=======================================

A soft set assigns a subset of R^n to every parameter.  This walk-through
builds two small finite soft sets, combines them, and checks both De Morgan
identities against a universe.
"""

# %%
import numpy as np

from softlin import ParameterSet, SoftSet, intersection, soft_complement, soft_set_relate, union

params = ParameterSet(["morning", "evening"])
points = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)

universe = SoftSet.finite(params, 2, {"morning": points, "evening": points})
F = SoftSet.finite(params, 2, {"morning": points[:2], "evening": points[3:]})
G = SoftSet.finite(params, 2, {"morning": points[1:3], "evening": []})
print("F =", F)
print("G =", G)

# %%
# union keeps everything; intersection keeps the shared points per parameter
print("F u G =", union(F, G))
print("F n G =", intersection(F, G))


# %%
# complements are taken relative to the universe at each parameter
def c(s):
    return soft_complement(s, universe)


print("(F u G)' vs F' n G':", soft_set_relate(c(union(F, G)), intersection(c(F), c(G))).value)
print("(F n G)' vs F' u G':", soft_set_relate(c(intersection(F, G)), union(c(F), c(G))).value)

# %%
# a union over different parameter sets keeps each side where the other is absent
night = SoftSet.finite(["night"], 2, {"night": [[5, 5]]})
print("F u night =", union(F, night))
