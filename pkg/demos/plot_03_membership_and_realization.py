"""
Membership by exact linear programming
======================================

A matrix is in C_n iff it is a convex combination of the extreme points.
The exact simplex solver returns either class weights, turned here into a
spin distribution, or a Farkas vector proving that no weights exist.
"""

from fractions import Fraction as F

from spincorr import CorrelationMatrix, Infeasible, correlations_of, membership, realizability
from spincorr.exact_lp import certificate_value, membership_system

sigma = CorrelationMatrix(4, (F(1, 3), 0, F(-1, 5), F(1, 2), 0, F(-1, 4)))
dist = realizability(sigma)
print("realizing distribution:")
for atom, w in dist.weights.items():
    print(f"  {atom}: {w}")
print("correlations reproduced exactly:", correlations_of(dist) == sigma)

bad = CorrelationMatrix(3, (-1, -1, -1))
res = membership(bad)
assert isinstance(res, Infeasible)
print("certificate y =", [str(v) for v in res.certificate])
print("y^T b =", certificate_value(res, membership_system(bad)), "> 0")
