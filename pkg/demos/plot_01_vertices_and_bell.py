"""
Extreme points and Bell inequalities
====================================

The spin correlation polytope C_n is the convex hull of the rank-one
matrices w w^T, one for each sign class {w, -w}.  This script lists them for
small n and checks that each one satisfies every Bell inequality, with at
least one inequality tight.
"""

from spincorr import bell_system, check_bell, evaluate_bell, extreme_points
from spincorr.spin_core import sign_classes

for n in (3, 4):
    vertices = extreme_points(n)
    print(f"n={n}: {len(vertices)} extreme points, {len(bell_system(n))} Bell inequalities")
    for w, v in zip(sign_classes(n), vertices):
        tight = sum(evaluate_bell(q, v) == 0 for q in bell_system(n))
        print(f"  class {w}  upper={[str(x) for x in v.upper]}  "
              f"violated={len(check_bell(v))}  tight={tight}")

# The four inequalities for three spins:
for q in bell_system(3):
    print(q)
