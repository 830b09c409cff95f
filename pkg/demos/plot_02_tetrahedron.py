"""
The three-spin tetrahedron in barycentric coordinates
=====================================================

For n = 3 the map x = (1, s12, s13, s23) -> A x / 4 gives the barycentric
coordinates of a matrix with respect to the four vertices, and A x lists
the four Bell left-hand sides.  So Bell's inequalities hold exactly when all
barycentric coordinates are nonnegative.
"""

from fractions import Fraction as F

from spincorr import (
    BELL_MATRIX,
    CorrelationMatrix,
    barycentric3,
    bell_transform,
    compose3,
    moment_vector,
)

A = BELL_MATRIX
square = [[sum(A[i][k] * A[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
print("A @ A =", square)

for upper in [(0, 0, 0), (F(1, 2), 0, 0), (-1, -1, -1), (F(-1, 2), F(-1, 2), F(-1, 2))]:
    sigma = CorrelationMatrix(3, upper)
    y = bell_transform(moment_vector(sigma)).y
    lam = barycentric3(sigma).weights
    print(f"sigma={[str(v) for v in upper]}  Bell={[str(v) for v in y]}  "
          f"lambda={[str(v) for v in lam]}  inside={all(v >= 0 for v in lam)}")

# Affine combinations with a negative weight leave the correlation cube.
outside = compose3((2, -1, 0, 0))
print("compose3(2, -1, 0, 0):", [str(v) for v in outside.upper], "is_correlation =", outside.is_correlation)
