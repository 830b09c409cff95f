"""
Bell inequalities are not enough from five spins on
===================================================

With every correlation equal to -3/10 all Bell inequalities hold, but the
matrix has eigenvalue 1 + 4c = -1/5 for n = 5, so it is not even a
covariance matrix.  The LP returns a Farkas certificate to that effect.
"""

import numpy as np

from spincorr import gap_search
from spincorr.polytope_geometry import verify_gap_witness

for n in (5, 6):
    w = gap_search(n)
    m = np.array([[float(x) for x in row] for row in w.sigma.full()])
    print(f"n={n}: s_ij = {w.sigma.upper[0]} ({w.strategy}), "
          f"min eigenvalue {np.linalg.eigvalsh(m).min():.3f}, verified={verify_gap_witness(w)}")
