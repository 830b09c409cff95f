"""
Sampling a realization
======================

Draws from a realizing distribution reproduce the target correlations up
to the usual 1/sqrt(count) error.
"""

from fractions import Fraction as F

from spincorr import compose3, realize, sample_correlations

lam = (F(1, 2), F(1, 4), F(1, 8), F(1, 8))
sigma = compose3(lam)
est = sample_correlations(realize(lam, 3), count=100_000, seed=7)
print("generator:", est.generator)
for exact, approx, se in zip(sigma.upper, est.sigma_hat, est.stderr):
    print(f"exact {str(exact):>5}  sampled {approx:+.4f}  (se {se:.4f})")
