"""
Fitting a two-piece normal
==========================

Two estimators are available.  The moment fit solves a cubic in the gap
between mean and mode; maximum likelihood profiles out the two scales and
searches over the mode.  A likelihood-ratio test compares the fit against a
plain normal.
"""
import numpy as np

from twopiece import TwoPieceNormal, fit_ml, fit_moments, symmetry_test
from twopiece.errors import InfeasibleSkewness

rng = np.random.Generator(np.random.Philox(42))
x = TwoPieceNormal(0.0, 0.5, 2.0).sample(rng, 5000)

mm = fit_moments(x)
ml = fit_ml(x, test_symmetry=True)
print("moment fit:", mm.params, "log-likelihood", round(mm.log_likelihood, 3))
print("ML fit:    ", ml.params, "log-likelihood", round(ml.log_likelihood, 3))
print("standard errors (mu, sigma1, sigma2):", np.round(ml.standard_errors, 4))
print("symmetry test: statistic", round(ml.symmetry_test.statistic, 2), "p-value", ml.symmetry_test.p_value)

# Normal data should not reject symmetry.
z = rng.standard_normal(2000)
print("normal data, symmetry p-value:", round(symmetry_test(z).p_value, 3))

# The family cannot reach sample skewness beyond the half-normal limit.
spiky = np.r_[np.zeros(200), 25.0]
try:
    fit_moments(spiky)
except InfeasibleSkewness as exc:
    print("moment fit refused:", exc)
