"""
Fechner family and split distributions
======================================

The two-piece normal sits inside two larger families.  The Fechner family
adds a tail exponent ``a``; the split construction skews any symmetric base
density with a factor gamma.  With a normal base (or a = 2) all three
describe the same distribution.
"""
import numpy as np

from twopiece import FechnerFamily, TwoPieceNormal, split_normal, split_t
from twopiece.families import split_from_two_piece

tpn = TwoPieceNormal(1.0, 0.5, 2.0)
fechner = FechnerFamily.from_two_piece(tpn)
split = split_from_two_piece(tpn)
print("Fechner parameters:", fechner)
print("split parameters:   gamma =", split.gamma, "scale =", split.scale)

x = np.linspace(-1, 6, 5)
print("two-piece:", tpn.pdf(x))
print("Fechner:  ", fechner.pdf(x))
print("split:    ", split.pdf(x))

# Smaller exponents give heavier tails; a = 1 is an asymmetric Laplace.
for a in (1.0, 1.5, 2.0, 4.0):
    f = FechnerFamily(0.0, 1.0, 2.0, a)
    print(f"a = {a}: P(X > 2.5) = {1 - f.cdf(2.5):.3e}, variance = {f.variance():.4f}")

# A split Student-t keeps the mass identity P(X < location) = 1 / (1 + gamma^2).
st5 = split_t(5, 2.0)
print("split-t(5), gamma 2: cdf(0) =", st5.cdf(0.0))
print("split-normal, gamma 2: 95% quantile =", split_normal(2.0).quantile(0.95))
