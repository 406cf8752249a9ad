"""Expanding the resonance determinant and watching a term vanish.

Expanding det over all permutations produces a finite sum of polynomials
times exponentials exp(i sigma kappa).  For most shapes the longest tour
survives as the top exponent.  For the kite the four tied tours cancel
exactly, so the top exponent drops and the effective size is smaller.
"""

import math

from reslab import build_nonweyl4, effective_size, from_determinant, size_bruteforce

cfg = build_nonweyl4(1.0, 0.25, 0.5)
F = from_determinant(cfg)

print("surviving exponents:")
for t in F.terms:
    print(f"  sigma = {t.sigma:.6f}  degree {len(t.coeff) - 1}")

print("\npruned exponents (sum cancelled to rounding):")
for p in F.pruned:
    print(f"  sigma = {p.sigma:.6f}  relative residual {p.residual:.1e}")

v = size_bruteforce(cfg).v_x
w = effective_size(F)
print(f"\nsize V           = {v:.12f}")
print(f"effective size W = {w:.12f}")
print(f"closed form      = {1 + math.sqrt(17) / 4 + math.sqrt(5) / 4:.12f}")
