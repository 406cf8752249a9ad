"""Counting resonances in growing discs.

The number of resonances in a disc of radius R grows like (W / pi) R,
where W is the effective size.  The slope of a straight-line fit to the
counting function should approach W / pi.
"""

import math

from reslab import build_triangle, effective_size, from_determinant
from reslab.roots import counting_curve

cfg = build_triangle(1.3, 1.1, 0.9)
F = from_determinant(cfg)
curve = counting_curve(F, cfg.alpha, 300.0, steps=60)
for r, n in curve.samples[::10]:
    print(f"  R = {r:6.1f}   N(R) = {n}")
target = effective_size(F) / math.pi
print(f"fitted slope {curve.slope:.4f}, W/pi = {target:.4f}")
