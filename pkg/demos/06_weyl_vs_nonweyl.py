"""Which configurations have the maximal resonance density?

A configuration is of Weyl type when its effective size equals its size.
Spheres with antipodal points (with or without the centre) always are.
The kite is not, and the fitted counting slope confirms the smaller rate.
"""

import math

from reslab import (
    build_antipodal_sphere_config,
    build_nonweyl4,
    build_sphere_center_config,
    effective_size,
    effective_size_growth_estimate,
    from_determinant,
    size_bruteforce,
)
from reslab.roots import counting_curve

cases = {
    "antipodal m=2": build_antipodal_sphere_config(2),
    "antipodal+centre m=2": build_sphere_center_config(2),
    "kite": build_nonweyl4(1.0, 0.25, 0.5),
}
print(f"{'config':22s} {'V':>9s} {'W':>9s} {'W (growth)':>11s}  Weyl")
for name, cfg in cases.items():
    F = from_determinant(cfg)
    v, w = size_bruteforce(cfg).v_x, effective_size(F)
    g = effective_size_growth_estimate(cfg, F=F)
    print(f"{name:22s} {v:9.5f} {w:9.5f} {g:11.5f}  {abs(v - w) < 1e-9}")

kite = cases["kite"]
curve = counting_curve(from_determinant(kite), 0.0, 300.0, steps=40)
print(f"\nkite slope {curve.slope:.4f}: W/pi = {effective_size(from_determinant(kite)) / math.pi:.4f},"
      f" V/pi = {size_bruteforce(kite).v_x / math.pi:.4f}")
