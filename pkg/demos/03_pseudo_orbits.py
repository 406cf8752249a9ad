"""Permutations as pseudo-orbits.

Each permutation of the points is read as a collection of closed walks on
the complete graph.  Summing walk amplitudes gives the determinant again,
which this script checks numerically at a handful of points.
"""

import numpy as np

from reslab import build_triangle, determinant, enumerate_irreducible
from reslab.geometry import distance_matrix
from reslab.pseudoorbit import resonance_condition_pseudo

cfg = build_triangle(1.3, 1.1, 0.9)
orbits = enumerate_irreducible(cfg.n, distance_matrix(cfg))
for m, bucket in orbits.items():
    print(f"{m} bonds:")
    for o in bucket:
        print(f"    orbits {o.cycle_lists()}  total length {o.total_length:.2f}")

kappa = np.array([1 + 0.5j, 7 - 2j, -3 - 0.1j])
print("\n kappa        determinant                  pseudo-orbit sum")
for k, d, p in zip(kappa, determinant(cfg, kappa), resonance_condition_pseudo(cfg, None, kappa)):
    print(f" {k!s:12s} {d:.12e}  {p:.12e}")
