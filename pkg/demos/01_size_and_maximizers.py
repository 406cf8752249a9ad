"""How long can a closed tour through every point be?

The size of a configuration is the largest total distance collected by a
permutation that sends each point to another (or to itself, for free).
This script computes it for a few small shapes and lists the permutations
that attain it.
"""

from reslab import build_nonweyl4, build_segment, build_triangle, size_bruteforce
from reslab.pseudoorbit import format_cycles

shapes = {
    "unit segment": build_segment(),
    "triangle 1.3/1.1/0.9": build_triangle(1.3, 1.1, 0.9),
    "kite a=1 b=1/4 c=1/2": build_nonweyl4(1.0, 0.25, 0.5),
}

for name, cfg in shapes.items():
    report = size_bruteforce(cfg)
    tours = ", ".join(format_cycles(p) for p in report.maximizers)
    print(f"{name:22s} V = {report.v_x:.6f}   maximisers: {tours}")

# The kite is the interesting one: four different permutations tie for the
# longest tour.  Ties are what make a deficit in the effective size possible.
