"""Finding resonances of two point scatterers.

For two points at distance 1 with alpha = 0 the resonances are the zeros
of kappa^2 + exp(2 i kappa) (up to a constant).  Resonances lie in the
lower half plane and come in pairs kappa, -conj(kappa); the single zero on
the positive imaginary axis is a bound state.
"""

from reslab import build_segment, from_determinant
from reslab.roots import locate_zeros

F = from_determinant(build_segment())
zeros = locate_zeros(F, 0.0, (-20, 20, -5, 1))
for z in zeros:
    print(f"  {z.kappa.real:+.9f} {z.kappa.imag:+.9f}i   x{z.multiplicity}  {z.kind}")
print(f"{len(zeros)} zeros in the window")
