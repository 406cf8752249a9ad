"""Resonances of the three-dimensional Schroedinger operator with point interactions."""

from .errors import ReslabError
from .geometry import (
    PointConfig,
    LengthAlphabet,
    distance_matrix,
    build_length_alphabet,
    build_segment,
    build_triangle,
    build_antipodal_sphere_config,
    build_sphere_center_config,
    build_nonweyl4,
    load_config,
    dump_config,
)
from .sizecalc import SizeReport, size_bruteforce, size_assignment, weyl_necessary_condition
from .exppoly import (
    ExpPolynomial,
    from_determinant,
    determinant,
    evaluate,
    evaluate_derivative,
    effective_size,
    effective_size_growth_estimate,
)
from .pseudoorbit import (
    enumerate_irreducible,
    permutation_to_pseudo_orbit,
    resonance_condition_pseudo,
    sign_of_permutation,
)

__version__ = "0.1.0"
