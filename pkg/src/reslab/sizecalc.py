"""Size of a point configuration.

The size is the largest total length ``sum_n |x_n - x_pi(n)|`` over all
permutations ``pi``.  Two routes are provided: exhaustive enumeration, which
also reports every maximising permutation, and a max-weight assignment
solve that scales to large N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._permtable import check_capacity, permutation_table
from .geometry import LengthAlphabet, PointConfig, build_length_alphabet
from .pseudoorbit import format_cycles

__all__ = [
    "SizeReport",
    "size_bruteforce",
    "size_assignment",
    "weyl_necessary_condition",
    "permutation_class_vector",
]


@dataclass
class SizeReport:
    """Result of the exhaustive size computation.

    Attributes
    ----------
    v_x : float
        The size.
    maximizers : list of tuple
        Permutations attaining it, as 0-based image tuples, sorted.
    maximizer_classes : list of tuple
        Distinct length-class count vectors among the maximisers.
    per_permutation_length : dict or None
        Every permutation's total length, when requested.
    """

    v_x: float
    maximizers: list
    maximizer_classes: list
    per_permutation_length: dict | None = field(default=None, repr=False)

    @property
    def unique(self) -> bool:
        return len(self.maximizers) == 1

    def to_dict(self) -> dict:
        return {
            "v_x": self.v_x,
            "maximizers": [format_cycles(p) for p in self.maximizers],
            "unique": self.unique,
        }


def permutation_class_vector(perm, alphabet: LengthAlphabet) -> tuple:
    counts = [0] * alphabet.size
    for n, m in enumerate(perm):
        if n != m:
            counts[alphabet.class_of(n, int(m))] += 1
    return tuple(counts)


def size_bruteforce(config: PointConfig, alphabet: LengthAlphabet | None = None,
                    with_lengths: bool = False) -> SizeReport:
    """Exact size by enumerating all N! permutations (N <= 10).

    Totals are compared through their length-class vectors, so permutations
    whose totals agree up to the alphabet tolerance are all reported as
    maximisers, however the floating-point sums happen to round.
    """
    check_capacity(config.n, "size_bruteforce", "use size_assignment for larger N")
    if alphabet is None:
        alphabet = build_length_alphabet(config)
    k = alphabet.size
    table = permutation_table(alphabet.class_matrix(), k)
    lengths = np.array([alphabet.length_of(key[:k]) for key in table.keys])
    v_x = float(lengths.max())
    tied = np.array([alphabet.same_length(s, v_x) for s in lengths])
    rows = np.nonzero(tied[table.key_index])[0]
    maximizers = sorted(tuple(int(v) for v in table.perms[r]) for r in rows)
    classes = sorted({table.keys[i][:k] for i in np.nonzero(tied)[0]})

    per_perm = None
    if with_lengths:
        per_perm = {
            tuple(int(v) for v in p): float(lengths[i])
            for p, i in zip(table.perms, table.key_index)
        }
    return SizeReport(v_x, maximizers, classes, per_perm)


def size_assignment(config: PointConfig, alphabet: LengthAlphabet | None = None) -> float:
    """Size via a max-weight perfect matching on the distance matrix.

    The optimal permutation's total is re-evaluated through its class
    vector, the same arithmetic path ``size_bruteforce`` uses.
    """
    if alphabet is None:
        alphabet = build_length_alphabet(config)
    _, cols = linear_sum_assignment(alphabet.length_matrix(), maximize=True)
    return alphabet.length_of(permutation_class_vector(cols, alphabet))


def weyl_necessary_condition(report: SizeReport) -> bool:
    """True iff the maximising permutation is unique.

    A unique maximiser forces the effective size to equal the size; several
    maximisers do not by themselves imply a deficit.
    """
    return report.unique
