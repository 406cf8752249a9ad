"""Irreducible pseudo-orbits on the complete directed graph of a configuration.

Every pair of points is joined by two oppositely oriented bonds of equal
length.  Permutations of the points correspond one-to-one to irreducible
pseudo-orbits: each cycle of length at least two becomes a periodic orbit,
fixed points are dropped.  Summing over pseudo-orbits gives a second,
independent expression for the resonance determinant.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._permtable import check_capacity
from .errors import InvalidParameterError

__all__ = [
    "Bond",
    "PeriodicOrbit",
    "PseudoOrbit",
    "cycles",
    "format_cycles",
    "parse_cycles",
    "sign_of_permutation",
    "permutation_to_pseudo_orbit",
    "enumerate_irreducible",
    "b_gamma",
    "resonance_condition_pseudo",
]

FOUR_PI = 4.0 * math.pi


# permutations ------------------------------------------------------------


def _check_perm(pi) -> tuple:
    pi = tuple(int(v) for v in pi)
    if sorted(pi) != list(range(len(pi))):
        raise InvalidParameterError(f"{pi} is not a permutation of 0..{len(pi) - 1}")
    return pi


def cycles(pi) -> list:
    """Disjoint cycle decomposition, fixed points included.

    Each cycle starts at its smallest element and follows ``v -> pi[v]``;
    cycles are ordered by their first element.
    """
    pi = _check_perm(pi)
    seen = [False] * len(pi)
    out = []
    for start in range(len(pi)):
        if seen[start]:
            continue
        cyc, v = [], start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = pi[v]
        out.append(tuple(cyc))
    return out


def format_cycles(pi) -> str:
    """1-based cycle notation without fixed points, e.g. ``(1,2)(3,4)``."""
    parts = ["(" + ",".join(str(v + 1) for v in c) + ")" for c in cycles(pi) if len(c) > 1]
    return "".join(parts) or "()"


def parse_cycles(text: str, n: int) -> tuple:
    """Inverse of :func:`format_cycles`; unlisted points are fixed."""
    pi = list(range(n))
    for body in re.findall(r"\(([^()]*)\)", text):
        vs = [int(v) - 1 for v in body.replace(" ", "").split(",") if v]
        for a, b in zip(vs, vs[1:] + vs[:1]):
            pi[a] = b
    return _check_perm(pi)


def sign_of_permutation(pi) -> int:
    """``(-1)**(N + number of cycles)``, fixed points counted as cycles."""
    pi = _check_perm(pi)
    return -1 if (len(pi) + len(cycles(pi))) % 2 else 1


# orbits ------------------------------------------------------------------


@dataclass(frozen=True)
class Bond:
    source: int
    target: int
    length: float = math.nan

    def __post_init__(self):
        if self.source == self.target:
            raise InvalidParameterError("a bond joins two distinct vertices")

    def reversed(self) -> "Bond":
        return Bond(self.target, self.source, self.length)


@dataclass(frozen=True)
class PeriodicOrbit:
    bonds: tuple

    def __post_init__(self):
        if len(self.bonds) < 2:
            raise InvalidParameterError("a periodic orbit has at least two bonds")
        for b, nxt in zip(self.bonds, self.bonds[1:] + self.bonds[:1]):
            if b.target != nxt.source:
                raise InvalidParameterError("orbit bonds do not chain")

    @property
    def vertices(self) -> tuple:
        return tuple(b.source for b in self.bonds)

    @property
    def length(self) -> float:
        return math.fsum(b.length for b in self.bonds)


@dataclass(frozen=True)
class PseudoOrbit:
    orbits: tuple = ()

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)

    @property
    def bonds(self) -> tuple:
        return tuple(b for o in self.orbits for b in o.bonds)

    @property
    def n_bonds(self) -> int:
        return sum(len(o.bonds) for o in self.orbits)

    @property
    def total_length(self) -> float:
        return math.fsum(b.length for b in self.bonds)

    @property
    def is_irreducible(self) -> bool:
        keys = [(b.source, b.target) for b in self.bonds]
        return len(keys) == len(set(keys))

    def cycle_lists(self) -> list:
        """Orbits as 1-based vertex lists."""
        return [[v + 1 for v in o.vertices] for o in self.orbits]


def permutation_to_pseudo_orbit(pi, lengths=None) -> PseudoOrbit:
    """Map each non-trivial cycle ``(v1, ..., vk)`` to ``v1 -> v2 -> ... -> v1``.

    ``lengths`` is an optional N x N distance matrix used to label bonds.
    """
    orbits = []
    for cyc in cycles(pi):
        if len(cyc) < 2:
            continue
        bonds = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            ell = float(lengths[a][b]) if lengths is not None else math.nan
            bonds.append(Bond(a, b, ell))
        orbits.append(PeriodicOrbit(tuple(bonds)))
    return PseudoOrbit(tuple(orbits))


def enumerate_irreducible(n: int, lengths=None) -> dict:
    """All irreducible pseudo-orbits on N vertices, bucketed by bond count.

    Generated from the permutations of ``range(n)``, so the correspondence
    with the symmetric group is a bijection by construction.
    """
    check_capacity(n, "enumerate_irreducible")
    buckets: dict = {m: [] for m in range(n + 1)}
    for pi in itertools.permutations(range(n)):
        orbit = permutation_to_pseudo_orbit(pi, lengths)
        buckets[orbit.n_bonds].append(orbit)
    return {m: v for m, v in buckets.items() if v}


def b_gamma(orbit: PseudoOrbit, kappa):
    """Product of ``-exp(i kappa |b|) / (4 pi |b|)`` over all bonds; 1 if empty."""
    kappa = np.asarray(kappa, dtype=complex)
    out = np.ones_like(kappa)
    for b in orbit.bonds:
        out = out * (-np.exp(1j * kappa * b.length) / (FOUR_PI * b.length))
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=32)
def _orbit_table(points: tuple):
    from .geometry import distance_matrix, PointConfig

    d = distance_matrix(PointConfig(points))
    n = len(points)
    check_capacity(n, "resonance_condition_pseudo")
    total, pref, nb = [], [], []
    for m, orbits in enumerate_irreducible(n, d).items():
        for o in orbits:
            total.append(o.total_length)
            pre = (-1.0) ** o.orbit_count
            for b in o.bonds:
                pre *= -1.0 / (FOUR_PI * b.length)
            pref.append(pre)
            nb.append(m)
    return np.array(total), np.array(pref), np.array(nb)


def resonance_condition_pseudo(config, alpha=None, kappa=0j, return_mass=False):
    """Resonance determinant as a sum over irreducible pseudo-orbits.

    Returns ``(-1)^N sum_gamma (-1)^{orbits} B_gamma(kappa)
    (i kappa/4pi - alpha)^{N - bonds}``.  With ``return_mass`` the L1 mass
    of the summands is returned as well, as a scale for equality tests.
    """
    if alpha is None:
        alpha = config.alpha
    kappa = np.asarray(kappa, dtype=complex)
    flat = kappa.reshape(-1)
    total, pref, nb = _orbit_table(config.points)
    n = config.n
    base = 1j * flat / FOUR_PI - alpha
    powers = base[None, :] ** (n - nb)[:, None]
    terms = pref[:, None] * np.exp(1j * np.outer(total, flat)) * powers
    value = (-1) ** n * terms.sum(axis=0)
    value = value.reshape(kappa.shape)
    value = value[()] if value.ndim == 0 else value
    if return_mass:
        mass = np.abs(terms).sum(axis=0).reshape(kappa.shape)
        return value, (mass[()] if mass.ndim == 0 else mass)
    return value
