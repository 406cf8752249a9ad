"""Point configurations in R^3 and their pairwise-distance structure.

The builders at the bottom of the module produce the canonical
configurations: antipodal pairs on the unit sphere (optionally with the
centre added) and the four-point kite whose leading resonance term cancels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import (
    ConfigIOError,
    ConfigParseError,
    DegenerateConfigurationError,
    InvalidParameterError,
)

__all__ = [
    "PointConfig",
    "LengthAlphabet",
    "DEFAULT_TOL",
    "distance_matrix",
    "build_length_alphabet",
    "build_antipodal_sphere_config",
    "build_sphere_center_config",
    "build_nonweyl4",
    "build_triangle",
    "build_segment",
    "random_config",
    "load_config",
    "dump_config",
    "BUILDERS",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PointConfig:
    """N labelled points in R^3 together with the interaction strength.

    Points are stored as a tuple of float triples so that instances are
    hashable and safe to share.
    """

    points: tuple
    alpha: float = 0.0

    def __post_init__(self):
        try:
            pts = tuple(tuple(float(c) for c in p) for p in self.points)
        except (TypeError, ValueError) as exc:
            raise InvalidParameterError(f"points must be coordinate triples: {exc}") from None
        if len(pts) < 2:
            raise InvalidParameterError(f"need at least 2 points, got {len(pts)}")
        if any(len(p) != 3 for p in pts):
            raise InvalidParameterError("every point must have exactly 3 coordinates")
        if not all(math.isfinite(c) for p in pts for c in p):
            raise InvalidParameterError("coordinates must be finite")
        alpha = float(self.alpha)
        if not math.isfinite(alpha):
            raise InvalidParameterError("alpha must be a finite real number")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "alpha", alpha)
        for n in range(len(pts)):
            for m in range(n + 1, len(pts)):
                if pts[n] == pts[m]:
                    raise DegenerateConfigurationError(
                        f"points {n + 1} and {m + 1} coincide"
                    )

    @property
    def n(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float)

    def with_alpha(self, alpha: float) -> "PointConfig":
        return replace(self, alpha=alpha)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "points": [list(p) for p in self.points]}

    @classmethod
    def from_dict(cls, data: dict) -> "PointConfig":
        if not isinstance(data, dict) or "points" not in data:
            raise InvalidParameterError("configuration needs a 'points' list")
        return cls(points=data["points"], alpha=data.get("alpha", 0.0))


def _pairwise(x: np.ndarray) -> np.ndarray:
    n = len(x)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = math.dist(x[i], x[j])
    return d


def distance_matrix(config: PointConfig) -> np.ndarray:
    """Symmetric matrix of Euclidean distances with a zero diagonal."""
    return _pairwise(config.as_array())


@dataclass(frozen=True)
class LengthAlphabet:
    """Clusters of equal pairwise distances.

    ``classes[k]`` is the representative (smallest member) of class ``k``;
    ``assignment`` maps each unordered pair ``(n, m)``, ``n < m``, to its
    class id.  Sums of lengths are carried as integer count vectors over the
    classes, which makes symmetry-forced coincidences exact.
    """

    classes: tuple
    assignment: dict = field(compare=False)
    tolerance: float = DEFAULT_TOL
    n_points: int = 0

    @property
    def size(self) -> int:
        return len(self.classes)

    def class_of(self, n: int, m: int) -> int:
        if n == m:
            raise ValueError("diagonal pairs carry no length class")
        return self.assignment[(min(n, m), max(n, m))]

    def class_matrix(self) -> np.ndarray:
        """N x N matrix of class ids; the diagonal holds ``self.size``."""
        c = np.full((self.n_points, self.n_points), self.size, dtype=np.int64)
        for (n, m), k in self.assignment.items():
            c[n, m] = c[m, n] = k
        return c

    def length_matrix(self) -> np.ndarray:
        """Distances replaced by their class representatives."""
        reps = np.append(np.asarray(self.classes, dtype=float), 0.0)
        return reps[self.class_matrix()]

    def length_of(self, counts) -> float:
        """Total length of a class count vector.

        Every caller goes through here, so equal vectors always give
        bit-identical totals.
        """
        return math.fsum(int(c) * r for c, r in zip(counts, self.classes))

    def same_length(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.tolerance * max(abs(a), abs(b), 1e-300)


def _cluster(values, tol):
    order = sorted(range(len(values)), key=lambda i: values[i])
    reps, labels = [], [0] * len(values)
    for i in order:
        v = values[i]
        if not reps or (v - reps[-1]) >= tol * v:
            reps.append(v)
        labels[i] = len(reps) - 1
    return reps, labels


def build_length_alphabet(config: PointConfig, tol: float = DEFAULT_TOL) -> LengthAlphabet:
    """Group the N(N-1)/2 pair distances into classes of relative width ``tol``.

    Distances are sorted ascending and a new class is opened whenever a
    distance exceeds the current class's smallest member by ``tol`` relative.
    """
    if not (0.0 < tol <= 1e-3):
        raise InvalidParameterError(f"tolerance must lie in (0, 1e-3], got {tol}")
    d = distance_matrix(config)
    pairs = [(n, m) for n in range(config.n) for m in range(n + 1, config.n)]
    reps, labels = _cluster([d[p] for p in pairs], tol)
    return LengthAlphabet(
        classes=tuple(reps),
        assignment=dict(zip(pairs, labels)),
        tolerance=tol,
        n_points=config.n,
    )


# builders ----------------------------------------------------------------


def build_segment(length: float = 1.0, alpha: float = 0.0) -> PointConfig:
    if length <= 0:
        raise InvalidParameterError("segment length must be positive")
    return PointConfig(((0.0, 0.0, 0.0), (float(length), 0.0, 0.0)), alpha)


def build_triangle(l12: float, l23: float, l13: float, alpha: float = 0.0) -> PointConfig:
    """Planar triangle with the prescribed side lengths.

    x1 at the origin, x2 on the positive x axis, x3 in the upper half plane.
    """
    if min(l12, l23, l13) <= 0:
        raise InvalidParameterError("side lengths must be positive")
    s = sorted((l12, l23, l13))
    if s[2] > s[0] + s[1]:
        raise InvalidParameterError("side lengths violate the triangle inequality")
    x3 = (l12**2 + l13**2 - l23**2) / (2 * l12)
    y3 = math.sqrt(max(l13**2 - x3**2, 0.0))
    return PointConfig(((0.0, 0.0, 0.0), (l12, 0.0, 0.0), (x3, y3, 0.0)), alpha)


def _sphere_points(m: int) -> list:
    delta = math.pi / (4 * m)
    pts = []
    for k in range(m):
        theta = math.pi / 2 + k * delta
        phi = k * 2 * math.pi / (2 * m + 1)
        pts.append((math.sin(theta) * math.cos(phi),
                    math.sin(theta) * math.sin(phi),
                    math.cos(theta)))
    return pts


def build_antipodal_sphere_config(m: int, alpha: float = 0.0) -> PointConfig:
    """2m points on the unit sphere, x_{m+k} antipodal to x_k.

    x_k sits at polar angle pi/2 + (k-1) pi/(4m) and azimuth
    (k-1) 2 pi/(2m+1); all of x_1..x_m lie in the closed lower hemisphere
    with only x_1 on the equator, so none of them are antipodal.
    """
    if int(m) != m or m < 1:
        raise InvalidParameterError(f"m must be a positive integer, got {m}")
    first = _sphere_points(int(m))
    second = [tuple(-c for c in p) for p in first]
    return PointConfig(tuple(first + second), alpha)


def build_sphere_center_config(m: int, alpha: float = 0.0) -> PointConfig:
    """The antipodal configuration plus the centre of the sphere (N = 2m+1)."""
    base = build_antipodal_sphere_config(m, alpha)
    return PointConfig(base.points + ((0.0, 0.0, 0.0),), alpha)


def build_nonweyl4(a: float, b: float, c: float, alpha: float = 0.0) -> PointConfig:
    """Four-point kite x1=0, x2=(a,-b,0), x3=(a,b,0), x4=(c,0,0).

    Requires 2b + c < sqrt(a^2+b^2) + sqrt((a-c)^2+b^2).
    """
    if min(a, b, c) <= 0:
        raise InvalidParameterError("a, b, c must be positive")
    lhs = 2 * b + c
    rhs = math.hypot(a, b) + math.hypot(a - c, b)
    if not lhs < rhs:
        raise InvalidParameterError(
            f"need 2b + c < sqrt(a^2+b^2) + sqrt((a-c)^2+b^2); got {lhs:.6g} >= {rhs:.6g}"
        )
    pts = ((0.0, 0.0, 0.0), (a, -b, 0.0), (a, b, 0.0), (c, 0.0, 0.0))
    return PointConfig(pts, alpha)


def random_config(n: int, rng: np.random.Generator, alpha: float = 0.0,
                  min_dist: float = 0.1) -> PointConfig:
    """Uniform points in the unit cube, redrawn until well separated."""
    while True:
        x = rng.random((n, 3))
        d = _pairwise(x)
        if n < 2 or np.min(d[np.triu_indices(n, 1)]) >= min_dist:
            return PointConfig(x.tolist(), alpha)


BUILDERS = {
    "segment": build_segment,
    "triangle": build_triangle,
    "antipodal": build_antipodal_sphere_config,
    "sphere-center": build_sphere_center_config,
    "nonweyl4": build_nonweyl4,
}


# file I/O ----------------------------------------------------------------


def load_config(path) -> PointConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigIOError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: {exc}") from None
    return PointConfig.from_dict(data)


def dump_config(config: PointConfig, path=None) -> str:
    text = json.dumps(config.to_dict(), indent=2)
    if path is not None:
        try:
            Path(path).write_text(text + "\n")
        except OSError as exc:
            raise ConfigIOError(f"cannot write {path}: {exc.strerror}") from None
    return text
