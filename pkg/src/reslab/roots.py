"""Locating and counting zeros of exponential polynomials.

Counting uses the argument principle realised by phase tracking: the
contour is sampled, and any step over which the phase of F moves by
pi/2 or more is bisected until none remains.  The winding number is then
the accumulated phase divided by 2 pi.  Localisation subdivides rectangles
by their boundary winding numbers and polishes isolated zeros with damped
Newton iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, ContourError, InvalidParameterError, ResolutionError
from .exppoly import ExpPolynomial, _check_alpha, effective_size

__all__ = [
    "Zero",
    "CountingCurve",
    "KIND_EPS",
    "classify_zero",
    "winding_number",
    "rectangle_winding",
    "count_zeros_disc",
    "locate_zeros",
    "counting_curve",
    "newton_polish",
]

KIND_EPS = 1e-8
CONTOUR_EPS = 1e-10
MAX_POINTS = 4_000_000


@dataclass(frozen=True)
class Zero:
    kappa: complex
    multiplicity: int = 1
    kind: str = ""
    polished: bool = True
    box: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "kappa", complex(self.kappa))
        if not self.kind:
            object.__setattr__(self, "kind", classify_zero(self.kappa))

    def to_dict(self) -> dict:
        return {
            "re": self.kappa.real,
            "im": self.kappa.imag,
            "multiplicity": self.multiplicity,
            "kind": self.kind,
            "polished": self.polished,
        }


def classify_zero(z, eps: float = KIND_EPS) -> str:
    """``resonance`` below the real axis, ``eigenvalue`` above, else ``real-axis``."""
    kappa = z.kappa if isinstance(z, Zero) else complex(z)
    if kappa.imag < -eps:
        return "resonance"
    if kappa.imag > eps:
        return "eigenvalue"
    return "real-axis"


# winding numbers -----------------------------------------------------------


def _initial_samples(F: ExpPolynomial, length: float) -> int:
    rate = max(F.sigma_max, 1.0) + F._coef.shape[1]
    return int(min(max(64, 4.0 * rate * length), MAX_POINTS // 4))


def winding_number(F: ExpPolynomial, path, length: float, n0: int | None = None) -> int:
    """Winding number of F along a closed parametrised path.

    ``path`` maps parameters in [0, 1] to points of the plane with
    ``path(0) == path(1)``; ``length`` is its arc length and only sets the
    initial sampling density.  Raises ContourError when F nearly vanishes
    on the path.
    """
    t = np.linspace(0.0, 1.0, n0 or _initial_samples(F, length))
    vals, _, _, mass = F.scaled(path(t))
    while True:
        if np.any(np.abs(vals) <= CONTOUR_EPS * mass):
            raise ContourError("F vanishes (to working precision) on the contour")
        step = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(step) >= math.pi / 2)[0]
        if not len(bad):
            break
        if len(t) + len(bad) > MAX_POINTS:
            raise ResolutionError(
                f"phase tracking needs more than {MAX_POINTS} samples on the contour"
            )
        mid = 0.5 * (t[bad] + t[bad + 1])
        mvals, _, _, mmass = F.scaled(path(mid))
        t = np.insert(t, bad + 1, mid)
        vals = np.insert(vals, bad + 1, mvals)
        mass = np.insert(mass, bad + 1, mmass)
    return int(round(step.sum() / (2 * math.pi)))


def _circle(center, radius):
    return lambda t: center + radius * np.exp(2j * math.pi * t)


def _rect_path(rect):
    x0, x1, y0, y1 = rect
    corners = np.array([x0 + 1j * y0, x1 + 1j * y0, x1 + 1j * y1, x0 + 1j * y1, x0 + 1j * y0])
    seg = np.abs(np.diff(corners))
    cum = np.concatenate([[0.0], np.cumsum(seg)]) / seg.sum()

    def path(t):
        t = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, 3)
        frac = (t - cum[i]) / (cum[i + 1] - cum[i])
        return corners[i] + frac * (corners[i + 1] - corners[i])

    return path, float(seg.sum())


def rectangle_winding(F: ExpPolynomial, rect) -> int:
    """Number of zeros (with multiplicity) inside ``(x0, x1, y0, y1)``."""
    path, length = _rect_path(rect)
    return winding_number(F, path, length)


def count_zeros_disc(F: ExpPolynomial, alpha, R: float, nudge: float = 1e-4,
                     max_nudges: int = 5, return_radius: bool = False):
    """Zeros of F in the open disc of radius R, counted with multiplicity.

    If a zero sits on the circle the radius is enlarged by ``nudge * R``,
    at most ``max_nudges`` times.
    """
    _check_alpha(F, alpha)
    if R <= 0:
        raise InvalidParameterError("radius must be positive")
    radius = float(R)
    for _ in range(max_nudges + 1):
        try:
            count = winding_number(F, _circle(0.0, radius), 2 * math.pi * radius)
        except ContourError:
            radius *= 1.0 + nudge
            continue
        return (count, radius) if return_radius else count
    raise ContourError(f"zero on the circle |kappa| = {R} after {max_nudges} nudges")


# localisation ----------------------------------------------------------------


def newton_polish(F: ExpPolynomial, z0: complex, tol: float = 1e-10,
                  multiplicity: int = 1, max_iter: int = 100):
    """Damped Newton iteration ``z -= m F/F'``.

    Returns ``(z, converged)``; convergence means the last step was below
    ``tol * max(1, |z|)`` and the residual below 1e-9 of the term mass.
    """
    z = complex(z0)
    val, dval, scale, mass = (a[0] for a in F.scaled([z], derivative=True))
    for _ in range(max_iter):
        if dval == 0:
            return z, False
        step = multiplicity * val / dval
        cur = math.log(abs(val)) + scale if val != 0 else -math.inf
        lam = 1.0
        for _ in range(40):
            cand = z - lam * step
            v2, d2, s2, m2 = (a[0] for a in F.scaled([cand], derivative=True))
            new = math.log(abs(v2)) + s2 if v2 != 0 else -math.inf
            if new < cur or lam * abs(step) <= tol * max(1.0, abs(z)):
                break
            lam *= 0.5
        z, val, dval, scale, mass = cand, v2, d2, s2, m2
        if abs(lam * step) <= tol * max(1.0, abs(z)):
            return z, abs(val) <= 1e-9 * mass
    return z, False


def _split(rect, r):
    x0, x1, y0, y1 = rect
    xm = x0 + r * (x1 - x0)
    ym = y0 + r * (y1 - y0)
    return [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]


def _inside(z, rect):
    x0, x1, y0, y1 = rect
    return x0 < z.real < x1 and y0 < z.imag < y1


_SPLIT_RATIOS = (0.5 + 0.0137, 0.5 - 0.0291, 0.5 + 0.0613, 0.5 - 0.0877)


def locate_zeros(F: ExpPolynomial, alpha, region, tol: float = 1e-10,
                 min_size: float | None = None, nudge: float = 1e-4,
                 max_nudges: int = 5) -> list:
    """All zeros of F in the rectangle ``region = (x0, x1, y0, y1)``.

    Rectangles with winding number 0 are discarded; a rectangle holding one
    zero is polished by Newton from its centre, and the result is kept only
    if it lands inside.  Otherwise the rectangle is split in four at
    slightly off-centre cuts (zeros on the symmetry axis Re kappa = 0 are
    common).  Rectangles shrinking below ``min_size`` with winding m > 1
    are reported as one zero of multiplicity m.  The multiplicities sum to
    the winding number of the region.
    """
    _check_alpha(F, alpha)
    if tol < 1e-12:
        raise InvalidParameterError("tol must be at least 1e-12")
    x0, x1, y0, y1 = (float(v) for v in region)
    if not (x1 > x0 and y1 > y0):
        raise InvalidParameterError("region must be a non-empty rectangle x0<x1, y0<y1")
    scale = max(x1 - x0, y1 - y0)
    if min_size is None:
        min_size = max(1e-7 * scale, 1e3 * tol)

    rect = (x0, x1, y0, y1)
    for _ in range(max_nudges + 1):
        try:
            total = rectangle_winding(F, rect)
            break
        except ContourError:
            h = nudge * scale
            rect = (rect[0] - h, rect[1] + h, rect[2] - h, rect[3] + h)
    else:
        raise ContourError("zero on the region boundary after nudging")

    found = []
    stack = [(rect, total)]
    while stack:
        box, w = stack.pop()
        if w == 0:
            continue
        if w < 0:
            raise ConsistencyError(f"negative winding number {w} on {box}")
        center = complex(0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3]))
        size = max(box[1] - box[0], box[3] - box[2])
        if w == 1:
            z, ok = newton_polish(F, center, tol)
            if ok and _inside(z, box):
                found.append(Zero(z, 1, box=box))
                continue
        if size < min_size:
            found.append(_cluster_zero(F, center, w, tol, box))
            continue
        for ratio in _SPLIT_RATIOS:
            try:
                children = [(c, rectangle_winding(F, c)) for c in _split(box, ratio)]
            except ContourError:
                continue
            if sum(cw for _, cw in children) == w:
                break
        else:
            raise ConsistencyError(f"could not subdivide {box} consistently (winding {w})")
        stack.extend(reversed(children))

    if sum(z.multiplicity for z in found) != total:
        raise ConsistencyError(
            f"multiplicities sum to {sum(z.multiplicity for z in found)}, winding is {total}"
        )
    return sorted(found, key=lambda z: (z.kappa.real, z.kappa.imag))


def _cluster_zero(F, center, w, tol, box):
    z, ok = newton_polish(F, center, tol, multiplicity=w)
    radius = 10 * tol * max(1.0, abs(z))
    try:
        m = winding_number(F, _circle(z, radius), 2 * math.pi * radius, n0=64)
    except ContourError:
        m = -1
    return Zero(z, w, polished=ok and m == w and _inside(z, box), box=box)


# counting curve ----------------------------------------------------------------


@dataclass
class CountingCurve:
    """Sampled counting function and its linear fit.

    ``samples`` holds ``(R, count)`` pairs at the radii actually used
    (after any nudging).
    """

    samples: list
    slope: float
    intercept: float
    fit_residual: float
    fit_from: float = field(default=0.0)

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "fit_residual": self.fit_residual,
            "samples": [[r, c] for r, c in self.samples],
        }


def counting_curve(F: ExpPolynomial, alpha, R_max: float, steps: int = 100) -> CountingCurve:
    """Count zeros on an equispaced radius grid and fit a line to the upper half."""
    _check_alpha(F, alpha)
    if steps < 10:
        raise InvalidParameterError("need at least 10 radius steps")
    radii = np.linspace(R_max / steps, R_max, steps)
    samples = []
    for r in radii:
        count, used = count_zeros_disc(F, alpha, r, return_radius=True)
        samples.append((used, count))
    tail = samples[steps // 2:]
    rs = np.array([s[0] for s in tail])
    cs = np.array([s[1] for s in tail], dtype=float)
    if effective_size(F) == 0.0 or np.all(cs == cs[0]):
        return CountingCurve(samples, 0.0, float(cs[-1]), 0.0, float(rs[0]))
    slope, intercept = np.polyfit(rs, cs, 1)
    resid = float(np.sqrt(np.mean((slope * rs + intercept - cs) ** 2)))
    return CountingCurve(samples, float(slope), float(intercept), resid, float(rs[0]))
