"""The resonance determinant as an exponential polynomial.

``F(kappa) = det[(alpha - i kappa/4pi) delta_nm - G(x_n - x_m)]`` with
``G(x) = exp(i kappa |x|) / (4 pi |x|)`` off the diagonal.  Expanding the
determinant over permutations gives a finite sum of polynomials in kappa
times ``exp(i kappa sigma)``, where ``sigma`` is the total length moved by
the permutation.  Terms are keyed by length-class count vectors so that
cancellations forced by symmetry are detected exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._permtable import check_capacity, permutation_table
from .errors import EstimationError, InvalidParameterError
from .geometry import LengthAlphabet, PointConfig, build_length_alphabet, distance_matrix

__all__ = [
    "ExpTerm",
    "ExpPolynomial",
    "PrunedTerm",
    "CANCEL_EPS",
    "matrix_entry",
    "resonance_matrix",
    "determinant",
    "from_determinant",
    "evaluate",
    "evaluate_derivative",
    "effective_size",
    "leading_terms",
    "effective_size_growth_estimate",
    "GrowthFit",
]

FOUR_PI = 4.0 * math.pi
CANCEL_EPS = 1e-10


def matrix_entry(config: PointConfig, n: int, m: int, kappa, alpha=None):
    """Entry ``(n, m)`` (0-based) of the resonance matrix at ``kappa``."""
    alpha = config.alpha if alpha is None else alpha
    kappa = np.asarray(kappa, dtype=complex)
    if n == m:
        out = alpha - 1j * kappa / FOUR_PI
    else:
        ell = math.dist(config.points[n], config.points[m])
        out = -np.exp(1j * kappa * ell) / (FOUR_PI * ell)
    return out[()] if np.ndim(out) == 0 else out


def resonance_matrix(config: PointConfig, kappa: complex, alpha=None) -> np.ndarray:
    alpha = config.alpha if alpha is None else alpha
    d = distance_matrix(config)
    off = d > 0
    mat = np.zeros(d.shape, dtype=complex)
    mat[off] = -np.exp(1j * kappa * d[off]) / (FOUR_PI * d[off])
    np.fill_diagonal(mat, alpha - 1j * kappa / FOUR_PI)
    return mat


def determinant(config: PointConfig, kappa, alpha=None):
    """Direct numerical determinant, one LU factorisation per point."""
    kappa = np.asarray(kappa, dtype=complex)
    out = np.array([np.linalg.det(resonance_matrix(config, k, alpha))
                    for k in kappa.reshape(-1)]).reshape(kappa.shape)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class ExpTerm:
    """One exponential ``coeff(kappa) * exp(i kappa sigma)``.

    ``coeff`` and ``coeff_mass`` hold ascending powers of kappa; the mass is
    the entrywise sum of absolute values of everything that was added into
    ``coeff`` and serves as the scale for zero tests.
    """

    sigma: float
    sigma_class: tuple
    coeff: np.ndarray = field(compare=False)
    coeff_mass: np.ndarray = field(compare=False, repr=False)

    @property
    def degree(self) -> int:
        return len(self.coeff) - 1


@dataclass(frozen=True)
class PrunedTerm:
    sigma: float
    sigma_class: tuple
    residual: float
    mass: float


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if len(nz) else c[:0]


class ExpPolynomial:
    """Finite sum of polynomial-times-exponential terms, sorted by sigma."""

    def __init__(self, terms, alpha=None, n_points=None, alphabet=None, pruned=(),
                 tolerance=1e-9):
        self.terms = tuple(sorted(terms, key=lambda t: (t.sigma, t.sigma_class)))
        self.alpha = alpha
        self.n_points = n_points
        self.alphabet = alphabet
        self.pruned = tuple(pruned)
        self.tolerance = alphabet.tolerance if alphabet is not None else tolerance
        deg = max((t.degree for t in self.terms), default=0)
        self._sigma = np.array([t.sigma for t in self.terms])
        self._coef = np.zeros((len(self.terms), deg + 1), dtype=complex)
        for i, t in enumerate(self.terms):
            self._coef[i, : len(t.coeff)] = t.coeff
        self._dcoef = self._coef[:, 1:] * np.arange(1, deg + 1)

    @classmethod
    def from_terms(cls, pairs, alpha=None) -> "ExpPolynomial":
        """Build from ``(sigma, coefficients)`` pairs, coefficients ascending."""
        terms = []
        for i, (sigma, coeff) in enumerate(pairs):
            c = _trim(np.asarray(coeff, dtype=complex))
            if len(c):
                terms.append(ExpTerm(float(sigma), (i,), c, np.abs(c)))
        return cls(terms, alpha=alpha)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"ExpPolynomial({len(self.terms)} terms, sigma_max={self.sigma_max:.6g})"

    @property
    def sigma_min(self) -> float:
        return self.terms[0].sigma

    @property
    def sigma_max(self) -> float:
        return self.terms[-1].sigma

    def term(self, sigma_class) -> ExpTerm | None:
        for t in self.terms:
            if t.sigma_class == tuple(sigma_class):
                return t
        return None

    # evaluation --------------------------------------------------------

    def _horner(self, coef, z):
        out = np.zeros((coef.shape[0], z.size), dtype=complex)
        for j in range(coef.shape[1] - 1, -1, -1):
            out = out * z[None, :] + coef[:, j:j + 1]
        return out

    def scaled(self, kappa, derivative=False):
        """Values divided by ``exp(log_scale)`` to stay within float range.

        Returns ``(value, dvalue, log_scale, mass)`` where ``mass`` is the
        scaled L1 mass of the terms (``dvalue`` is None unless requested).
        """
        z = np.asarray(kappa, dtype=complex).reshape(-1)
        vals = self._horner(self._coef, z)
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(vals)) - np.outer(self._sigma, z.imag)
        scale = np.max(logs, axis=0)
        scale = np.where(np.isfinite(scale), scale, 0.0)
        phase = np.exp(1j * np.outer(self._sigma, z.real) - np.outer(self._sigma, z.imag)
                       - scale[None, :])
        value = (vals * phase).sum(axis=0)
        mass = (np.abs(vals) * np.abs(phase)).sum(axis=0)
        dvalue = None
        if derivative:
            dvals = self._horner(self._dcoef, z) if self._dcoef.shape[1] else 0 * vals
            dvalue = ((dvals + 1j * self._sigma[:, None] * vals) * phase).sum(axis=0)
        return value, dvalue, scale, mass

    def _reshape(self, out, kappa):
        shape = np.shape(kappa)
        out = out.reshape(shape)
        return out[()] if out.ndim == 0 else out

    def __call__(self, kappa):
        value, _, scale, _ = self.scaled(kappa)
        return self._reshape(value * np.exp(scale), kappa)

    def derivative(self, kappa):
        _, dvalue, scale, _ = self.scaled(kappa, derivative=True)
        return self._reshape(dvalue * np.exp(scale), kappa)

    def log_abs(self, kappa):
        value, _, scale, _ = self.scaled(kappa)
        with np.errstate(divide="ignore"):
            return self._reshape(np.log(np.abs(value)) + scale, kappa)

    def l1_mass(self, kappa):
        _, _, scale, mass = self.scaled(kappa)
        return self._reshape(mass * np.exp(scale), kappa)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "terms": [
                {
                    "sigma": t.sigma,
                    "sigma_class": list(t.sigma_class),
                    "coeff": [[c.real, c.imag] for c in t.coeff],
                }
                for t in self.terms
            ],
        }


def from_determinant(config: PointConfig, alphabet: LengthAlphabet | None = None,
                     eps: float = CANCEL_EPS) -> ExpPolynomial:
    """Expand the resonance determinant over all permutations (N <= 10).

    A permutation with ``f`` fixed points contributes
    ``sign * prod(-1 / (4 pi l)) * (alpha - i kappa/4pi)^f`` at the exponent
    given by its length-class vector.  Contributions are accumulated per
    (class vector, f); an accumulated amount is dropped when it is below
    ``eps`` times the summed magnitudes that formed it.
    """
    check_capacity(config.n, "from_determinant")
    if alphabet is None:
        alphabet = build_length_alphabet(config)
    n, k = config.n, alphabet.size
    weight = -1.0 / (FOUR_PI * alphabet.length_matrix() + np.eye(n))
    np.fill_diagonal(weight, 1.0)
    table = permutation_table(alphabet.class_matrix(), k, weight)
    contrib = table.sign * table.weight
    amount = np.bincount(table.key_index, weights=contrib, minlength=len(table.keys))
    mass = np.bincount(table.key_index, weights=np.abs(contrib), minlength=len(table.keys))

    base = np.array([config.alpha, -1j / FOUR_PI])
    groups: dict = {}
    for key, a, w in zip(table.keys, amount, mass):
        groups.setdefault(key[:k], []).append((key[k], a, w))

    terms, pruned = [], []
    for vec, parts in groups.items():
        sigma = alphabet.length_of(vec)
        coeff = np.zeros(n + 1, dtype=complex)
        cmass = np.zeros(n + 1)
        worst, total = 0.0, 0.0
        for f, a, w in parts:
            total += w
            if abs(a) < eps * w:
                worst = max(worst, abs(a) / w)
                continue
            p = npoly.polypow(base, f) if f else np.array([1.0 + 0j])
            coeff[: len(p)] += a * p
            cmass[: len(p)] += w * np.abs(p)
        coeff = _trim(coeff)
        if len(coeff):
            terms.append(ExpTerm(sigma, vec, coeff, cmass[: len(coeff)]))
        else:
            pruned.append(PrunedTerm(sigma, vec, float(worst), float(total)))
    pruned.sort(key=lambda p: p.sigma)
    return ExpPolynomial(terms, alpha=config.alpha, n_points=n, alphabet=alphabet,
                         pruned=pruned)


def evaluate(F: ExpPolynomial, alpha, kappa):
    """``F(kappa)``; ``alpha`` must match the strength F was built for."""
    _check_alpha(F, alpha)
    return F(kappa)


def evaluate_derivative(F: ExpPolynomial, alpha, kappa):
    _check_alpha(F, alpha)
    return F.derivative(kappa)


def _check_alpha(F, alpha):
    if alpha is not None and F.alpha is not None and float(alpha) != F.alpha:
        raise InvalidParameterError(
            f"exponential polynomial was built for alpha={F.alpha}, not {alpha}"
        )


def _sigma_groups(F: ExpPolynomial):
    groups: list = []
    for t in F.terms:
        if groups and abs(t.sigma - groups[-1][0].sigma) <= F.tolerance * max(t.sigma, 1.0):
            groups[-1].append(t)
        else:
            groups.append([t])
    return groups


def _group_survives(group, eps) -> bool:
    deg = max(len(t.coeff) for t in group)
    c = np.zeros(deg, dtype=complex)
    w = np.zeros(deg)
    for t in group:
        c[: len(t.coeff)] += t.coeff
        w[: len(t.coeff)] += t.coeff_mass
    return bool(np.any(np.abs(c) > eps * w))


def leading_terms(F: ExpPolynomial, eps: float = CANCEL_EPS) -> list:
    """Terms of the highest surviving exponent.

    Terms whose sigmas agree within the alphabet tolerance are the same
    exponential, so they are summed before the zero test.
    """
    for group in reversed(_sigma_groups(F)):
        if _group_survives(group, eps):
            return group
    raise RuntimeError("exponential polynomial has no surviving term")


def effective_size(F: ExpPolynomial, eps: float = CANCEL_EPS) -> float:
    """``sigma_max - sigma_min`` over surviving exponents."""
    if not F.terms:
        raise RuntimeError("empty exponential polynomial")
    lowest = next(g for g in _sigma_groups(F) if _group_survives(g, eps))
    return leading_terms(F, eps)[0].sigma - lowest[0].sigma


@dataclass
class GrowthFit:
    estimate: float
    log_power: float
    residual: float
    t_range: tuple
    history: list


def effective_size_growth_estimate(config: PointConfig, alpha=None, t_max: float = 200.0,
                                   samples: int = 64, t0: float = 20.0,
                                   F: ExpPolynomial | None = None,
                                   max_doublings: int = 14, full: bool = False):
    """Exponential growth rate of ``|F(-i t)|`` as ``t -> infinity``.

    ``log|F(-it)|`` is sampled logarithmically on ``[t0, t_max]`` and the
    upper half is fitted by ``w t + p log t + c``; the ``log t`` column
    absorbs the polynomial prefactor.  The window is pushed outwards
    (``t_max`` doubled) until two successive estimates agree and the fit
    residual is small, which suppresses subleading exponentials.
    """
    if alpha is not None and alpha != config.alpha:
        config = config.with_alpha(alpha)
    if F is None:
        F = from_determinant(config)
    if samples < 8:
        raise InvalidParameterError("need at least 8 samples")
    history = []
    lo, hi = float(t0), float(t_max)
    prev = None
    for _ in range(max_doublings + 1):
        t = np.geomspace(lo, hi, samples)[samples // 2:]
        y = F.log_abs(-1j * t)
        if not np.all(np.isfinite(y)):
            raise EstimationError("log|F(-it)| is not finite on the sampling window")
        design = np.column_stack([t, np.log(t), np.ones_like(t)])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
        history.append((hi, float(coef[0]), resid))
        if prev is not None and abs(coef[0] - prev) < 1e-7 and resid < 1e-6:
            w = max(float(coef[0]), 0.0)
            fit = GrowthFit(w, float(coef[1]), resid, (lo, hi), history)
            return fit if full else w
        prev = coef[0]
        lo, hi = hi / 2, hi * 2
    raise EstimationError(
        "growth-rate fit did not converge; (t_max, slope, residual) history: "
        + ", ".join(f"({h:.0f}, {s:.6g}, {r:.2g})" for h, s, r in history)
    )
