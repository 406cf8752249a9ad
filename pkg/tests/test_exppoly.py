import cmath
import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from reslab.errors import CapacityError, InvalidParameterError
from reslab.exppoly import (
    ExpPolynomial,
    determinant,
    effective_size,
    effective_size_growth_estimate,
    evaluate,
    evaluate_derivative,
    from_determinant,
    leading_terms,
    matrix_entry,
)
from reslab.geometry import (
    PointConfig,
    build_length_alphabet,
    build_nonweyl4,
    build_sphere_center_config,
    random_config,
)
from reslab.sizecalc import size_bruteforce

from conftest import KITE_V, KITE_W, random_configs

FOUR_PI = 4 * math.pi


def test_matrix_entries(segment):
    cfg = segment.with_alpha(0.3)
    assert matrix_entry(cfg, 0, 0, 0) == 0.3
    assert matrix_entry(cfg, 0, 1, 0) == pytest.approx(-1 / FOUR_PI, rel=1e-15)
    assert matrix_entry(cfg, 1, 0, 4j * math.pi) == pytest.approx(
        -math.exp(-4 * math.pi) / FOUR_PI, rel=1e-14)


def test_segment_terms(segment):
    cfg = segment.with_alpha(0.6)
    F = from_determinant(cfg)
    assert [t.sigma for t in F.terms] == [0.0, 2.0]
    np.testing.assert_allclose(
        F.terms[0].coeff, [0.36, -2j * 0.6 / FOUR_PI, -1 / FOUR_PI**2], rtol=1e-15)
    np.testing.assert_allclose(F.terms[1].coeff, [-1 / FOUR_PI**2], rtol=1e-15)


def test_three_cycle_coefficient(triangle):
    F = from_determinant(triangle)
    top = F.terms[-1]
    assert top.sigma == pytest.approx(3.3, abs=1e-14)
    # (-1)^N F carries +2 / ((4 pi)^3 l12 l23 l13)
    expected = 2 / (FOUR_PI**3 * 1.3 * 1.1 * 0.9)
    np.testing.assert_allclose((-1) ** 3 * top.coeff, [expected], rtol=1e-14)


def test_kite_leading_term_cancels(kite):
    F = from_determinant(kite)
    assert len(F.pruned) == 1
    gone = F.pruned[0]
    assert gone.sigma == pytest.approx(KITE_V, rel=1e-15)
    assert gone.residual < 1e-12
    assert F.sigma_max == pytest.approx(KITE_W, rel=1e-15)
    assert effective_size(F) == pytest.approx(KITE_W, rel=1e-15)


def test_free_term_exact(rng):
    for n in (2, 4, 6):
        cfg = random_config(n, rng, alpha=1.7)
        F = from_determinant(cfg)
        assert F.sigma_min == 0.0
        expected = npoly.polypow([1.7, -1j / FOUR_PI], n)
        np.testing.assert_array_equal(F.terms[0].coeff, expected)
        assert F.terms[0].degree == n


def test_evaluate_segment(segment):
    F = from_determinant(segment)
    assert evaluate(F, 0.0, 0.0) == pytest.approx(-1 / FOUR_PI**2, rel=1e-15)
    with pytest.raises(InvalidParameterError):
        evaluate(F, 1.0, 0.0)


def test_upper_half_plane_dominated_by_free_term(kite):
    cfg = kite.with_alpha(0.5)
    F = from_determinant(cfg)
    k = 3.0 + 60j
    free = (0.5 - 1j * k / FOUR_PI) ** 4
    assert abs(F(k) / free - 1) < 1e-12


@pytest.mark.parametrize("cfg", random_configs(8, (2, 7), seed=2, alpha=-0.4))
def test_evaluate_matches_determinant(cfg, rng):
    F = from_determinant(cfg)
    k = rng.uniform(-50, 50, 100) + 1j * rng.uniform(-50, 50, 100)
    err = np.abs(F(k) - determinant(cfg, k)) / F.l1_mass(k)
    assert err.max() < 1e-12


def test_derivative_closed_form(segment):
    F = from_determinant(segment)
    for k in (0.3 - 0.2j, 5 + 1j, -2 - 3j):
        expected = (-2 * k - 2j * cmath.exp(2j * k)) / FOUR_PI**2
        assert evaluate_derivative(F, 0.0, k) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("cfg", random_configs(5, (2, 6), seed=3, alpha=0.9))
def test_derivative_finite_difference(cfg, rng):
    F = from_determinant(cfg)
    h = 1e-6
    for k in rng.uniform(-10, 10, 5) + 1j * rng.uniform(-3, 3, 5):
        fd = (F(k + h) - F(k - h)) / (2 * h)
        assert abs(F.derivative(k) - fd) / abs(fd) < 1e-5


def test_constant_term_derivative():
    F = ExpPolynomial.from_terms([(0.0, [5.0])])
    assert F.derivative(1.7 - 2j) == 0


def test_effective_size_examples(segment, sphere_center1):
    assert effective_size(from_determinant(segment)) == 2.0
    assert effective_size(from_determinant(sphere_center1)) == pytest.approx(4.0, rel=1e-14)


def test_sphere_center_leading_coefficient():
    # the e^{4 i m kappa} coefficient is proportional to (4m + 4 pi alpha - i kappa)
    m, alpha = 2, 0.35
    F = from_determinant(build_sphere_center_config(m, alpha))
    top = leading_terms(F)
    coeff = sum(np.pad(t.coeff, (0, 2 - len(t.coeff))) for t in top)
    scale = (-1) ** m / (2 ** (2 * m) * FOUR_PI ** (2 * m + 1))
    np.testing.assert_allclose(coeff, scale * np.array([4 * m + FOUR_PI * alpha, -1j]), rtol=1e-12)


def test_growth_estimate_segment(segment):
    assert effective_size_growth_estimate(segment) == pytest.approx(2.0, abs=1e-3)


def test_growth_estimate_kite(kite):
    w = effective_size_growth_estimate(kite)
    assert w == pytest.approx(KITE_W, abs=1e-3)
    assert abs(w - KITE_V) > 0.5


@pytest.mark.parametrize("cfg", random_configs(20, (2, 6), seed=11, alpha=0.25))
def test_growth_matches_symbolic(cfg):
    F = from_determinant(cfg)
    assert effective_size_growth_estimate(cfg, F=F) == pytest.approx(effective_size(F), abs=1e-3)


def test_alpha_independence(kite, triangle, sphere_center1, rng):
    for cfg in (kite, triangle, sphere_center1, random_config(5, rng)):
        tops = {tuple(sorted(t.sigma_class for t in leading_terms(from_determinant(cfg.with_alpha(a)))))
                for a in (-1, 0, 1, 10)}
        assert len(tops) == 1


@pytest.mark.parametrize("cfg", random_configs(6, (2, 6), seed=17))
def test_sigma_max_bounded_by_size(cfg):
    F = from_determinant(cfg)
    assert F.sigma_max <= size_bruteforce(cfg).v_x * (1 + 1e-12)


@pytest.mark.parametrize("cfg", random_configs(6, (3, 6), seed=23))
def test_generic_configs_have_no_pruning(cfg):
    F = from_determinant(cfg)
    assert F.pruned == ()
    assert effective_size(F) == size_bruteforce(cfg).v_x


def test_from_terms_monomial():
    F = ExpPolynomial.from_terms([(0.0, [0, 0, 1])])
    assert F(2 + 1j) == pytest.approx((2 + 1j) ** 2, rel=1e-15)
    assert effective_size(F) == 0.0


def test_capacity(rng):
    with pytest.raises(CapacityError):
        from_determinant(random_config(11, rng))


def test_json_shape(kite):
    data = from_determinant(kite).to_dict()
    assert set(data["terms"][0]) == {"sigma", "sigma_class", "coeff"}
    assert len(data["terms"][0]["sigma_class"]) == build_length_alphabet(kite).size


@pytest.mark.parametrize("shift, expect_weyl", [(1e-3, True), (1e-12, False)])
def test_near_degenerate_kite(shift, expect_weyl):
    # moving x4 off the mirror axis breaks the tie; below the clustering
    # tolerance the shift is invisible and the cancellation persists
    base = build_nonweyl4(1.0, 0.25, 0.5)
    cfg = PointConfig(base.points[:3] + ((0.5, shift, 0.0),), 0.0)
    F = from_determinant(cfg)
    v = size_bruteforce(cfg).v_x
    w = effective_size(F)
    assert (abs(w - v) < 1e-12) is expect_weyl
    assert effective_size_growth_estimate(cfg, F=F) == pytest.approx(w, abs=1e-3)
    if not expect_weyl:
        assert w == pytest.approx(KITE_W, abs=1e-9)
