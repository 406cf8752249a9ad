import math

import numpy as np
import pytest

from reslab.errors import ContourError, InvalidParameterError
from reslab.exppoly import ExpPolynomial, effective_size, from_determinant
from reslab.geometry import build_nonweyl4, build_segment, build_triangle
from reslab.roots import (
    Zero,
    classify_zero,
    count_zeros_disc,
    counting_curve,
    locate_zeros,
    rectangle_winding,
)

from conftest import KITE_V, KITE_W

FOUR_PI = 4 * math.pi

# zeros of kappa^2 + exp(2 i kappa) in [0, 20] x [-5, 0], from mpmath.findroot at 30 digits
SEGMENT_ZEROS = [
    1.337235701431 - 0.318131505205j,
    4.375185153062 - 1.533913319794j,
    7.588631178473 - 2.062277729598j,
    10.776299516115 - 2.401585104868j,
    13.949208334533 - 2.653191974039j,
    17.113535539412 - 2.853581755409j,
]


@pytest.fixture
def F_segment():
    return from_determinant(build_segment())


def test_classify():
    assert classify_zero(1 - 0.5j) == "resonance"
    assert classify_zero(2j) == "eigenvalue"
    assert classify_zero(3 + 1e-10j) == "real-axis"
    assert Zero(1 - 0.5j).kind == "resonance"


def test_count_monomial():
    F = ExpPolynomial.from_terms([(0.0, [0, 0, 1])])
    assert count_zeros_disc(F, None, 1.0) == 2


@pytest.mark.parametrize("n", [2, 3, 5])
def test_count_free_term(n):
    alpha = 0.1  # single zero of order n at -4 pi i alpha, |.| = 1.2566
    coeff = np.polynomial.polynomial.polypow([alpha, -1j / FOUR_PI], n)
    F = ExpPolynomial.from_terms([(0.0, coeff)], alpha=alpha)
    assert count_zeros_disc(F, alpha, 1.0) == 0
    assert count_zeros_disc(F, alpha, 2.0) == n


def test_locate_segment_fixture(F_segment):
    zeros = locate_zeros(F_segment, 0.0, (0, 20, -5, 0))
    got = np.array([z.kappa for z in zeros])
    np.testing.assert_allclose(got, SEGMENT_ZEROS, atol=1e-9)
    assert all(z.polished and z.multiplicity == 1 and z.kind == "resonance" for z in zeros)


def test_zero_set_reflection_symmetry(F_segment):
    zeros = locate_zeros(F_segment, 0.0, (-15.3, 15.1, -6.2, 3.7))
    pts = np.array([z.kappa for z in zeros if abs(z.kappa.real) < 15])
    mirrored = -pts.conj()
    for p in mirrored:
        assert np.min(np.abs(pts - p)) < 1e-8


def test_empty_region(F_segment):
    assert locate_zeros(F_segment, 0.0, (-5, 5, 20, 30)) == []


@pytest.mark.parametrize("cfg", [build_segment(alpha=0.0), build_triangle(1.3, 1.1, 0.9, -0.2),
                                 build_nonweyl4(1, 0.25, 0.5, 0.3)])
@pytest.mark.parametrize("R", [10.0, 20.0, 50.0])
def test_count_matches_locate(cfg, R):
    F = from_determinant(cfg)
    count, used = count_zeros_disc(F, cfg.alpha, R, return_radius=True)
    zeros = locate_zeros(F, cfg.alpha, (-1.001 * used, 1.002 * used, -1.003 * used, 1.0005 * used))
    assert sum(z.multiplicity for z in zeros if abs(z.kappa) < used) == count


def test_rectangle_conservation(kite):
    F = from_determinant(kite)
    parent = (-12.3, 9.7, -6.1, 4.4)
    xs = [-12.3, -4.05, 0.37, 9.7]
    ys = [-6.1, -1.13, 4.4]
    parts = [(xs[i], xs[i + 1], ys[j], ys[j + 1]) for i in range(3) for j in range(2)]
    assert sum(rectangle_winding(F, r) for r in parts) == rectangle_winding(F, parent) > 0


def test_counts_nondecreasing(F_segment):
    counts = [count_zeros_disc(F_segment, 0.0, r) for r in np.linspace(1, 60, 40)]
    assert counts == sorted(counts)


def test_eigenvalue_count_stabilises():
    F = from_determinant(build_segment(alpha=-0.05))
    kinds = []
    for R in (5, 10, 20, 40):
        zeros = locate_zeros(F, -0.05, (-R, 1.01 * R, -R, 1.02 * R))
        kinds.append(sum(1 for z in zeros if z.kind == "eigenvalue" and abs(z.kappa) < R))
    assert len(set(kinds)) == 1 and kinds[0] >= 1


def test_double_root_multiplicity():
    F = ExpPolynomial.from_terms([(0.0, [1, -2, 1])])  # (kappa - 1)^2
    zeros = locate_zeros(F, None, (-2.1, 3.3, -1.7, 2.2))
    assert len(zeros) == 1
    assert zeros[0].multiplicity == 2
    assert abs(zeros[0].kappa - 1) < 1e-6


def test_zero_on_contour_is_nudged():
    F = ExpPolynomial.from_terms([(0.0, [-1, 1])])  # zero at kappa = 1
    count, used = count_zeros_disc(F, None, 1.0, return_radius=True)
    assert count == 1 and used > 1.0
    with pytest.raises(ContourError):
        count_zeros_disc(F, None, 1.0, max_nudges=0)


def test_locate_validation(F_segment):
    with pytest.raises(InvalidParameterError):
        locate_zeros(F_segment, 0.0, (1, 0, 0, 1))
    with pytest.raises(InvalidParameterError):
        locate_zeros(F_segment, 0.0, (0, 1, 0, 1), tol=1e-14)


def test_slope_segment(F_segment):
    curve = counting_curve(F_segment, 0.0, 200, 100)
    assert curve.slope == pytest.approx(2 / math.pi, rel=0.03)
    assert [c for _, c in curve.samples] == sorted(c for _, c in curve.samples)


def test_slope_converges(F_segment):
    errs = [abs(counting_curve(F_segment, 0.0, r, 100).slope - 2 / math.pi) for r in (100, 200, 400)]
    assert errs[2] < errs[0]


@pytest.mark.slow
def test_slope_kite_is_effective_size():
    F = from_determinant(build_nonweyl4(1, 0.25, 0.5))
    slope = counting_curve(F, 0.0, 400, 100).slope
    assert slope == pytest.approx(KITE_W / math.pi, rel=0.03)
    assert abs(slope - KITE_V / math.pi) > 0.1 * KITE_V / math.pi


@pytest.mark.slow
def test_slope_alpha_independent():
    slopes = []
    for alpha in (0.0, 5.0):
        cfg = build_triangle(1.3, 1.1, 0.9, alpha)
        F = from_determinant(cfg)
        slopes.append(counting_curve(F, alpha, 300, 100).slope)
    assert slopes[0] == pytest.approx(slopes[1], rel=0.03)


def test_saturated_counts():
    coeff = np.polynomial.polynomial.polypow([0.0, -1j / FOUR_PI], 3)
    F = ExpPolynomial.from_terms([(0.0, coeff)], alpha=0.0)
    curve = counting_curve(F, 0.0, 50, 10)
    assert curve.slope == 0.0 and curve.intercept == 3
