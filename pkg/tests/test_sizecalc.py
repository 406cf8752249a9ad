import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reslab.errors import CapacityError
from reslab.geometry import (
    PointConfig,
    build_antipodal_sphere_config,
    build_sphere_center_config,
    distance_matrix,
    random_config,
)
from reslab.pseudoorbit import format_cycles, parse_cycles
from reslab.sizecalc import size_assignment, size_bruteforce, weyl_necessary_condition

from conftest import KITE_V, random_configs


def naive_size(config):
    d = distance_matrix(config)
    n = config.n
    return max(sum(d[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def test_segment(segment):
    report = size_bruteforce(segment)
    assert report.v_x == 2.0
    assert report.maximizers == [(1, 0)]
    assert weyl_necessary_condition(report)
    assert size_assignment(segment) == 2.0


def test_triangle_three_cycles(triangle):
    report = size_bruteforce(triangle)
    assert report.v_x == pytest.approx(3.3, abs=1e-14)
    assert {format_cycles(p) for p in report.maximizers} == {"(1,2,3)", "(1,3,2)"}
    assert len(report.maximizer_classes) == 1


def test_collinear_triangle_ties():
    cfg = PointConfig([(0, 0, 0), (1, 0, 0), (2.5, 0, 0)])
    report = size_bruteforce(cfg)
    assert report.v_x == pytest.approx(5.0)
    assert {format_cycles(p) for p in report.maximizers} == {"(1,2,3)", "(1,3,2)", "(1,3)"}


def test_kite_four_maximizers(kite):
    report = size_bruteforce(kite)
    assert report.v_x == pytest.approx(KITE_V, rel=1e-15)
    expected = {parse_cycles(c, 4) for c in ("(1,2)(3,4)", "(1,2,4,3)", "(1,3,4,2)", "(1,3)(2,4)")}
    assert set(report.maximizers) == expected
    assert not weyl_necessary_condition(report)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sphere_even_unique(m):
    report = size_bruteforce(build_antipodal_sphere_config(m))
    assert report.v_x == pytest.approx(4 * m, rel=1e-14)
    assert report.maximizers == [tuple(list(range(m, 2 * m)) + list(range(m)))]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sphere_odd_maximizers(m):
    report = size_bruteforce(build_sphere_center_config(m))
    assert report.v_x == pytest.approx(4 * m, rel=1e-14)
    assert len(report.maximizers) == 2 * m + 1
    assert not weyl_necessary_condition(report)


def test_assignment_sphere_m3():
    assert size_assignment(build_antipodal_sphere_config(3)) == pytest.approx(12.0, rel=1e-14)


def test_assignment_random_n8(rng):
    cfg = random_config(8, rng)
    assert size_assignment(cfg) == size_bruteforce(cfg).v_x
    assert size_bruteforce(cfg).v_x == pytest.approx(naive_size(cfg), rel=1e-13)


@pytest.mark.parametrize("cfg", random_configs(8, (2, 7), seed=7))
def test_bruteforce_matches_naive(cfg):
    assert size_bruteforce(cfg).v_x == pytest.approx(naive_size(cfg), rel=1e-13)


def test_capacity_cap(rng):
    cfg = random_config(11, rng)
    with pytest.raises(CapacityError, match="size_assignment"):
        size_bruteforce(cfg)
    assert size_assignment(cfg) > 0


def test_per_permutation_lengths(kite):
    report = size_bruteforce(kite, with_lengths=True)
    assert len(report.per_permutation_length) == 24
    assert report.v_x == max(report.per_permutation_length.values())
    assert report.per_permutation_length[(0, 1, 2, 3)] == 0.0


def _rotation(theta, phi):
    rz = np.array([[math.cos(theta), -math.sin(theta), 0], [math.sin(theta), math.cos(theta), 0], [0, 0, 1]])
    rx = np.array([[1, 0, 0], [0, math.cos(phi), -math.sin(phi)], [0, math.sin(phi), math.cos(phi)]])
    return rz @ rx


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6),
       theta=st.floats(0, 2 * math.pi), phi=st.floats(0, math.pi),
       scale=st.floats(0.1, 10))
def test_size_invariances(seed, n, theta, phi, scale):
    rng = np.random.default_rng(seed)
    cfg = random_config(n, rng)
    x = cfg.as_array()
    v = size_bruteforce(cfg).v_x
    moved = x @ _rotation(theta, phi).T + rng.normal(size=3)
    assert size_assignment(PointConfig(moved.tolist())) == pytest.approx(v, rel=1e-12)
    perm = rng.permutation(n)
    assert size_assignment(PointConfig(x[perm].tolist())) == pytest.approx(v, rel=1e-12)
    assert size_assignment(PointConfig((scale * x).tolist())) == pytest.approx(scale * v, rel=1e-12)
    assert v >= 2 * distance_matrix(cfg).max() * (1 - 1e-12)
