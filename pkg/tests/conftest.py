import math

import numpy as np
import pytest

from reslab.geometry import (
    build_nonweyl4,
    build_segment,
    build_sphere_center_config,
    build_triangle,
    random_config,
)

SQ17 = math.sqrt(17) / 4
SQ5 = math.sqrt(5) / 4
KITE_W = 1 + SQ17 + SQ5
KITE_V = 2 * (SQ17 + SQ5)


@pytest.fixture
def segment():
    return build_segment()


@pytest.fixture
def kite():
    return build_nonweyl4(1.0, 0.25, 0.5)


@pytest.fixture
def triangle():
    return build_triangle(1.3, 1.1, 0.9)


@pytest.fixture
def sphere_center1():
    return build_sphere_center_config(1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_configs(count, n_range, seed, alpha=0.0):
    rng = np.random.default_rng(seed)
    return [random_config(int(rng.integers(n_range[0], n_range[1] + 1)), rng, alpha)
            for _ in range(count)]
