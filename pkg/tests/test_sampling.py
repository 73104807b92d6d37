import numpy as np
import pytest

from spectracon.errors import InvalidInput
from spectracon.families import disk_pair
from spectracon.pencil import ellipsoid_pencil, pencil
from spectracon.sampling import (eigen_margin, interior_point, mu_grid,
                                 refutation_search, sample_spectrahedron)


def test_interior_point_strictly_feasible():
    p = ellipsoid_pencil([1.0, 2.0])
    x = interior_point(p)
    assert eigen_margin(p, x) > 0


def test_interior_point_empty_set_raises():
    empty = pencil([np.diag([-1.0, -1.0]), np.diag([1.0, -1.0])])
    with pytest.raises(InvalidInput):
        interior_point(empty)


def test_samples_feasible_and_deterministic():
    p = ellipsoid_pencil([1.0, 0.5])
    xs = sample_spectrahedron(p, 40, seed=3)
    ys = sample_spectrahedron(p, 40, seed=3)
    np.testing.assert_array_equal(xs, ys)
    assert xs.shape == (40, 2)
    for x in xs:
        assert eigen_margin(p, x) > 0
    # a different seed explores different points
    zs = sample_spectrahedron(p, 40, seed=4)
    assert np.max(np.abs(zs - xs)) > 1e-6


def test_samples_cover_the_set():
    # the chain should not stay near the start: spread over the ellipsoid
    p = ellipsoid_pencil([1.0, 1.0])
    xs = sample_spectrahedron(p, 200, seed=0)
    assert np.std(xs[:, 0]) > 0.2
    assert np.std(xs[:, 1]) > 0.2


def test_mu_grid_upper_bounds_relaxation():
    a, b = disk_pair(0.9)
    g = mu_grid(a, b)
    # the sampled estimate sits above the true margin 1 - nu = 0.1 and
    # far above the lossy frozen order-2 bound -0.5456
    assert g >= (1.0 - 0.9) - 1e-9
    assert g <= 0.15


def test_refutation_search_finds_witness_outside():
    a, b = disk_pair(1.2)
    hit = refutation_search(a, b)
    assert hit is not None
    assert hit["b_margin"] < 0
    assert hit["a_margin"] >= -1e-9


def test_refutation_search_empty_handed_inside():
    a, b = disk_pair(0.8)
    assert refutation_search(a, b) is None
