import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectracon.errors import InvalidInput
from spectracon.families import choi_map_spec, choi_phi
from spectracon.pencil import (ellipsoid_pencil, elliptope_pencil, extend,
                               map_from_callable, map_to_pencils, pencil,
                               pencil_from_json, pencil_to_json,
                               polytope_pencil, random_pencil, traceless_basis)
from spectracon.symcore import is_psd, min_eigenvalue


def test_evaluate_matches_manual():
    p = pencil([np.eye(2), np.diag([1.0, -1.0])])
    x = np.array([0.3])
    assert np.allclose(p.evaluate(x).mat, np.diag([1.3, 0.7]))


def test_evaluate_rejects_bad_shape():
    p = pencil([np.eye(2), np.eye(2)])
    with pytest.raises(InvalidInput):
        p.evaluate([1.0, 2.0])


def test_ellipsoid_membership_boundary():
    p = ellipsoid_pencil(np.array([1.0, 2.0]))
    assert is_psd(p.evaluate([0.5, 1.0]))
    assert min_eigenvalue(p.evaluate([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    assert not is_psd(p.evaluate([1.05, 0.0]), tol=1e-9)
    assert is_psd(p.evaluate([0.0, 1.9]))
    assert not is_psd(p.evaluate([0.0, 2.1]))


def test_polytope_membership():
    amat = np.array([[1.0, 0.0], [-1.0, 0.0]])
    p = polytope_pencil(amat, np.ones(2))
    assert is_psd(p.evaluate([0.5, 3.0]))  # second coordinate is free
    assert not is_psd(p.evaluate([1.5, 0.0]))


def test_elliptope_vertices():
    p = elliptope_pencil(3)
    assert p.n == 3
    # rank-one sign matrix ss^T has x = (s1 s2, s1 s3, s2 s3)
    for s in ([1, 1, 1], [1, -1, 1]):
        x = [s[0] * s[1], s[0] * s[2], s[1] * s[2]]
        assert is_psd(p.evaluate(x))
    assert not is_psd(p.evaluate([1.0, 1.0, -1.0]))


def test_extend_prepends_unit():
    p = ellipsoid_pencil(np.ones(2))
    e = extend(p)
    assert e.k == p.k + 1
    m = e.evaluate([0.3, 0.4]).mat
    assert m[0, 0] == 1.0
    assert np.allclose(m[0, 1:], 0.0)
    assert np.allclose(m[1:, 1:], p.evaluate([0.3, 0.4]).mat)


def test_random_pencil_deterministic():
    p1 = random_pencil(3, 4, seed=11)
    p2 = random_pencil(3, 4, seed=11)
    assert np.array_equal(p1.coeff_array(), p2.coeff_array())
    assert not np.array_equal(p1.coeff_array(),
                              random_pencil(3, 4, seed=12).coeff_array())


def test_traceless_basis_orthonormal():
    basis = traceless_basis(3)
    assert len(basis) == 5
    for i, g in enumerate(basis):
        assert abs(np.trace(g)) < 1e-12
        for j, h in enumerate(basis):
            ip = float(np.tensordot(g, h))
            assert ip == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)


def test_map_slice_pencils():
    spec = choi_map_spec()
    a, b = map_to_pencils(spec)
    assert a.n == b.n == 5
    assert np.allclose(a.coeffs[0].mat, np.eye(3) / 3.0)
    # the outer pencil tracks the map applied to the slice
    x = np.array([0.1, -0.2, 0.05, 0.3, -0.1])
    assert np.allclose(b.evaluate(x).mat, choi_phi(a.evaluate(x).mat),
                       atol=1e-12)


def test_map_from_callable_images():
    spec = map_from_callable(2, lambda m: 2.0 * np.asarray(m))
    assert spec.l == 2
    arg = np.array([[1.0, 0.5], [0.5, 2.0]])
    assert np.allclose(spec.apply(arg).mat, 2.0 * arg)


def test_json_round_trip_exact(tmp_path):
    p = random_pencil(2, 3, seed=5)
    q = pencil_from_json(pencil_to_json(p))
    assert np.array_equal(p.coeff_array(), q.coeff_array())


def test_json_rejects_garbage():
    with pytest.raises(InvalidInput):
        pencil_from_json("{\"coeffs\": \"nope\"}")


@given(st.integers(1, 3), st.integers(2, 4), st.integers(0, 2 ** 31 - 1))
def test_json_round_trip_property(n, k, seed):
    p = random_pencil(n, k, seed=seed)
    q = pencil_from_json(pencil_to_json(p))
    assert np.array_equal(p.coeff_array(), q.coeff_array())
