import numpy as np
import pytest

from spectracon.errors import InvalidInput
from spectracon.families import ball_elliptope_pair, disk_pair
from spectracon.sosrelax import (certificate_gap, count_unknowns, lambda_sos,
                                 sos_relaxation)


def test_count_unknowns_closed_forms():
    c = count_unknowns(2, 3, 2, 0)
    assert c["sos_gram"] == 25
    c = count_unknowns(2, 3, 2, 2)
    assert c["moment_matrix"] == 105
    # moment_total counts all moments except the pinned constant
    assert c["moment_total"] == 69


def test_disk_order0_reference():
    res = lambda_sos(*disk_pair(1.0), 0)
    assert res.reliable
    assert res.value == pytest.approx(1.0 - np.sqrt(2.0), abs=1e-5)


def test_disk_order0_matches_order2_moment_when_nonnegative():
    # on certifiable instances the order-0 Gram bound and the order-2
    # moment bound agree; 0.7 sits just inside the threshold
    res = lambda_sos(*disk_pair(0.7), 0)
    assert res.reliable
    assert res.value == pytest.approx(0.010051, abs=1e-4)


def test_disk_order1_exact():
    nu = 0.8
    res = lambda_sos(*disk_pair(nu), 1)
    assert res.reliable
    assert res.value == pytest.approx(1.0 - nu, abs=1e-5)


@pytest.mark.parametrize("l,ref", [(3, 0.292893), (4, 0.133975)])
def test_ball_in_elliptope_order0(l, ref):
    res = lambda_sos(*ball_elliptope_pair(l), 0)
    assert res.reliable
    assert res.value == pytest.approx(ref, abs=1e-5)


def test_gram_blocks_are_psd():
    res = lambda_sos(*disk_pair(0.8), 1)
    for g in (res.gram_s, res.gram_t):
        assert float(np.linalg.eigvalsh(g).min()) >= -1e-7


def test_certificate_identity_holds_off_sample():
    a, b = disk_pair(0.8)
    res = lambda_sos(a, b, 1)
    rng = np.random.default_rng(7)
    pts = rng.uniform(-1.5, 1.5, size=(25, a.n))
    assert certificate_gap(a, b, res, pts) <= 1e-6


def test_certificate_gap_requires_grams():
    a, b = disk_pair(0.8)
    res = lambda_sos(a, b, 0)
    bare = type(res)(value=res.value, status="infeasible", order=0,
                     info=res.info, gram_s=None, gram_t=None,
                     solution=res.solution)
    with pytest.raises(InvalidInput):
        certificate_gap(a, b, bare, np.zeros((1, a.n)))


def test_info_dimensions():
    a, b = disk_pair(0.7)
    _, info = sos_relaxation(a, b, 1)
    assert (info.n, info.k, info.l) == (2, 3, 2)
    assert info.basis_n == 3  # 1, x1, x2
    assert info.gram_s_dim == info.basis_n * a.k * b.k
    assert info.gram_t_dim == info.basis_n * b.k
