from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectracon.errors import InvariantViolation
from spectracon.families import (ball_elliptope_pair, choi_map_spec, choi_pair,
                                 disk_pair)
from spectracon.posmap import (_equation_system, _smat, _svec, choi_matrix,
                               cp_sdfp, implication_report)
from spectracon.pencil import extend


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=999))
@settings(max_examples=30)
def test_svec_smat_roundtrip(d, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(d, d))
    m = (m + m.T) / 2
    back = _smat(_svec(m), d)
    np.testing.assert_allclose(back, m, atol=1e-12)
    # svec is an isometry for the Frobenius inner product
    assert float(_svec(m) @ _svec(m)) == pytest.approx(
        float(np.sum(m * m)), rel=1e-10)


def test_disk_transition():
    lo = cp_sdfp(*disk_pair(0.707))
    hi = cp_sdfp(*disk_pair(0.708))
    assert lo.kind == "Feasible"
    assert hi.kind == "Infeasible"
    assert lo.margin > 0 > hi.margin


def test_feasible_witness_solves_equations():
    a, b = disk_pair(0.5)
    res = cp_sdfp(a, b)
    assert res.kind == "Feasible"
    c = res.witness
    assert float(np.linalg.eigvalsh(c).min()) >= -1e-8
    eq, rhs, d = _equation_system(extend(a), b)
    assert c.shape == (d, d)
    assert float(np.linalg.norm(eq @ _svec(c) - rhs)) <= 1e-6 * (1 + np.linalg.norm(rhs))


def test_elliptope_pair_feasible():
    res = cp_sdfp(*ball_elliptope_pair(3))
    assert res.kind == "Feasible"


def test_choi_matrix_not_psd():
    c = choi_matrix(choi_map_spec())
    assert float(np.linalg.eigvalsh(c).min()) == pytest.approx(-0.118034, abs=1e-5)


def test_choi_slices_infeasible():
    res = cp_sdfp(*choi_pair())
    assert res.kind == "Infeasible"
    assert res.margin == pytest.approx(-0.048584, abs=1e-4)


def test_implication_report_consistent_inputs():
    a, b = disk_pair(0.5)
    cp = cp_sdfp(a, b)
    lam0 = SimpleNamespace(reliable=True, value=0.5, order=0)
    mlo = SimpleNamespace(reliable=True, value=0.4, order=2)
    mhi = SimpleNamespace(reliable=True, value=0.5, order=3)
    rep = implication_report(cp=cp, lam0=lam0, moments=[mhi, mlo],
                             grid_value=0.6)
    assert rep["violations"] == []
    names = {c["name"] for c in rep["checks"]}
    assert "certificate_implies_gram" in names
    assert "moment_monotone_2_3" in names
    assert "moment_below_sampled_2" in names


def test_implication_report_strict_raises():
    a, b = disk_pair(0.5)
    cp = cp_sdfp(a, b)  # Feasible
    bad = SimpleNamespace(reliable=True, value=-0.5, order=0)
    with pytest.raises(InvariantViolation):
        implication_report(cp=cp, lam0=bad)
    rep = implication_report(cp=cp, lam0=bad, strict=False)
    assert rep["violations"] == ["certificate_implies_gram"]
