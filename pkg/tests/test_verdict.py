import numpy as np
import pytest

from spectracon.errors import InvalidInput
from spectracon.families import disk_pair
from spectracon.pencil import ellipsoid_pencil, pencil
from spectracon.verdict import (Verdict, certification_tolerance,
                                check_containment)


def test_disk_certified_order2():
    v = check_containment(*disk_pair(0.7))
    assert v.status == "Certified"
    assert v.exit_code == 0
    assert v.method == "moment"
    assert v.value == pytest.approx(0.010051, abs=1e-4)


def test_disk_inconclusive_order2():
    # contained, but order 2 cannot see it and no witness exists
    v = check_containment(*disk_pair(0.9))
    assert v.status == "Inconclusive"
    assert v.exit_code == 2
    assert v.witness is None


def test_disk_certified_order3():
    v = check_containment(*disk_pair(0.9), order=3)
    assert v.status == "Certified"
    assert v.value == pytest.approx(0.1, abs=2e-3)


def test_disk_refuted_with_witness():
    a, b = disk_pair(1.2)
    v = check_containment(a, b)
    assert v.status == "Refuted"
    assert v.exit_code == 1
    x = v.witness["x"]
    assert float(np.linalg.eigvalsh(a.evaluate(x).mat).min()) >= -1e-8
    assert float(np.linalg.eigvalsh(b.evaluate(x).mat).min()) < 0


def test_sos_method_certifies():
    v = check_containment(*disk_pair(0.8), order=1, method="sos")
    assert v.status == "Certified"
    assert v.method == "sos"


def test_sos_method_stays_inconclusive_without_witness():
    v = check_containment(*disk_pair(0.9), order=0, method="sos", refute=False)
    assert v.status == "Inconclusive"


def test_sdfp_method_both_sides():
    assert check_containment(*disk_pair(0.7), method="sdfp").status == "Certified"
    v = check_containment(*disk_pair(1.2), method="sdfp")
    assert v.status == "Refuted"


def test_lineality_mismatch_refutes():
    # inner is the whole line, outer a bounded interval
    inner = pencil([np.eye(2), np.zeros((2, 2))])
    outer = ellipsoid_pencil([1.0])
    v = check_containment(inner, outer)
    assert v.status == "Refuted"
    assert v.method == "lineality"
    assert float(np.linalg.eigvalsh(outer.evaluate(v.witness["x"]).mat).min()) < 0


def test_compatible_lineality_reduces():
    # both pencils ignore the variable entirely
    inner = pencil([np.eye(2), np.zeros((2, 2))])
    outer = pencil([2.0 * np.eye(2), np.zeros((2, 2))])
    v = check_containment(inner, outer)
    assert v.status == "Certified"


def test_empty_inner_set_is_vacuously_contained():
    empty = pencil([np.diag([-1.0, -1.0]), np.diag([1.0, -1.0])])
    outer = pencil([-np.eye(2), np.zeros((2, 2))])  # empty outer too
    v = check_containment(empty, outer)
    assert v.status == "Certified"
    assert v.value == float("inf")


def test_mismatched_variable_counts_rejected():
    with pytest.raises(InvalidInput):
        check_containment(ellipsoid_pencil([1.0]), ellipsoid_pencil([1.0, 1.0]))
    with pytest.raises(InvalidInput):
        check_containment(*disk_pair(0.5), method="nosuch")


def test_certification_tolerance_scales_with_outer():
    b = disk_pair(0.5)[1]
    tol = certification_tolerance(b)
    assert tol == pytest.approx(1e-7 * 2.0, rel=1e-6)
    assert certification_tolerance(b, factor=1e-5) == pytest.approx(2e-5, rel=1e-6)


def test_verdict_string_and_exit_codes():
    v = Verdict(status="Certified", value=0.25, order=2, method="moment",
                witness=None, details={})
    assert v.exit_code == 0
    s = str(v)
    assert "Certified" in s and "moment" in s
