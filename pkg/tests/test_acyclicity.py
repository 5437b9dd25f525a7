import pytest

from ncx.acyclicity import (
    CorrespondenceReport,
    TestBattery,
    brutal_truncate,
    correspondence_check,
    default_battery,
    dual_exactness,
    is_n_acyclic_hom,
    is_n_totally_acyclic,
)
from ncx.complexes import NComplex, disk, is_n_exact, stalk, validate, zero_complex
from ncx.matrices import Mat
from ncx.rings import GF2, TruncatedPolynomials

R23 = TruncatedPolynomials(2, 3)


def x_complex():
    return NComplex.periodic(3, R23, (1,), (Mat.from_rows(R23, [[R23.gen()]]),))


def small_battery(x, n_random=4):
    return default_battery(x, n_random=n_random)


def test_brutal_truncate_bounded():
    d = disk(3, GF2, 1, 2, 1)  # degrees 0, 1
    assert brutal_truncate(d, -1).is_zero()
    assert brutal_truncate(d, 5) == d
    cut = brutal_truncate(d, 0)
    assert cut.dim(0) == 1 and cut.dim(1) == 0
    assert validate(cut).ok


def test_brutal_truncate_periodic():
    x = x_complex()
    cut = brutal_truncate(x, 0)
    assert not cut.is_periodic
    assert cut.support.hi == 0
    assert all(cut.dim(i) == 1 for i in range(cut.support.lo, 1))
    assert validate(cut).ok


def test_battery_members_are_bounded_and_valid():
    b = small_battery(x_complex())
    assert len(b) > 0
    with pytest.raises(ValueError):
        TestBattery([x_complex()])


def test_acyclic_hom_full_disk():
    d = disk(3, GF2, 0, 3, 1)
    assert is_n_acyclic_hom(d, small_battery(d))


def test_acyclic_hom_partial_disk_fails():
    d = disk(3, GF2, 1, 2, 1)
    assert not is_n_acyclic_hom(d, small_battery(d))


def test_acyclic_hom_x_complex():
    x = x_complex()
    assert is_n_acyclic_hom(x, small_battery(x))


def test_totally_acyclic_zero_and_x_complex():
    z = zero_complex(3, GF2)
    assert is_n_totally_acyclic(z, small_battery(z))
    x = x_complex()
    assert is_n_totally_acyclic(x, small_battery(x))


def test_bounded_nonzero_not_totally_acyclic():
    # the identity class gives a nonzero hom into the battery
    d = disk(3, GF2, 1, 2, 1)
    assert not is_n_totally_acyclic(d, small_battery(d))
    st = stalk(3, GF2, 0)
    assert not is_n_totally_acyclic(st, small_battery(st))
    # contractible bounded complexes are zero objects, hence totally acyclic
    full = disk(3, GF2, 0, 3, 1)
    assert is_n_totally_acyclic(full, small_battery(full))


def test_dual_exactness_examples():
    assert dual_exactness(x_complex())
    assert dual_exactness(disk(3, GF2, 1, 3, 1))
    assert not dual_exactness(disk(3, GF2, 1, 2, 1))


def test_totally_acyclic_implies_acyclic():
    for x in (x_complex(), disk(3, GF2, 0, 3, 1), disk(3, GF2, 1, 2, 1)):
        b = small_battery(x)
        if is_n_totally_acyclic(x, b):
            assert is_n_acyclic_hom(x, b)


def test_correspondence_x_complex():
    x = x_complex()
    report = correspondence_check(x, small_battery(x, n_random=3))
    assert report.n_side_acyclic and report.folded_acyclic
    assert report.n_side_totally_acyclic and report.folded_totally_acyclic
    assert not report.mismatch
    assert report.dual_exact


def test_correspondence_partial_disk():
    d = disk(3, GF2, 1, 2, 1)
    report = correspondence_check(d, small_battery(d, n_random=3))
    assert not report.n_side_acyclic and not report.folded_acyclic
    assert not report.n_side_totally_acyclic and not report.folded_totally_acyclic
    assert not report.mismatch


def test_correspondence_full_disk():
    d = disk(3, GF2, 0, 3, 1)
    report = correspondence_check(d, small_battery(d, n_random=3))
    assert report.n_side_acyclic and report.folded_acyclic
    assert not report.mismatch
