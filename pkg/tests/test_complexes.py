import pytest

from ncx.complexes import (
    ChainMapN,
    ComplexError,
    HomologyFingerprint,
    NComplex,
    compose,
    composite,
    cone,
    direct_sum,
    disk,
    dualize,
    homology,
    identity_map,
    inflate_period,
    is_n_exact,
    materialize,
    sigma,
    sigma_inv,
    stalk,
    theta,
    validate,
    validate_map,
    zero_complex,
    zero_map,
)
from ncx.matrices import Mat
from ncx.rings import GF2, GF3, QQ, TruncatedPolynomials

R23 = TruncatedPolynomials(2, 3)


def x_complex(N=3, ring=R23):
    """Periodic period-1 complex with differential multiplication by x."""
    return NComplex.periodic(N, ring, (1,), (Mat.from_rows(ring, [[ring.gen()]]),))


def test_validate_zero_complex():
    assert validate(zero_complex(3, GF2)).ok


def test_validate_identity_chain_fails():
    # identity maps on a 3-periodic rank-1 family: the length-3 composite is 1
    one = Mat.identity(GF2, 1)
    x = NComplex.periodic(3, GF2, (1, 1, 1), (one, one, one))
    report = validate(x)
    assert not report.ok
    assert report.first_bad_degree == 0
    # the bounded counterpart is the full disk, whose length-3 composite
    # exits the support window, so it passes
    assert validate(disk(3, GF2, 2, 3, 1)).ok


def test_validate_x_complex():
    assert validate(x_complex()).ok


def test_composite_extremes():
    x = x_complex()
    assert composite(x, 0, 0) == Mat.identity(R23, 1)
    assert composite(x, 5, 3).is_zero()
    x2 = R23.mul(R23.gen(), R23.gen())
    assert composite(x, 2, 2) == Mat.from_rows(R23, [[x2]])


def test_disk_shapes():
    d1 = disk(3, GF2, 0, 1, 1)
    assert d1.dim(0) == 1 and d1.total_rank() == 1
    d2 = disk(3, GF2, 1, 2, 1)
    assert d2.dim(0) == d2.dim(1) == 1
    assert d2.diff(0) == Mat.identity(GF2, 1)
    assert validate(disk(3, GF2, 0, 3, 1)).ok
    with pytest.raises(ComplexError):
        disk(3, GF2, 0, 4, 1)


def test_theta_basics():
    d = disk(3, GF2, 1, 2, 1)
    assert theta(d, 0) == d
    shifted = theta(d, 1)
    assert shifted.dim(-1) == shifted.dim(0) == 1 and shifted.dim(1) == 0
    assert theta(theta(d, 2), 3) == theta(d, 5)
    assert theta(x_complex(), 1) == x_complex()


def test_sigma_of_zero_and_stalk():
    assert sigma(zero_complex(3, GF2)).is_zero()
    s = sigma(stalk(3, GF2, 0))
    assert s.dim(-2) == s.dim(-1) == 1 and s.total_rank() == 2
    assert s.diff(-2) == Mat.identity(GF2, 1)
    assert validate(s).ok


@pytest.mark.parametrize("N", [2, 3, 4, 5])
@pytest.mark.parametrize("i", [1, 2])
def test_sigma_and_sigma_inv_validate_on_disks(N, i):
    if i > N:
        pytest.skip("disk height exceeds N")
    d = disk(N, GF3, 0, min(i, N), 2)
    assert validate(sigma(d)).ok
    assert validate(sigma_inv(d)).ok
    assert validate(sigma(sigma_inv(d))).ok


def test_sigma_periodic_preserves_period():
    s = sigma(x_complex())
    assert s.is_periodic and s.support.period == 1
    assert validate(s).ok


def test_cone_of_map_from_zero_is_target():
    y = disk(3, GF2, 1, 2, 1)
    f = zero_map(zero_complex(3, GF2), y)
    assert cone(f) == y


def test_cone_n2_is_classical():
    x = NComplex.bounded(
        2, QQ, {0: 1, 1: 1, 2: 1},
        {0: Mat.zero(QQ, 1, 1), 1: Mat.from_rows(QQ, [[3]])},
    )
    y = NComplex.bounded(
        2, QQ, {0: 1, 1: 1, 2: 1},
        {0: Mat.from_rows(QQ, [[2]]), 1: Mat.zero(QQ, 1, 1)},
    )
    f = zero_map(x, y)
    c = cone(f)
    # classical block shape [[d_Y, f], [0, -d_X]] at degree 0
    assert c.diff(0) == Mat.from_rows(QQ, [[2, 0], [0, -3]])
    assert validate(c).ok


def test_cone_validates_on_disk_maps():
    x = disk(3, GF2, 1, 2, 1)
    f = identity_map(x)
    c = cone(f)
    assert validate(c).ok
    assert is_n_exact(c)


def test_homology_golden_partial_disk():
    fp = homology(disk(3, GF2, 1, 2, 1))
    assert fp.as_dict() == {(1, 1): (1, ()), (0, 2): (1, ())}


def test_homology_full_disk_vanishes():
    assert is_n_exact(disk(3, GF2, 0, 3, 1))
    assert is_n_exact(disk(4, QQ, 2, 4, 2))


def test_homology_x_complex_vanishes():
    assert is_n_exact(x_complex())


def test_homology_stalk():
    fp = homology(stalk(3, GF2, 0))
    assert fp.as_dict() == {(0, 1): (1, ()), (0, 2): (1, ())}


def test_disk_exactness_table():
    for N in (2, 3, 4):
        for j in (-1, 0, 2):
            for rk in (1, 2):
                assert is_n_exact(disk(N, GF2, j, N, rk))
                if N > 1:
                    assert not is_n_exact(disk(N, GF2, j, 1, rk))


def test_direct_sum_homology_is_additive():
    a = disk(3, GF2, 1, 2, 1)
    b = stalk(3, GF2, 0)
    fp = homology(direct_sum(a, b))
    assert fp.dim(1, 1) == 1
    assert fp.dim(0, 1) == 1
    assert fp.dim(0, 2) == 2


def test_chain_map_compose_and_validate():
    x = disk(3, GF2, 1, 2, 1)
    f = identity_map(x)
    assert validate_map(f).ok
    assert compose(f, f) == f
    bad = ChainMapN(x, theta(x, 1), {})
    assert validate_map(bad).ok  # zero map always commutes


def test_materialize_and_inflate():
    x = x_complex()
    m = materialize(x, -2, 2)
    assert not m.is_periodic and m.total_rank() == 5
    assert validate(m).ok
    infl = inflate_period(x, 3)
    assert infl.support.period == 3
    assert validate(infl).ok
    assert is_n_exact(infl)


def test_dualize_x_complex_self_dual():
    x = x_complex()
    assert dualize(x) == x


def test_dualize_disk():
    d = disk(3, GF2, 1, 2, 1)
    dual = dualize(d)
    assert validate(dual).ok
    assert dual.dim(-1) == dual.dim(0) == 1
    assert dual.diff(-1) == Mat.identity(GF2, 1)


def test_fingerprint_api():
    fp = HomologyFingerprint(3, (((0, 1), (2, ())),))
    assert fp.dim(0, 1) == 2 and fp.dim(5, 1) == 0
    assert not fp.is_zero() and fp.total_dim() == 2
