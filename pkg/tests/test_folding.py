import random

import pytest

from ncx.complexes import (
    ComplexError,
    NComplex,
    composite,
    direct_sum,
    disk,
    identity_map,
    sigma,
    stalk,
    theta,
    validate,
    zero_map,
)
from ncx.folding import (
    fold_block_degrees,
    fold_chain_map,
    fold_complex,
    fold_layout,
    generator_images,
    suspension_compat,
    transport_homotopy,
    unfold_chain_map,
    unfold_homotopy,
)
from ncx.homotopy import (
    boundary_chain_map,
    chain_map_basis,
    hom_space_dim,
    null_homotopy,
    verify_witness,
)
from ncx.linereps import (
    rep_compose,
    rep_hom_space_dim,
    rep_identity_map,
    rep_is_acyclic,
    rep_is_contractible,
    validate_rep_complex,
    validate_rep_map,
)
from ncx.matrices import Mat
from ncx.rings import GF2, GF3, QQ, TruncatedPolynomials

R23 = TruncatedPolynomials(2, 3)


def rand_complex(rng, n, ring, spread=2):
    return direct_sum(
        disk(n, ring, rng.randint(-1, spread - 1), rng.randint(1, n), 1),
        disk(n, ring, rng.randint(0, spread), rng.randint(1, n), 1),
    )


def random_planted_pair(rng, n, ring):
    q = rand_complex(rng, n, ring)
    p = rand_complex(rng, n, ring)
    smaps = {}
    for i in q.window(n):
        rows, cols = p.dim(i - n + 1), q.dim(i)
        if rows and cols:
            smaps[i] = Mat.from_rows(
                ring, [[ring.random(rng) for _ in range(cols)] for _ in range(rows)]
            )
    f, w = boundary_chain_map(q, p, smaps)
    return f, w


def test_block_degrees():
    assert fold_block_degrees(3, 0) == [0, 1]
    assert fold_block_degrees(3, 1) == [2, 3]
    assert fold_block_degrees(3, 2) == [3, 4]
    assert fold_block_degrees(3, -1) == [-1, 0]
    assert fold_block_degrees(3, -2) == [-3, -2]


def test_worked_example_layout():
    lay = fold_layout(3, -1, 6)
    vertex1 = {i: lay["terms"][i][0] for i in range(-1, 4)}
    assert vertex1 == {-1: [-1], 0: [0], 1: [2], 2: [3], 3: [5]}
    vertex2 = {i: lay["terms"][i][1] for i in range(-1, 4)}
    assert vertex2 == {
        -1: [-1, 0], 0: [0, 1], 1: [2, 3], 2: [3, 4], 3: [5, 6],
    }
    # bidiagonal block out of the odd term at degree -1
    assert lay["diffs"][-1][1] == [
        [("d", 1, -1, 1), ("one", -1)],
        [None, ("d", 1, 0, 1)],
    ]
    # composite block out of the even term at degree 0
    assert lay["diffs"][0][1] == [
        [("d", 2, 0, 1), ("d", 1, 1, 1)],
        [None, ("d", 2, 1, 1)],
    ]


def test_worked_example_numeric_over_truncated_ring():
    # rank-1 complex on [-1, 6] with every differential multiplication by x
    x = R23.gen()
    x2 = R23.mul(x, x)
    c = NComplex.bounded(
        3, R23,
        {i: 1 for i in range(-1, 7)},
        {i: Mat.from_rows(R23, [[x]]) for i in range(-1, 6)},
    )
    assert validate(c).ok
    fc = fold_complex(c)
    assert validate_rep_complex(fc).ok
    neg1 = R23.neg(R23.one())
    assert fc.diff(-1)[1] == Mat.from_rows(R23, [[x, neg1], [R23.zero(), x]])
    assert fc.diff(0)[1] == Mat.from_rows(R23, [[x2, x], [R23.zero(), x2]])
    assert fc.term(-1).vdims == (1, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_fold_validates(n):
    rng = random.Random(n)
    for _ in range(5):
        x = rand_complex(rng, n, GF3)
        assert validate_rep_complex(fold_complex(x)).ok


def test_fold_periodic_requires_divisible_period():
    x = NComplex.periodic(3, R23, (1,), (Mat.from_rows(R23, [[R23.gen()]]),))
    with pytest.raises(ComplexError):
        fold_complex(x)
    from ncx.complexes import inflate_period

    fx = fold_complex(inflate_period(x, 3))
    assert fx.is_periodic and fx.support.period == 2
    assert validate_rep_complex(fx).ok
    assert rep_is_acyclic(fx)


def test_fold_n2_is_reindexing():
    rng = random.Random(0)
    x = rand_complex(rng, 2, QQ)
    fx = fold_complex(x)
    for i in x.degrees():
        assert fx.term(i).vdims == (x.dim(i),)
        if x.dim(i) and x.dim(i + 1):
            assert fx.diff(i)[0] == x.diff(i)


def test_fold_chain_map_functorial():
    rng = random.Random(1)
    for n in (2, 3, 4):
        for _ in range(5):
            x = rand_complex(rng, n, GF2)
            y = rand_complex(rng, n, GF2)
            z = rand_complex(rng, n, GF2)
            fs = chain_map_basis(x, y)
            gs = chain_map_basis(y, z)
            if not fs or not gs:
                continue
            f = fs[rng.randrange(len(fs))]
            g = gs[rng.randrange(len(gs))]
            from ncx.complexes import compose

            assert validate_rep_map(fold_chain_map(f)).ok
            lhs = fold_chain_map(compose(g, f))
            rhs = rep_compose(fold_chain_map(g), fold_chain_map(f))
            assert lhs == rhs
    x = rand_complex(random.Random(9), 3, GF2)
    assert fold_chain_map(identity_map(x)) == rep_identity_map(fold_complex(x))


def test_fold_of_full_disk_contractible():
    for n in (2, 3, 4):
        d = disk(n, GF2, 1, n, 1)
        fd = fold_complex(d)
        assert rep_is_acyclic(fd)
        assert rep_is_contractible(fd)


@pytest.mark.parametrize("ring", [GF2, GF3, QQ])
def test_transport_homotopy_exact(ring):
    rng = random.Random(5)
    for n in (2, 3, 4):
        for _ in range(4):
            f, w = random_planted_pair(rng, n, ring)
            rep = transport_homotopy(f, w)
            from ncx.linereps import rep_boundary_of

            assert rep_verify(f, rep)


def rep_verify(f, rep):
    from ncx.folding import fold_chain_map
    from ncx.linereps import rep_verify_homotopy

    return rep_verify_homotopy(fold_chain_map(f), rep.homotopy)


def test_transport_formula_path_used():
    rng = random.Random(6)
    hits = 0
    for _ in range(6):
        f, w = random_planted_pair(rng, 3, GF2)
        hits += transport_homotopy(f, w).from_formula
    assert hits == 6


def test_unfold_homotopy_round_trip():
    rng = random.Random(7)
    for n in (2, 3, 4):
        for _ in range(4):
            f, w = random_planted_pair(rng, n, GF2)
            tr = transport_homotopy(f, w)
            rep = unfold_homotopy(f, tr.homotopy)
            assert verify_witness(f, rep.witness)
            assert rep.from_formula


def test_unfold_chain_map_round_trip():
    rng = random.Random(8)
    for n in (2, 3):
        for _ in range(4):
            q = rand_complex(rng, n, GF3)
            p = rand_complex(rng, n, GF3)
            basis = chain_map_basis(q, p)
            if not basis:
                continue
            g = basis[rng.randrange(len(basis))]
            rep = unfold_chain_map(fold_chain_map(g), q, p)
            assert null_homotopy(rep.chain_map - g) is not None


def test_unfold_zero_map():
    q = disk(3, GF2, 1, 2, 1)
    p = disk(3, GF2, 0, 1, 1)
    phi = fold_chain_map(zero_map(q, p))
    rep = unfold_chain_map(phi, q, p)
    assert null_homotopy(rep.chain_map) is not None


def test_hom_dim_equality_under_fold():
    rng = random.Random(9)
    for n in (2, 3):
        for _ in range(4):
            q = rand_complex(rng, n, GF2)
            p = rand_complex(rng, n, GF2)
            assert (
                hom_space_dim(q, p).hom_k_dim
                == rep_hom_space_dim(fold_complex(q), fold_complex(p)).hom_k_dim
            )


def test_exactness_correspondence_disks():
    from ncx.complexes import is_n_exact

    rng = random.Random(10)
    for n in (2, 3, 4):
        for _ in range(6):
            x = rand_complex(rng, n, GF2)
            assert is_n_exact(x) == rep_is_acyclic(fold_complex(x))


@pytest.mark.parametrize("ring", [GF2, GF3, QQ])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_suspension_compat_exact(ring, n):
    rng = random.Random(n)
    for _ in range(3):
        x = rand_complex(rng, n, ring)
        sc = suspension_compat(x)
        assert sc.notes == []
        sh = sc.forward.target
        assert rep_compose(sc.forward, sc.backward) == rep_identity_map(sh)


def test_suspension_compat_zero_complex():
    from ncx.complexes import zero_complex

    sc = suspension_compat(zero_complex(3, GF2))
    assert sc.forward.source.is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_generator_images(n):
    for g in generator_images(n, GF2):
        assert g.equivalent, g.name


def test_generator_images_literal_forms():
    from ncx.linereps import e_lambda, one_term_rep_complex

    gi = generator_images(3, GF2)
    first = gi[0].computed
    assert first.term(1) == e_lambda(GF2, 2, 1, 1)
    assert first.term(0).is_zero() and first.term(2).is_zero()
    two = gi[2].computed
    assert two.term(-1) == e_lambda(GF2, 2, 2, 1)
    assert two.term(0) == e_lambda(GF2, 2, 1, 1)
