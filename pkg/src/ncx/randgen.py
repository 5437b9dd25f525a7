"""Seeded random generation of complexes, chain maps, and homotopies.

Two generation routes, matching how the test campaigns use them:

* structure-first: direct sums of disks, cones of random chain maps between
  such sums, and shifts/suspensions of those.  Every output satisfies the
  N-fold vanishing by construction.
* map-first: a random homotopy family is drawn and its reconstruction is
  taken, producing chain maps that are null-homotopic by construction (the
  completeness tests for the witness solvers rely on these).

Determinism: every public entry point takes an explicit ``random.Random``;
derive per-trial generators with :func:`rng_for` so campaigns are
reproducible and order-independent.
"""

from __future__ import annotations

import random

from .complexes import (
    cone,
    direct_sum,
    disk,
    identity_map,
    sigma,
    theta,
    zero_complex,
    zero_map,
)
from .homotopy import boundary_chain_map, chain_map_basis
from .matrices import Mat


def rng_for(seed, trial):
    """An independent deterministic stream for one campaign trial."""
    return random.Random(f"{seed}:{trial}")


def random_matrix(rng, ring, rows, cols):
    return Mat.from_rows(
        ring, [[ring.random(rng) for _ in range(cols)] for _ in range(rows)]
    )


def random_disk_sum(rng, n, ring, max_rank=2, max_width=None, pieces=None):
    width = max_width if max_width is not None else 2 * n
    pieces = pieces if pieces is not None else rng.randint(1, 3)
    parts = []
    for _ in range(pieces):
        j = rng.randint(0, max(width - 1, 0))
        height = rng.randint(1, n)
        rk = rng.randint(1, max_rank)
        parts.append(disk(n, ring, j, height, rk))
    return direct_sum(*parts)


def random_chain_map(rng, x, y, allow_zero=True):
    """A random exact chain map: a random combination of a solver basis."""
    basis = chain_map_basis(x, y)
    if not basis:
        return zero_map(x, y)
    acc = None
    for g in basis:
        c = x.ring.random(rng)
        term = g.scaled(c)
        acc = term if acc is None else acc + term
    if acc is None or (not allow_zero and acc.is_zero()):
        return basis[rng.randrange(len(basis))]
    return acc


def random_ncomplex(rng, n, ring, max_rank=2, max_width=None, depth=2):
    """A random valid N-complex built from disk sums, cones, and shifts."""
    width = max_width if max_width is not None else 2 * n
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        out = random_disk_sum(rng, n, ring, max_rank, width)
    elif roll < 0.75:
        a = random_ncomplex(rng, n, ring, max_rank=1, max_width=max(width // 2, 1), depth=depth - 1)
        b = random_ncomplex(rng, n, ring, max_rank=1, max_width=max(width // 2, 1), depth=depth - 1)
        out = cone(random_chain_map(rng, a, b))
    elif roll < 0.9:
        out = theta(
            random_ncomplex(rng, n, ring, max_rank, width, depth - 1),
            rng.randint(-1, 1),
        )
    else:
        out = sigma(
            random_ncomplex(rng, n, ring, max_rank=1, max_width=max(width // 2, 1), depth=depth - 1)
        )
    if out.is_zero():
        out = random_disk_sum(rng, n, ring, max_rank, width, pieces=1)
    return out


def random_homotopy_family(rng, x, y):
    """Random maps on the degreewise homotopy slots between two complexes."""
    n = x.N
    maps = {}
    degrees = x.window(n) if not x.is_periodic else range(x.support.period)
    for i in degrees:
        rows, cols = y.dim(i - n + 1), x.dim(i)
        if rows and cols:
            maps[i] = random_matrix(rng, x.ring, rows, cols)
    return maps


def random_null_homotopic_map(rng, x, y):
    """A chain map that is null-homotopic by construction, with its witness."""
    return boundary_chain_map(x, y, random_homotopy_family(rng, x, y))


def random_quasi_iso(rng, n, ring, max_rank=1, max_width=None):
    """A quasi-isomorphism: identity, a split inclusion, or a split projection
    against a contractible disk-sum pad."""
    width = max_width if max_width is not None else 2 * n
    x = random_ncomplex(rng, n, ring, max_rank, width, depth=1)
    pad = direct_sum(
        *[disk(n, ring, rng.randint(0, max(width - 1, 0)), n, 1) for _ in range(rng.randint(1, 2))]
    )
    roll = rng.random()
    if roll < 0.34:
        return identity_map(x)
    padded = direct_sum(x, pad)
    ring_ = x.ring
    if roll < 0.67:
        maps = {}
        for i in x.degrees():
            blocks = [
                [ring_.one() if a == b else ring_.zero() for b in range(x.dim(i))]
                for a in range(padded.dim(i))
            ]
            maps[i] = Mat.from_rows(ring_, blocks)
        from .complexes import ChainMapN

        return ChainMapN(x, padded, maps)
    maps = {}
    for i in padded.degrees():
        blocks = [
            [ring_.one() if a == b else ring_.zero() for b in range(padded.dim(i))]
            for a in range(x.dim(i))
        ]
        maps[i] = Mat.from_rows(ring_, blocks)
    from .complexes import ChainMapN

    return ChainMapN(padded, x, maps)


def random_n_exact(rng, n, ring, max_rank=2, max_width=None):
    """An N-exact complex: full-disk sums, cones of identities, or cones of
    quasi-isomorphisms."""
    width = max_width if max_width is not None else 2 * n
    roll = rng.random()
    if roll < 0.4:
        parts = [
            disk(n, ring, rng.randint(0, max(width - 1, 0)), n, rng.randint(1, max_rank))
            for _ in range(rng.randint(1, 2))
        ]
        return direct_sum(*parts)
    if roll < 0.7:
        x = random_ncomplex(rng, n, ring, max_rank=1, max_width=max(width // 2, 1), depth=1)
        return cone(identity_map(x))
    return cone(random_quasi_iso(rng, n, ring, max_rank=1, max_width=max(width // 2, 1)))
