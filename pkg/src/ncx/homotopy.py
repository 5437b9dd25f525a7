"""Morphism-level computations in the homotopy category of N-complexes.

A chain map f is null-homotopic when a degreewise family s^i: X^i -> Y^(i-N+1)
reconstructs it:

    f^i = sum_{j=0}^{N-1}  d_Y^(j-fold tail) o s^(i+j) o d_X^(j-fold head)

where the tail is the (N-1-j)-fold composite landing in degree i and the head
the j-fold composite starting there.  Everything in this module reduces to
one exact sparse linear problem in the entries of the s^i (or of the chain
map itself), solved over the ground field.

Homotopy variables are allocated only where both endpoint modules are
nonzero; components elsewhere are maps between zero modules and contribute
nothing, so the restriction is exact, not an approximation.  For periodic
inputs witnesses are sought with the same period (aperiodic witnesses for
periodic maps are out of scope).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .complexes import (
    ChainMapN,
    ComplexError,
    InternalCheckError,
    composite,
    cone,
    identity_map,
    inflate_period,
    is_n_exact,
    materialize,
    validate_map,
)
from .matrices import Mat, image_basis, kernel_basis, linearize, rank, solve


MATERIALIZE_PERIODS = 3


class _SlotSpace:
    """Flat indexing for a family of matrix-shaped blocks keyed by degree."""

    def __init__(self):
        self._offset = {}
        self._shape = {}
        self.size = 0

    def add(self, key, rows, cols):
        if rows and cols and key not in self._offset:
            self._offset[key] = self.size
            self._shape[key] = (rows, cols)
            self.size += rows * cols

    def has(self, key):
        return key in self._offset

    def shape(self, key):
        return self._shape[key]

    def offset(self, key):
        return self._offset[key]

    def flat(self, key, a, b):
        rows, cols = self._shape[key]
        return self._offset[key] + a * cols + b

    def keys(self):
        return self._offset.keys()

    def unpack(self, ring, values):
        out = {}
        for key in self._offset:
            rows, cols = self._shape[key]
            off = self._offset[key]
            data = tuple(
                tuple(values[off + a * cols + b] for b in range(cols))
                for a in range(rows)
            )
            out[key] = Mat(ring, rows, cols, data, _normalized=True)
        return out


class _LinearProblem:
    """A sparse exact linear problem in block variables over one ring."""

    def __init__(self, ring):
        self.ring = ring
        self.vars = _SlotSpace()
        self.eqs = _SlotSpace()
        self._coeffs = {}
        self._rhs = {}

    def add_coeff(self, eq_index, var_index, value):
        if self.ring.is_zero(value):
            return
        key = (eq_index, var_index)
        cur = self._coeffs.get(key)
        value = value if cur is None else self.ring.add(cur, value)
        if self.ring.is_zero(value):
            self._coeffs.pop(key, None)
        else:
            self._coeffs[key] = value

    def add_rhs(self, eq_index, value):
        if self.ring.is_zero(value):
            return
        cur = self._rhs.get(eq_index)
        value = value if cur is None else self.ring.add(cur, value)
        if self.ring.is_zero(value):
            self._rhs.pop(eq_index, None)
        else:
            self._rhs[eq_index] = value

    def add_sandwich(self, eq_key, var_key, left, right, negate=False):
        """Contribute ``left @ VAR @ right`` to the block equation ``eq_key``."""
        if not self.vars.has(var_key) or not self.eqs.has(eq_key):
            return
        ring = self.ring
        isz, mul, neg = ring.is_zero, ring.mul, ring.neg
        for a in range(left.rows):
            lrow = left.data[a]
            for u in range(left.cols):
                c1 = lrow[u]
                if isz(c1):
                    continue
                for v in range(right.rows):
                    rrow = right.data[v]
                    var_index = self.vars.flat(var_key, u, v)
                    for b in range(right.cols):
                        c2 = rrow[b]
                        if isz(c2):
                            continue
                        value = mul(c1, c2)
                        if negate:
                            value = neg(value)
                        self.add_coeff(self.eqs.flat(eq_key, a, b), var_index, value)

    def add_rhs_block(self, eq_key, mat):
        if not self.eqs.has(eq_key):
            if not mat.is_zero():
                raise ComplexError("nonzero right-hand side outside the equation window")
            return
        for a in range(mat.rows):
            for b in range(mat.cols):
                self.add_rhs(self.eqs.flat(eq_key, a, b), mat.data[a][b])

    def matrix(self):
        zero = self.ring.zero()
        grid = [[zero] * self.vars.size for _ in range(self.eqs.size)]
        for (e, v), value in self._coeffs.items():
            grid[e][v] = value
        return Mat(self.ring, self.eqs.size, self.vars.size, tuple(map(tuple, grid)), _normalized=True)

    def rhs_matrix(self):
        zero = self.ring.zero()
        col = [[zero] for _ in range(self.eqs.size)]
        for e, value in self._rhs.items():
            col[e][0] = value
        return Mat(self.ring, self.eqs.size, 1, tuple(map(tuple, col)), _normalized=True)

    def solve_blocks(self):
        """One exact solution as {var_key: Mat}, or None if inconsistent."""
        sol = solve(self.matrix(), self.rhs_matrix())
        if sol is None:
            return None
        values = [sol.data[i][0] for i in range(sol.rows)]
        return self.vars.unpack(self.ring, values)

    def kernel_block_basis(self):
        """Ground-field basis of the homogeneous solution space, unpacked.

        Over truncated coefficients each basis vector is returned as a family
        of matrices over the full ring (a ground solution of the linearized
        system is exactly a module-level solution).
        """
        k = kernel_basis(self.matrix())
        ring = self.ring
        out = []
        gdim = 1 if ring.is_field else ring.m
        for j in range(k.cols):
            if ring.is_field:
                values = [k.data[i][j] for i in range(k.rows)]
            else:
                values = [
                    ring.from_coords(tuple(k.data[i * gdim + s][j] for s in range(gdim)))
                    for i in range(k.rows // gdim)
                ]
            out.append(self.vars.unpack(ring, values))
        return out

    def matrix_rank(self):
        return rank(self.matrix())

    def ground_var_count(self):
        gdim = 1 if self.ring.is_field else self.ring.m
        return self.vars.size * gdim


def _residue(x, i):
    return i % x.support.period if x.is_periodic else i


def _pair_window(x, y):
    """Degrees at which either complex carries a module, with margin N."""
    if x.is_periodic:
        return range(x.support.period)
    degs = list(x.degrees()) + list(y.degrees())
    if not degs:
        return range(0)
    n = x.N
    return range(min(degs) - n, max(degs) + n + 1)


def align_pair(x, y, periods=MATERIALIZE_PERIODS):
    """Bring two complexes to a common support kind for hom computations.

    Periodic/periodic pairs are inflated to the lcm of the periods;
    bounded/periodic pairs materialize the periodic one over the bounded
    partner's window extended by ``periods`` periods plus margin N.
    """
    if x.is_periodic and y.is_periodic:
        p = lcm(x.support.period, y.support.period)
        if x.support.period != p:
            x = inflate_period(x, p)
        if y.support.period != p:
            y = inflate_period(y, p)
        return x, y
    if x.is_periodic or y.is_periodic:
        per, bnd = (x, y) if x.is_periodic else (y, x)
        p = per.support.period
        if bnd.support.is_empty():
            lo, hi = 0, 0
        else:
            lo, hi = bnd.support.lo, bnd.support.hi
        lo -= periods * p + per.N
        hi += periods * p + per.N
        per = materialize(per, lo, hi)
        return (per, y) if x.is_periodic else (x, per)
    return x, y


@dataclass
class HomotopyWitness:
    """Degreewise maps s^i: X^i -> Y^(i-N+1) reconstructing a chain map."""

    source: object
    target: object
    maps: dict

    def s(self, i):
        i = _residue(self.source, i)
        mat = self.maps.get(i)
        if mat is None:
            return Mat.zero(
                self.source.ring,
                self.target.dim(i - self.source.N + 1),
                self.source.dim(i),
            )
        return mat


def reconstruct(witness):
    """The chain map determined by a homotopy family via the defining identity."""
    x, y = witness.source, witness.target
    n = x.N
    maps = {}
    for i in _pair_window(x, y):
        if x.dim(i) == 0 or y.dim(i) == 0:
            continue
        acc = Mat.zero(x.ring, y.dim(i), x.dim(i))
        for j in range(n):
            tail = composite(y, i + j - n + 1, n - 1 - j)
            head = composite(x, i, j)
            acc = acc + tail @ witness.s(i + j) @ head
        maps[_residue(x, i)] = acc
    return ChainMapN(x, y, maps)


def verify_witness(f, witness):
    """Exact evaluation of the reconstruction identity against f."""
    g = reconstruct(witness)
    for i in _pair_window(f.source, f.target):
        if f.map(i) != g.map(i):
            return False
    return True


def _homotopy_slots(x, y):
    n = x.N
    slots = []
    for i in _pair_window(x, y):
        if x.dim(i) and y.dim(i - n + 1):
            slots.append(_residue(x, i))
    return sorted(set(slots))


def _build_homotopy_problem(x, y):
    """Problem whose variables are the s^i and whose equations are the identity."""
    n = x.N
    prob = _LinearProblem(x.ring)
    for i in _homotopy_slots(x, y):
        prob.vars.add(("s", i), y.dim(i - n + 1), x.dim(i))
    for i in _pair_window(x, y):
        key = ("eq", _residue(x, i))
        prob.eqs.add(key, y.dim(i), x.dim(i))
    for i in _pair_window(x, y):
        if x.dim(i) == 0 or y.dim(i) == 0:
            continue
        eq_key = ("eq", _residue(x, i))
        for j in range(n):
            tail = composite(y, i + j - n + 1, n - 1 - j)
            head = composite(x, i, j)
            prob.add_sandwich(eq_key, ("s", _residue(x, i + j)), tail, head)
    return prob


def null_homotopy(f):
    """An exact homotopy witness for f, or None when no witness exists.

    Any returned witness is re-verified against the reconstruction identity
    by direct evaluation, never trusted from the solver.
    """
    x, y = f.source, f.target
    prob = _build_homotopy_problem(x, y)
    for i in _pair_window(x, y):
        prob.add_rhs_block(("eq", _residue(x, i)), f.map(i))
    blocks = prob.solve_blocks()
    if blocks is None:
        return None
    maps = {key[1]: mat for key, mat in blocks.items()}
    witness = HomotopyWitness(x, y, maps)
    if not verify_witness(f, witness):
        raise InternalCheckError("solver produced a witness that fails re-evaluation")
    return witness


def boundary_chain_map(x, y, s_maps):
    """The (always valid) chain map reconstructed from an arbitrary s family."""
    w = HomotopyWitness(x, y, dict(s_maps))
    return reconstruct(w), w


def is_null_homotopic(f):
    return null_homotopy(f) is not None


def is_contractible(x):
    """True when the identity chain map is null-homotopic."""
    return is_null_homotopic(identity_map(x))


def _build_chain_map_problem(x, y):
    """Homogeneous problem cutting out chain maps f: X -> Y."""
    prob = _LinearProblem(x.ring)
    for i in _pair_window(x, y):
        if x.dim(i) and y.dim(i):
            prob.vars.add(("f", _residue(x, i)), y.dim(i), x.dim(i))
    for i in _pair_window(x, y):
        if x.dim(i) and y.dim(i + 1):
            prob.eqs.add(("sq", _residue(x, i)), y.dim(i + 1), x.dim(i))
    for i in _pair_window(x, y):
        eq_key = ("sq", _residue(x, i))
        if not prob.eqs.has(eq_key):
            continue
        # f^(i+1) d_X^i - d_Y^i f^i = 0
        prob.add_sandwich(
            eq_key, ("f", _residue(x, i + 1)),
            Mat.identity(x.ring, y.dim(i + 1)), x.diff(i),
        )
        prob.add_sandwich(
            eq_key, ("f", _residue(x, i)),
            y.diff(i), Mat.identity(x.ring, x.dim(i)),
            negate=True,
        )
    return prob


def chain_map_basis(x, y):
    """A ground-field basis of the space of chain maps X -> Y."""
    x, y = align_pair(x, y)
    prob = _build_chain_map_problem(x, y)
    out = []
    for blocks in prob.kernel_block_basis():
        out.append(ChainMapN(x, y, {key[1]: mat for key, mat in blocks.items()}))
    return out


@dataclass(frozen=True)
class HomDims:
    """Ground-field dimensions of Hom-spaces before and after homotopy."""

    chain_maps_dim: int
    null_homotopic_dim: int

    @property
    def hom_k_dim(self):
        return self.chain_maps_dim - self.null_homotopic_dim


def hom_space_dim(x, y):
    """Dimensions of chain maps, null-homotopic maps, and their difference."""
    x, y = align_pair(x, y)
    cm = _build_chain_map_problem(x, y)
    chain_dim = cm.ground_var_count() - cm.matrix_rank()

    # rank of the boundary operator s -> reconstructed chain map, computed in
    # the same coordinates the chain-map variables use
    n = x.N
    bnd = _LinearProblem(x.ring)
    for i in _homotopy_slots(x, y):
        bnd.vars.add(("s", i), y.dim(i - n + 1), x.dim(i))
    for i in _pair_window(x, y):
        if x.dim(i) and y.dim(i):
            bnd.eqs.add(("f", _residue(x, i)), y.dim(i), x.dim(i))
    for i in _pair_window(x, y):
        if x.dim(i) == 0 or y.dim(i) == 0:
            continue
        eq_key = ("f", _residue(x, i))
        for j in range(n):
            tail = composite(y, i + j - n + 1, n - 1 - j)
            head = composite(x, i, j)
            bnd.add_sandwich(eq_key, ("s", _residue(x, i + j)), tail, head)
    null_dim = bnd.matrix_rank()
    return HomDims(chain_dim, null_dim)


def hom_k_dim(x, y):
    return hom_space_dim(x, y).hom_k_dim


def _left_inverse_up_to_homotopy(u):
    """Solve for v with v o u homotopic to the identity of u.source."""
    x, y = u.source, u.target
    n = x.N
    prob = _LinearProblem(x.ring)
    for i in _pair_window(y, x):
        if y.dim(i) and x.dim(i):
            prob.vars.add(("v", _residue(x, i)), x.dim(i), y.dim(i))
    for i in _homotopy_slots(x, x):
        prob.vars.add(("s", i), x.dim(i - n + 1), x.dim(i))
    for i in _pair_window(y, x):
        if y.dim(i) and x.dim(i + 1):
            prob.eqs.add(("sq", _residue(x, i)), x.dim(i + 1), y.dim(i))
        if x.dim(i):
            prob.eqs.add(("rec", _residue(x, i)), x.dim(i), x.dim(i))
    for i in _pair_window(y, x):
        sq = ("sq", _residue(x, i))
        if prob.eqs.has(sq):
            prob.add_sandwich(sq, ("v", _residue(x, i + 1)),
                              Mat.identity(x.ring, x.dim(i + 1)), y.diff(i))
            prob.add_sandwich(sq, ("v", _residue(x, i)),
                              x.diff(i), Mat.identity(x.ring, y.dim(i)), negate=True)
        rec = ("rec", _residue(x, i))
        if not prob.eqs.has(rec):
            continue
        prob.add_sandwich(rec, ("v", _residue(x, i)),
                          Mat.identity(x.ring, x.dim(i)), u.map(i))
        for j in range(n):
            tail = composite(x, i + j - n + 1, n - 1 - j)
            head = composite(x, i, j)
            prob.add_sandwich(rec, ("s", _residue(x, i + j)), tail, head, negate=True)
        prob.add_rhs_block(rec, Mat.identity(x.ring, x.dim(i)))
    blocks = prob.solve_blocks()
    if blocks is None:
        return None
    vmaps = {key[1]: mat for key, mat in blocks.items() if key[0] == "v"}
    return ChainMapN(y, x, vmaps)


def homotopy_equivalence(x, y, rng=None, attempts=25):
    """Search for chain maps u: X -> Y and v: Y -> X inverse up to homotopy.

    Candidates u run over a basis of the chain-map space plus seeded random
    combinations; u is an equivalence exactly when cone(u) is contractible,
    and then a homotopy inverse is a linear solve.  Returns (u, v) or None.
    """
    import random as _random

    from .complexes import compose

    x2, y2 = align_pair(x, y)
    basis = chain_map_basis(x2, y2)
    if not basis:
        if x2.is_zero() and y2.is_zero():
            return zero_map(x2, y2), zero_map(y2, x2)
        return None
    rng = rng or _random.Random(20810)
    ring = x2.ring
    candidates = list(basis)
    for _ in range(max(0, attempts - len(basis))):
        acc = None
        for g in basis:
            c = ring.random(rng)
            term = g.scaled(c)
            acc = term if acc is None else acc + term
        candidates.append(acc)
    for u in candidates:
        if u.is_zero() and not (x2.is_zero() and y2.is_zero()):
            continue
        if not is_contractible(cone(u)):
            continue
        v = _left_inverse_up_to_homotopy(u)
        if v is None:
            continue
        if is_null_homotopic(compose(v, u) - identity_map(x2)) and is_null_homotopic(
            compose(u, v) - identity_map(y2)
        ):
            return u, v
    return None


def _induced_iso_everywhere(f):
    """Check every induced map on amplitude homology is an isomorphism."""
    x, y = f.source, f.target
    n = x.N
    for i in _pair_window(x, y):
        for r in range(1, n):
            zx = kernel_basis(composite(x, i, r))
            bx = image_basis(composite(x, i - (n - r), n - r))
            zy = kernel_basis(composite(y, i, r))
            by = image_basis(composite(y, i - (n - r), n - r))
            hx = rank(zx) - rank(bx)
            hy = rank(zy) - rank(by)
            if hx == 0 and hy == 0:
                continue
            moved = linearize(f.map(i)) @ zx
            img = rank(by.hstack(moved) if by.cols else moved) - rank(by)
            if not (img == hx == hy):
                return False
    return True


def is_quasi_iso(f):
    """True iff all induced homology maps are isomorphisms.

    Cross-checked against N-exactness of the mapping cone; a disagreement
    between the two criteria is an internal invariant breach.
    """
    if not validate_map(f):
        raise ComplexError("is_quasi_iso requires a valid chain map")
    by_homology = _induced_iso_everywhere(f)
    by_cone = is_n_exact(cone(f))
    if by_homology != by_cone:
        raise InternalCheckError(
            f"quasi-isomorphism criteria disagree: induced-iso={by_homology}, cone-exact={by_cone}"
        )
    return by_homology
