"""Dense exact matrices over the supported coefficient rings.

Conventions:

* a map between free modules of ranks c -> r is an r x c matrix acting on
  column vectors, so the composite g o f is the product ``G @ F``;
* over ``TruncatedPolynomials(p, m)`` every rank/kernel/image/solve question
  is answered on the ground field GF(p) after :func:`linearize`, which
  rewrites an r x c matrix as the (r*m) x (c*m) matrix of the same map in the
  per-generator basis {1, x, ..., x^(m-1)}.

Elimination is plain Gauss-Jordan: numpy int64 arithmetic for prime fields
(every intermediate product fits: (p-1)^2 < 2**62) and Fraction arithmetic
for the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rings import PrimeField


class MatrixError(ValueError):
    pass


class ContainmentError(MatrixError):
    """Raised when a claimed subspace inclusion fails (B not contained in Z)."""


class Mat:
    """An immutable dense matrix over one of the coefficient rings."""

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring, rows, cols, data, _normalized=False):
        if rows < 0 or cols < 0:
            raise MatrixError("negative matrix dimensions")
        if _normalized:
            self.data = data
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise MatrixError("entry grid does not match declared shape")
            norm = ring.normalize
            self.data = tuple(tuple(norm(v) for v in row) for row in data)
        self.ring = ring
        self.rows = rows
        self.cols = cols

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(ring, nrows, ncols, rows)

    @classmethod
    def zero(cls, ring, rows, cols):
        z = ring.zero()
        data = tuple((z,) * cols for _ in range(rows))
        return cls(ring, rows, cols, data, _normalized=True)

    @classmethod
    def identity(cls, ring, n):
        return cls.scalar(ring, n, ring.one())

    @classmethod
    def scalar(cls, ring, n, value):
        z, v = ring.zero(), ring.normalize(value)
        data = tuple(
            tuple(v if i == j else z for j in range(n)) for i in range(n)
        )
        return cls(ring, n, n, data, _normalized=True)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.data))

    def __repr__(self):
        return f"Mat({self.ring}, {self.rows}x{self.cols}, {list(map(list, self.data))})"

    def is_zero(self):
        isz = self.ring.is_zero
        return all(isz(v) for row in self.data for v in row)

    def __add__(self, other):
        self._check_same_shape(other)
        add = self.ring.add
        data = tuple(
            tuple(add(a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.data, other.data)
        )
        return Mat(self.ring, self.rows, self.cols, data, _normalized=True)

    def __sub__(self, other):
        self._check_same_shape(other)
        sub = self.ring.sub
        data = tuple(
            tuple(sub(a, b) for a, b in zip(ra, rb))
            for ra, rb in zip(self.data, other.data)
        )
        return Mat(self.ring, self.rows, self.cols, data, _normalized=True)

    def __neg__(self):
        neg = self.ring.neg
        data = tuple(tuple(neg(v) for v in row) for row in self.data)
        return Mat(self.ring, self.rows, self.cols, data, _normalized=True)

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.ring != other.ring:
            raise MatrixError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.cols != other.rows:
            raise MatrixError(
                f"dimension mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        ring = self.ring
        if isinstance(ring, PrimeField) and self.rows and self.cols and other.cols:
            p = ring.p
            if (p - 1) ** 2 * self.cols < 2**63:
                a = np.array(self.data, dtype=np.int64)
                b = np.array(other.data, dtype=np.int64)
                c = (a @ b) % p
                data = tuple(tuple(int(v) for v in row) for row in c)
                return Mat(ring, self.rows, other.cols, data, _normalized=True)
        add, mul, zero = ring.add, ring.mul, ring.zero()
        isz = ring.is_zero
        bdata = other.data
        out = []
        for arow in self.data:
            row = [zero] * other.cols
            for k, av in enumerate(arow):
                if isz(av):
                    continue
                brow = bdata[k]
                for j, bv in enumerate(brow):
                    if not isz(bv):
                        row[j] = add(row[j], mul(av, bv))
            out.append(tuple(row))
        return Mat(ring, self.rows, other.cols, tuple(out), _normalized=True)

    def scaled(self, value):
        v = self.ring.normalize(value)
        mul = self.ring.mul
        data = tuple(tuple(mul(v, e) for e in row) for row in self.data)
        return Mat(self.ring, self.rows, self.cols, data, _normalized=True)

    def transpose(self):
        data = tuple(zip(*self.data)) if self.rows and self.cols else tuple(
            () for _ in range(self.cols)
        )
        return Mat(self.ring, self.cols, self.rows, data, _normalized=True)

    def entry(self, i, j):
        return self.data[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def take_columns(self, indices):
        data = tuple(tuple(row[j] for j in indices) for row in self.data)
        return Mat(self.ring, self.rows, len(indices), data, _normalized=True)

    def hstack(self, other):
        self._check_ring(other)
        if self.rows != other.rows:
            raise MatrixError("hstack row mismatch")
        data = tuple(ra + rb for ra, rb in zip(self.data, other.data))
        return Mat(self.ring, self.rows, self.cols + other.cols, data, _normalized=True)

    def vstack(self, other):
        self._check_ring(other)
        if self.cols != other.cols:
            raise MatrixError("vstack column mismatch")
        return Mat(
            self.ring, self.rows + other.rows, self.cols,
            self.data + other.data, _normalized=True,
        )

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise MatrixError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _check_same_shape(self, other):
        self._check_ring(other)
        if self.rows != other.rows or self.cols != other.cols:
            raise MatrixError("shape mismatch")


def block_matrix(ring, row_dims, col_dims, blocks):
    """Assemble a matrix from a sparse dict {(block_row, block_col): Mat}.

    Missing blocks are zero.  Every supplied block must match the declared
    block dimensions exactly.
    """
    zero = ring.zero()
    total_r, total_c = sum(row_dims), sum(col_dims)
    grid = [[zero] * total_c for _ in range(total_r)]
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    for (bi, bj), blk in blocks.items():
        if blk is None:
            continue
        if blk.ring != ring:
            raise MatrixError("block ring mismatch")
        if blk.rows != row_dims[bi] or blk.cols != col_dims[bj]:
            raise MatrixError(
                f"block ({bi},{bj}) has shape {blk.rows}x{blk.cols}, "
                f"expected {row_dims[bi]}x{col_dims[bj]}"
            )
        r0, c0 = roff[bi], coff[bj]
        for i, row in enumerate(blk.data):
            grid[r0 + i][c0:c0 + blk.cols] = row
    data = tuple(tuple(row) for row in grid)
    return Mat(ring, total_r, total_c, data, _normalized=True)


def block_diag(ring, mats):
    n = len(mats)
    return block_matrix(
        ring,
        [m.rows for m in mats],
        [m.cols for m in mats],
        {(i, i): mats[i] for i in range(n)},
    )


# ---------------------------------------------------------------------------
# Ground-field elimination backends
# ---------------------------------------------------------------------------

def _np_rref(a, p):
    """In-place reduced row echelon form of an int64 array mod p."""
    a = a % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _frac_rref(rows):
    """Reduced row echelon form over Q; mutates and returns (rows, pivots)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [v / pv for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


class _Echelon:
    """Uniform view of an RREF computation over a ground field."""

    __slots__ = ("field", "pivots", "_np", "_fr")

    def __init__(self, mat):
        field = mat.ring
        if not field.is_field:
            raise MatrixError("echelon form requires a field; linearize first")
        self.field = field
        if isinstance(field, PrimeField):
            arr = np.array(mat.data, dtype=np.int64).reshape(mat.rows, mat.cols)
            self._np, self.pivots = _np_rref(arr, field.p)
            self._fr = None
        else:
            rows = [list(r) for r in mat.data]
            self._fr, self.pivots = _frac_rref(rows)
            self._np = None

    def entry(self, i, j):
        if self._np is not None:
            return int(self._np[i, j])
        return self._fr[i][j]

    def row_is_zero_after(self, i, col):
        if self._np is not None:
            return not self._np[i, col:].any()
        return all(v == 0 for v in self._fr[i][col:])


def _ground(mat):
    """The ground-field matrix of ``mat`` (identity on field coefficients)."""
    if mat.ring.is_field:
        return mat
    return linearize(mat)


def linearize(mat):
    """Rewrite a truncated-polynomial matrix over the ground prime field.

    Each entry c becomes the m x m matrix of multiplication by c in the basis
    {1, x, ..., x^(m-1)}, so generator u of the source occupies ground columns
    [u*m, (u+1)*m).  ``linearize(A @ B) == linearize(A) @ linearize(B)``.
    Matrices already over a field are returned unchanged.
    """
    ring = mat.ring
    if ring.is_field:
        return mat
    m, gf = ring.m, ring.ground_field()
    out = [[0] * (mat.cols * m) for _ in range(mat.rows * m)]
    for i in range(mat.rows):
        for j in range(mat.cols):
            c = mat.data[i][j]
            for t in range(m):
                col = j * m + t
                base = i * m
                for s in range(t, m):
                    v = c[s - t]
                    if v:
                        out[base + s][col] = v
    return Mat(gf, mat.rows * m, mat.cols * m, tuple(map(tuple, out)), _normalized=True)


def vectorize(mat):
    """Stack each truncated-poly column into ground-field coordinates.

    An r x k matrix becomes (r*m) x k over GF(p); field matrices pass through.
    """
    ring = mat.ring
    if ring.is_field:
        return mat
    m, gf = ring.m, ring.ground_field()
    out = []
    for i in range(mat.rows):
        for s in range(m):
            out.append(tuple(mat.data[i][j][s] for j in range(mat.cols)))
    return Mat(gf, mat.rows * m, mat.cols, tuple(out), _normalized=True)


def unvectorize(ground, ring):
    """Inverse of :func:`vectorize` for a ground solution matrix."""
    if ring.is_field:
        return ground
    m = ring.m
    if ground.rows % m:
        raise MatrixError("ground row count is not a multiple of the truncation order")
    rows = ground.rows // m
    data = []
    for i in range(rows):
        data.append(
            tuple(
                ring.from_coords(tuple(ground.data[i * m + s][j] for s in range(m)))
                for j in range(ground.cols)
            )
        )
    return Mat(ring, rows, ground.cols, tuple(data), _normalized=True)


def rank(mat):
    """Ground-field rank (truncated-poly input is linearized first)."""
    g = _ground(mat)
    if g.rows == 0 or g.cols == 0:
        return 0
    return len(_Echelon(g).pivots)


def kernel_basis(mat):
    """Columns spanning the null space, over the ground field."""
    g = _ground(mat)
    field = g.ring
    if g.cols == 0:
        return Mat.zero(field, 0, 0)
    if g.rows == 0:
        return Mat.identity(field, g.cols)
    ech = _Echelon(g)
    pivots = ech.pivots
    pivot_set = set(pivots)
    free = [c for c in range(g.cols) if c not in pivot_set]
    one, zero = field.one(), field.zero()
    cols = []
    for f in free:
        v = [zero] * g.cols
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(ech.entry(r, f))
        cols.append(v)
    data = tuple(tuple(col[i] for col in cols) for i in range(g.cols))
    return Mat(field, g.cols, len(cols), data, _normalized=True)


def image_basis(mat):
    """Pivot columns of the (linearized) matrix: a basis of the column span."""
    g = _ground(mat)
    if g.cols == 0 or g.rows == 0:
        return Mat.zero(g.ring, g.rows, 0)
    return g.take_columns(_Echelon(g).pivots)


def solve(mat, rhs):
    """One exact solution X of ``mat @ X = rhs``, or None if inconsistent.

    Over truncated polynomials the system is solved on linearized
    coordinates, which is exactly solving it as a module map; the returned X
    is over the original ring.
    """
    if mat.ring != rhs.ring:
        raise MatrixError("ring mismatch between matrix and right-hand side")
    if mat.rows != rhs.rows:
        raise MatrixError("row mismatch between matrix and right-hand side")
    ring = mat.ring
    g = _ground(mat)
    b = vectorize(rhs)
    field = g.ring
    if b.cols == 0 or (g.rows == 0 and g.cols == 0):
        return Mat.zero(ring, mat.cols, rhs.cols)
    if g.cols == 0:
        return None if not b.is_zero() else Mat.zero(ring, 0, rhs.cols)
    aug = g.hstack(b)
    ech = _Echelon(aug)
    for c in ech.pivots:
        if c >= g.cols:
            return None
    zero = field.zero()
    sol = [[zero] * b.cols for _ in range(g.cols)]
    for r, pc in enumerate(ech.pivots):
        for j in range(b.cols):
            sol[pc][j] = ech.entry(r, g.cols + j)
    ground_sol = Mat(field, g.cols, b.cols, tuple(map(tuple, sol)), _normalized=True)
    return unvectorize(ground_sol, ring)


def inverse(mat):
    """Exact two-sided inverse of a square matrix, or None."""
    if mat.rows != mat.cols:
        raise MatrixError("only square matrices can be inverted")
    inv = solve(mat, Mat.identity(mat.ring, mat.rows))
    if inv is None:
        return None
    if not (inv @ mat - Mat.identity(mat.ring, mat.rows)).is_zero():
        return None
    return inv


def multiplication_matrix(ring, nfree, power=1):
    """Ground matrix of multiplication by x^power on ring^nfree."""
    value = ring.one()
    for _ in range(power):
        value = ring.mul(value, ring.gen())
    return linearize(Mat.scalar(ring, nfree, value))


@dataclass(frozen=True)
class QuotientFingerprint:
    """Ground-field dimension of span(big)/span(small), with x-power ranks.

    ``x_ranks[t-1]`` is the rank of multiplication by x^t on the quotient;
    the tuple is empty over field coefficients.
    """

    dim: int
    x_ranks: tuple

    def is_zero(self):
        return self.dim == 0


def quotient_dim(big, small, ring=None):
    """Fingerprint of span(big)/span(small); requires small to lie in span(big).

    ``big`` and ``small`` may be given over the coefficient ring or already as
    ground-field bases (the form :func:`kernel_basis` and :func:`image_basis`
    return).  In the latter case pass the truncated-polynomial ``ring``
    explicitly to recover the x-power ranks.
    """
    if big.ring != small.ring:
        raise MatrixError("ring mismatch between subspace matrices")
    if big.rows != small.rows:
        raise MatrixError("ambient rank mismatch between subspace matrices")
    if ring is None:
        ring = big.ring
    gb, gs = _ground(big), _ground(small)
    rb = rank(gb)
    if gs.cols:
        if rank(gb.hstack(gs)) != rb:
            raise ContainmentError("B not contained in Z")
        rs = rank(gs)
    else:
        rs = 0
    dim = rb - rs
    x_ranks = ()
    if not ring.is_field:
        if gb.rows % ring.m:
            raise MatrixError("ambient dimension is not a multiple of the truncation order")
        nfree = gb.rows // ring.m
        ranks = []
        for t in range(1, ring.m):
            xt = multiplication_matrix(ring, nfree, t)
            moved = xt @ gb
            ranks.append(rank(gs.hstack(moved) if gs.cols else moved) - rs)
        x_ranks = tuple(ranks)
    return QuotientFingerprint(dim, x_ranks)
