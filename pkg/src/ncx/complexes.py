"""N-complexes of free modules and their degree-level constructions.

An N-complex is a graded family of free modules with a degree-raising
differential whose N-fold composites vanish.  Support is either bounded
(finitely many nonzero degrees) or strictly periodic (degree i and i+p carry
the same module and differential).  Periodicity is the finite encoding used
for unbounded complexes such as the multiplication-by-x complex over a
truncated polynomial ring.

Degree conventions:

* ``diff(i)`` maps degree i to degree i+1 and is a dim(i+1) x dim(i) matrix;
* ``composite(x, i, r)`` is the r-fold composite starting at degree i
  (``r == 0`` gives the identity, ``r == N`` is zero on a valid complex);
* ``theta(x, k)`` shifts content down: ``theta(x, k)`` has degree-i module
  ``x`` had at degree i+k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .matrices import Mat, block_matrix, image_basis, kernel_basis, quotient_dim, rank


class ComplexError(ValueError):
    pass


class InternalCheckError(RuntimeError):
    """Two internally equivalent criteria disagreed; indicates a bug."""


@dataclass(frozen=True)
class Bounded:
    lo: int
    hi: int

    kind = "bounded"

    def is_empty(self):
        return self.lo > self.hi


@dataclass(frozen=True)
class Periodic:
    period: int

    kind = "periodic"

    def __post_init__(self):
        if self.period < 1:
            raise ComplexError(f"period must be >= 1, got {self.period}")


class NComplex:
    """A bounded or periodic N-complex of free modules."""

    __slots__ = ("N", "ring", "support", "_dims", "_diffs")

    def __init__(self, N, ring, support, dims, diffs):
        self.N = N
        self.ring = ring
        self.support = support
        self._dims = dims
        self._diffs = diffs

    @classmethod
    def bounded(cls, N, ring, dims, diffs):
        """Build a bounded complex from {degree: rank} and {degree: Mat}.

        Zero ranks are dropped; differentials are kept only where both ends
        are nonzero and must have the matching shape.
        """
        if N < 2:
            raise ComplexError(f"N must be >= 2, got {N}")
        dims = {i: r for i, r in dims.items() if r}
        for i, r in dims.items():
            if r < 0:
                raise ComplexError(f"negative rank {r} at degree {i}")
        if dims:
            support = Bounded(min(dims), max(dims))
        else:
            support = Bounded(0, -1)
        kept = {}
        for i, mat in diffs.items():
            rows = dims.get(i + 1, 0)
            cols = dims.get(i, 0)
            if rows == 0 or cols == 0:
                if mat is not None and mat.rows * mat.cols and not mat.is_zero():
                    raise ComplexError(f"nonzero differential into/out of a zero module at degree {i}")
                continue
            if mat.ring != ring:
                raise ComplexError(f"differential at degree {i} has ring {mat.ring}, expected {ring}")
            if mat.rows != rows or mat.cols != cols:
                raise ComplexError(
                    f"differential at degree {i} has shape {mat.rows}x{mat.cols}, "
                    f"expected {rows}x{cols}"
                )
            kept[i] = mat
        return cls(N, ring, support, dims, kept)

    @classmethod
    def periodic(cls, N, ring, dims, diffs):
        """Build a periodic complex from rank/differential sequences of length p."""
        if N < 2:
            raise ComplexError(f"N must be >= 2, got {N}")
        dims = tuple(int(r) for r in dims)
        p = len(dims)
        if p < 1 or len(diffs) != p:
            raise ComplexError("periodic data must supply p ranks and p differentials")
        support = Periodic(p)
        norm = []
        for k in range(p):
            rows, cols = dims[(k + 1) % p], dims[k]
            mat = diffs[k]
            if mat is None:
                mat = Mat.zero(ring, rows, cols)
            if mat.ring != ring:
                raise ComplexError(f"differential at residue {k} has ring {mat.ring}, expected {ring}")
            if mat.rows != rows or mat.cols != cols:
                raise ComplexError(
                    f"differential at residue {k} has shape {mat.rows}x{mat.cols}, "
                    f"expected {rows}x{cols}"
                )
            norm.append(mat)
        return cls(N, ring, support, dims, tuple(norm))

    # -- accessors ---------------------------------------------------------

    @property
    def is_periodic(self):
        return isinstance(self.support, Periodic)

    def dim(self, i):
        if self.is_periodic:
            return self._dims[i % self.support.period]
        return self._dims.get(i, 0)

    def diff(self, i):
        if self.is_periodic:
            return self._diffs[i % self.support.period]
        mat = self._diffs.get(i)
        if mat is None:
            return Mat.zero(self.ring, self.dim(i + 1), self.dim(i))
        return mat

    def degrees(self):
        """Degrees carrying a module (one period for periodic complexes)."""
        if self.is_periodic:
            return range(self.support.period)
        if self.support.is_empty():
            return range(0)
        return range(self.support.lo, self.support.hi + 1)

    def window(self, margin):
        if self.is_periodic:
            return range(self.support.period)
        if self.support.is_empty():
            return range(0)
        return range(self.support.lo - margin, self.support.hi + margin + 1)

    def is_zero(self):
        if self.is_periodic:
            return all(r == 0 for r in self._dims)
        return not self._dims

    def total_rank(self):
        if self.is_periodic:
            return sum(self._dims)
        return sum(self._dims.values())

    def __eq__(self, other):
        if not isinstance(other, NComplex):
            return NotImplemented
        if (self.N, self.ring, self.support) != (other.N, other.ring, other.support):
            return False
        if self.is_periodic:
            return self._dims == other._dims and self._diffs == other._diffs
        if self._dims != other._dims:
            return False
        keys = set(self._diffs) | set(other._diffs)
        return all(self.diff(i) == other.diff(i) for i in keys)

    def __repr__(self):
        if self.is_periodic:
            return f"NComplex(N={self.N}, {self.ring}, periodic p={self.support.period}, dims={list(self._dims)})"
        return f"NComplex(N={self.N}, {self.ring}, bounded, dims={dict(sorted(self._dims.items()))})"


def zero_complex(N, ring):
    return NComplex.bounded(N, ring, {}, {})


def composite(x, i, r):
    """The r-fold composite differential starting at degree i."""
    if not 0 <= r <= x.N:
        raise ComplexError(f"composite length {r} outside 0..{x.N}")
    if r == 0:
        return Mat.identity(x.ring, x.dim(i))
    mat = x.diff(i)
    for k in range(1, r):
        mat = x.diff(i + k) @ mat
    return mat


@dataclass
class ValidationReport:
    ok: bool
    problems: list = field(default_factory=list)
    first_bad_degree: int | None = None

    def __bool__(self):
        return self.ok


def validate(x):
    """Check shapes and the vanishing of all N-fold composite differentials."""
    problems = []
    first_bad = None
    for i in x.window(x.N):
        d = x.diff(i)
        if d.rows != x.dim(i + 1) or d.cols != x.dim(i):
            problems.append(f"differential shape mismatch at degree {i}")
            first_bad = i if first_bad is None else first_bad
    if not problems:
        for i in x.window(x.N):
            if x.dim(i) == 0:
                continue
            if not composite(x, i, x.N).is_zero():
                problems.append(
                    f"N-fold composite starting at degree {i} is nonzero"
                )
                first_bad = i if first_bad is None else first_bad
                break
    return ValidationReport(not problems, problems, first_bad)


def disk(N, ring, j, i, rk=1):
    """The disk complex: rank-rk free modules at degrees j-i+1..j, identity maps.

    For i == N these are the zero objects of the homotopy category.
    """
    if not 1 <= i <= N:
        raise ComplexError(f"disk height must satisfy 1 <= i <= N, got {i}")
    if rk < 0:
        raise ComplexError("negative rank")
    dims = {n: rk for n in range(j - i + 1, j + 1)}
    diffs = {n: Mat.identity(ring, rk) for n in range(j - i + 1, j)}
    return NComplex.bounded(N, ring, dims, diffs)


def stalk(N, ring, j=0, rk=1):
    """A single free module placed at degree j."""
    return disk(N, ring, j, 1, rk)


def theta(x, k=1):
    """Degree shift with no sign: the degree-i term of the result is X^(i+k)."""
    if x.is_periodic:
        p = x.support.period
        dims = tuple(x.dim(i + k) for i in range(p))
        diffs = tuple(x.diff(i + k) for i in range(p))
        return NComplex.periodic(x.N, x.ring, dims, diffs)
    dims = {i - k: r for i, r in x._dims.items()}
    diffs = {i - k: m for i, m in x._diffs.items()}
    return NComplex.bounded(x.N, x.ring, dims, diffs)


def direct_sum(*complexes):
    if not complexes:
        raise ComplexError("empty direct sum")
    first = complexes[0]
    N, ring = first.N, first.ring
    if any(c.N != N or c.ring != ring for c in complexes):
        raise ComplexError("direct summands must share N and the ring")
    if any(c.is_periodic != first.is_periodic for c in complexes):
        raise ComplexError("cannot mix bounded and periodic summands")
    if first.is_periodic:
        p = first.support.period
        if any(c.support.period != p for c in complexes):
            raise ComplexError("periodic summands must share the period")
        degrees = range(p)
    else:
        degs = [i for c in complexes for i in c.degrees()]
        if not degs:
            return zero_complex(N, ring)
        degrees = range(min(degs), max(degs) + 1)

    def dim_at(i):
        return sum(c.dim(i) for c in complexes)

    def diff_at(i):
        return block_matrix(
            ring,
            [c.dim(i + 1) for c in complexes],
            [c.dim(i) for c in complexes],
            {(t, t): c.diff(i) for t, c in enumerate(complexes)},
        )

    if first.is_periodic:
        return NComplex.periodic(
            N, ring,
            tuple(dim_at(i) for i in degrees),
            tuple(diff_at(i) for i in degrees),
        )
    dims = {i: dim_at(i) for i in degrees}
    diffs = {i: diff_at(i) for i in degrees}
    return NComplex.bounded(N, ring, dims, diffs)


def _suspension_degree_range(x, lo_shift, hi_shift):
    if x.is_periodic:
        return range(x.support.period)
    if x.support.is_empty():
        return range(0)
    return range(x.support.lo + lo_shift, x.support.hi + hi_shift + 1)


def sigma(x):
    """Suspension: degree m is the coproduct of X^(m+1)..X^(m+N-1).

    The differential has an identity band above the diagonal and negated
    composite differentials along the bottom row.
    """
    N, ring = x.N, x.ring

    def dim_at(m):
        return sum(x.dim(m + c) for c in range(1, N))

    def diff_at(m):
        row_dims = [x.dim(m + 1 + t) for t in range(1, N)]
        col_dims = [x.dim(m + c) for c in range(1, N)]
        blocks = {}
        for t in range(1, N - 1):
            blocks[(t - 1, t)] = Mat.identity(ring, x.dim(m + 1 + t))
        for c in range(1, N):
            blocks[(N - 2, c - 1)] = -composite(x, m + c, N - c)
        return block_matrix(ring, row_dims, col_dims, blocks)

    degrees = _suspension_degree_range(x, -(N - 1), -1)
    if x.is_periodic:
        return NComplex.periodic(
            N, ring,
            tuple(dim_at(m) for m in degrees),
            tuple(diff_at(m) for m in degrees),
        )
    return NComplex.bounded(
        N, ring,
        {m: dim_at(m) for m in degrees},
        {m: diff_at(m) for m in degrees},
    )


def sigma_inv(x):
    """Inverse suspension: degree m is the coproduct of X^(m-N+1)..X^(m-1).

    First column carries the negated composites out of X^(m-N+1); an identity
    band sits above the diagonal.  (The source display indexes the first
    column by the lowest summand; its printed superscripts only typecheck
    after replacing m-1 by m-N+1, which the N=2 case confirms.)
    """
    N, ring = x.N, x.ring

    def dim_at(m):
        return sum(x.dim(m - N + t) for t in range(1, N))

    def diff_at(m):
        row_dims = [x.dim(m + 1 - N + s) for s in range(1, N)]
        col_dims = [x.dim(m - N + t) for t in range(1, N)]
        blocks = {}
        for s in range(1, N - 1):
            blocks[(s - 1, s)] = Mat.identity(ring, x.dim(m + 1 - N + s))
        for r in range(1, N):
            blocks[(r - 1, 0)] = -composite(x, m - N + 1, r)
        return block_matrix(ring, row_dims, col_dims, blocks)

    degrees = _suspension_degree_range(x, 1, N - 1)
    if x.is_periodic:
        return NComplex.periodic(
            N, ring,
            tuple(dim_at(m) for m in degrees),
            tuple(diff_at(m) for m in degrees),
        )
    return NComplex.bounded(
        N, ring,
        {m: dim_at(m) for m in degrees},
        {m: diff_at(m) for m in degrees},
    )


class ChainMapN:
    """A degreewise matrix family commuting with the differentials."""

    __slots__ = ("source", "target", "_maps")

    def __init__(self, source, target, maps):
        if source.N != target.N or source.ring != target.ring:
            raise ComplexError("chain map endpoints must share N and the ring")
        if source.is_periodic != target.is_periodic:
            raise ComplexError("chain map endpoints must share the support kind")
        if source.is_periodic and source.support.period != target.support.period:
            raise ComplexError("periodic chain map endpoints must share the period")
        self.source = source
        self.target = target
        kept = {}
        for i, mat in maps.items():
            if source.is_periodic:
                i %= source.support.period
            rows, cols = target.dim(i), source.dim(i)
            if rows == 0 or cols == 0:
                if mat is not None and mat.rows * mat.cols and not mat.is_zero():
                    raise ComplexError(f"nonzero component at degree {i} with a zero endpoint")
                continue
            if mat.rows != rows or mat.cols != cols:
                raise ComplexError(
                    f"component at degree {i} has shape {mat.rows}x{mat.cols}, "
                    f"expected {rows}x{cols}"
                )
            kept[i] = mat
        self._maps = kept

    def map(self, i):
        if self.source.is_periodic:
            i %= self.source.support.period
        mat = self._maps.get(i)
        if mat is None:
            return Mat.zero(self.source.ring, self.target.dim(i), self.source.dim(i))
        return mat

    def degrees(self):
        src, tgt = self.source, self.target
        if src.is_periodic:
            return range(src.support.period)
        degs = [i for i in src.degrees() if tgt.dim(i)]
        if not degs:
            return range(0)
        return range(min(degs), max(degs) + 1)

    def __eq__(self, other):
        if not isinstance(other, ChainMapN):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        keys = set(self._maps) | set(other._maps)
        return all(self.map(i) == other.map(i) for i in keys)

    def __add__(self, other):
        self._check_parallel(other)
        keys = set(self._maps) | set(other._maps)
        return ChainMapN(
            self.source, self.target, {i: self.map(i) + other.map(i) for i in keys}
        )

    def __sub__(self, other):
        self._check_parallel(other)
        keys = set(self._maps) | set(other._maps)
        return ChainMapN(
            self.source, self.target, {i: self.map(i) - other.map(i) for i in keys}
        )

    def __neg__(self):
        return ChainMapN(self.source, self.target, {i: -m for i, m in self._maps.items()})

    def scaled(self, value):
        return ChainMapN(
            self.source, self.target, {i: m.scaled(value) for i, m in self._maps.items()}
        )

    def is_zero(self):
        return all(m.is_zero() for m in self._maps.values())

    def _check_parallel(self, other):
        if self.source != other.source or self.target != other.target:
            raise ComplexError("chain maps are not parallel")


def identity_map(x):
    return ChainMapN(x, x, {i: Mat.identity(x.ring, x.dim(i)) for i in x.degrees()})


def zero_map(source, target):
    return ChainMapN(source, target, {})


def compose(g, f):
    if f.target != g.source:
        raise ComplexError("chain maps are not composable")
    degs = set(f._maps) | set(g._maps)
    return ChainMapN(f.source, g.target, {i: g.map(i) @ f.map(i) for i in degs})


def validate_map(f):
    """Check the commuting squares of a chain map over the relevant window."""
    problems = []
    src, tgt = f.source, f.target
    if src.is_periodic:
        window = range(src.support.period)
    else:
        degs = list(src.degrees()) + list(tgt.degrees())
        window = range(min(degs) - 1, max(degs) + 1) if degs else range(0)
    for i in window:
        lhs = f.map(i + 1) @ src.diff(i)
        rhs = tgt.diff(i) @ f.map(i)
        if lhs != rhs:
            problems.append(f"square at degree {i} does not commute")
    return ValidationReport(not problems, problems)


def cone(f):
    """Mapping cone of a chain map: Y^m plus the coproduct X^(m+1)..X^(m+N-1).

    First row carries d_Y and the f-component, an identity band follows, and
    the bottom row carries the negated composites of d_X.  For N=2 this is
    the classical [[d_Y, f], [0, -d_X]].
    """
    if not validate_map(f):
        raise ComplexError("cone requires a valid chain map")
    x, y = f.source, f.target
    N, ring = x.N, x.ring

    def dim_at(m):
        return y.dim(m) + sum(x.dim(m + c) for c in range(1, N))

    def diff_at(m):
        row_dims = [y.dim(m + 1)] + [x.dim(m + 1 + t) for t in range(1, N)]
        col_dims = [y.dim(m)] + [x.dim(m + c) for c in range(1, N)]
        blocks = {(0, 0): y.diff(m), (0, 1): f.map(m + 1)}
        for t in range(2, N):
            blocks[(t - 1, t)] = Mat.identity(ring, x.dim(m + t))
        for c in range(2, N + 1):
            blocks[(N - 1, c - 1)] = -composite(x, m + c - 1, N - c + 1)
        return block_matrix(ring, row_dims, col_dims, blocks)

    if x.is_periodic:
        p = x.support.period
        return NComplex.periodic(
            N, ring,
            tuple(dim_at(m) for m in range(p)),
            tuple(diff_at(m) for m in range(p)),
        )
    lo_candidates = []
    hi_candidates = []
    if not y.support.is_empty():
        lo_candidates.append(y.support.lo)
        hi_candidates.append(y.support.hi)
    if not x.support.is_empty():
        lo_candidates.append(x.support.lo - N + 1)
        hi_candidates.append(x.support.hi - 1)
    if not lo_candidates:
        return zero_complex(N, ring)
    degrees = range(min(lo_candidates), max(hi_candidates) + 1)
    return NComplex.bounded(
        N, ring,
        {m: dim_at(m) for m in degrees},
        {m: diff_at(m) for m in degrees},
    )


def inflate_period(x, q):
    """Repeat a period-p complex to period q (q must be a multiple of p)."""
    if not x.is_periodic:
        raise ComplexError("inflate_period requires a periodic complex")
    p = x.support.period
    if q % p:
        raise ComplexError(f"target period {q} is not a multiple of {p}")
    return NComplex.periodic(
        x.N, x.ring,
        tuple(x.dim(i) for i in range(q)),
        tuple(x.diff(i) for i in range(q)),
    )


def materialize(x, lo, hi):
    """Cut a bounded window [lo, hi] out of a complex (brutal on both sides)."""
    dims = {i: x.dim(i) for i in range(lo, hi + 1)}
    diffs = {i: x.diff(i) for i in range(lo, hi) if x.dim(i) and x.dim(i + 1)}
    return NComplex.bounded(x.N, x.ring, dims, diffs)


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyFingerprint:
    """Ground-field dimensions of H^i_r with x-power ranks where applicable.

    ``entries`` holds only the nonzero positions: a sorted tuple of
    ``((degree, amplitude), (dim, x_ranks))``.  Two complexes with equal
    fingerprints have isomorphic homology modules in every (i, r).
    """

    N: int
    entries: tuple

    def as_dict(self):
        return dict(self.entries)

    def is_zero(self):
        return not self.entries

    def dim(self, i, r):
        return self.as_dict().get((i, r), (0, ()))[0]

    def total_dim(self):
        return sum(v[0] for _, v in self.entries)


def homology_entry(x, i, r):
    """The quotient fingerprint of H^i_r = Z^i_r / B^i_(N-r)."""
    z = kernel_basis(composite(x, i, r))
    b = image_basis(composite(x, i - (x.N - r), x.N - r))
    return quotient_dim(z, b, ring=x.ring)


def homology(x):
    """Fingerprint of all amplitude homologies over the support window."""
    entries = []
    for i in x.degrees():
        if x.dim(i) == 0:
            continue
        for r in range(1, x.N):
            fp = homology_entry(x, i, r)
            if fp.dim:
                entries.append(((i, r), (fp.dim, fp.x_ranks)))
    return HomologyFingerprint(x.N, tuple(sorted(entries)))


def is_n_exact(x):
    """True iff every amplitude homology vanishes on the support window."""
    return homology(x).is_zero()


def cokernel_entry(x, i, r):
    """Ground-field fingerprint of C^i_r, the cokernel of the r-fold composite into degree i."""
    ring = x.ring
    full = Mat.identity(ring, x.dim(i))
    from .matrices import linearize

    b = image_basis(composite(x, i - r, r))
    return quotient_dim(linearize(full), b, ring=ring)


def cokernel_table(x):
    out = {}
    for i in x.degrees():
        if x.dim(i) == 0:
            continue
        for r in range(1, x.N):
            fp = cokernel_entry(x, i, r)
            if fp.dim:
                out[(i, r)] = (fp.dim, fp.x_ranks)
    return out


def dualize(x):
    """Apply Hom(-, ring) degreewise: transposed matrices on reversed degrees."""
    N, ring = x.N, x.ring
    if x.is_periodic:
        p = x.support.period
        dims = tuple(x.dim(-i) for i in range(p))
        diffs = tuple(x.diff(-i - 1).transpose() for i in range(p))
        return NComplex.periodic(N, ring, dims, diffs)
    dims = {-i: x.dim(i) for i in x.degrees()}
    diffs = {}
    for i in x.degrees():
        if x.dim(i) and x.dim(i + 1):
            diffs[-i - 1] = x.diff(i).transpose()
    return NComplex.bounded(N, ring, dims, diffs)
