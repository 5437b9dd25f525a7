"""Folding N-complexes into ordinary complexes of line-quiver representations.

The fold groups N consecutive degrees of an N-complex P into one even/odd
pair of staircase representations of the (N-1)-vertex line quiver:

* even degree i = 2r reads the N-1 degrees m, ..., m+N-2 with m = N*r;
* odd degree i = 2r+1 reads the next N-1 degrees m+N-1, ..., m+2N-3.

Vertex j of a term is the direct sum of the first j of those modules with
the standard split inclusions as arrows.  The differential out of an even
term is the upper-triangular family of composite differentials; out of an
odd term it is bidiagonal: single differentials on the diagonal and negated
identities above it.  Degree u of the input appears in exactly one even and
one odd term (the overlap is what makes the image an ordinary complex).

Every explicit formula in this module (homotopy transport, the witness
extraction in both directions, suspension compatibility) is transcribed from
its source display and then re-verified by exact evaluation; when the
evaluation fails the robust linear-solver fallback takes over and the event
is recorded in the returned report.  The printed displays contain index
slips, so the fallback is part of the contract, not an afterthought.

Shift convention on the folded side: (C[1])^i = C^(i+1) with negated
differential.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import (
    ChainMapN,
    ComplexError,
    InternalCheckError,
    composite,
    sigma,
    stalk,
    theta,
    validate_map,
)
from .homotopy import (
    HomotopyWitness,
    _LinearProblem,
    null_homotopy,
    verify_witness,
)
from .linereps import (
    LineRep,
    RepComplex,
    RepHomotopy,
    RepMap,
    _add_arrow_constraints,
    _add_morphism_var_slots,
    _rep_pair_window,
    _rep_residue,
    e_lambda,
    one_term_rep_complex,
    rep_compose,
    rep_homotopy_equivalence,
    rep_identity_map,
    rep_null_homotopy,
    rep_shift,
    rep_verify_homotopy,
    validate_rep_map,
)
from .matrices import Mat, block_matrix


def fold_block_degrees(N, i):
    """The N-side degrees of the staircase blocks of folded degree i."""
    if i % 2 == 0:
        m = N * (i // 2)
        return [m + a for a in range(N - 1)]
    m = N * ((i - 1) // 2)
    return [m + N - 1 + a for a in range(N - 1)]


def _fold_base(N, i):
    """The anchor m = N*r of folded degree i (r = i//2 rounded toward even)."""
    return N * (i // 2) if i % 2 == 0 else N * ((i - 1) // 2)


def _term_at(x, i):
    """The staircase representation read off the block degrees of degree i."""
    ring, N = x.ring, x.N
    degs = fold_block_degrees(N, i)
    dims = [x.dim(d) for d in degs]
    vdims = []
    total = 0
    for d in dims:
        total += d
        vdims.append(total)
    arrows = []
    for v in range(N - 2):
        arrows.append(
            block_matrix(
                ring, [vdims[v], dims[v + 1]], [vdims[v]],
                {(0, 0): Mat.identity(ring, vdims[v])},
            )
        )
    return LineRep(ring, tuple(vdims), tuple(arrows))


def _even_diff_at(x, i):
    """Upper-triangular composite family out of the even term at degree i."""
    ring, N = x.ring, x.N
    m = _fold_base(N, i)
    src = fold_block_degrees(N, i)
    tgt = fold_block_degrees(N, i + 1)
    fam = []
    for j in range(1, N):
        blocks = {}
        for a0 in range(j):
            for b0 in range(a0, j):
                blocks[(a0, b0)] = composite(x, m + b0, N - 1 - (b0 - a0))
        fam.append(
            block_matrix(
                ring,
                [x.dim(tgt[a0]) for a0 in range(j)],
                [x.dim(src[b0]) for b0 in range(j)],
                blocks,
            )
        )
    return tuple(fam)


def _odd_diff_at(x, i):
    """Bidiagonal family out of the odd term: d on the diagonal, -1 above."""
    ring, N = x.ring, x.N
    src = fold_block_degrees(N, i)
    tgt = fold_block_degrees(N, i + 1)
    fam = []
    for j in range(1, N):
        blocks = {}
        for a0 in range(j):
            blocks[(a0, a0)] = x.diff(src[a0])
            if a0 + 1 < j:
                blocks[(a0, a0 + 1)] = -Mat.identity(ring, x.dim(src[a0 + 1]))
        fam.append(
            block_matrix(
                ring,
                [x.dim(tgt[a0]) for a0 in range(j)],
                [x.dim(src[b0]) for b0 in range(j)],
                blocks,
            )
        )
    return tuple(fam)


def _diff_at(x, i):
    return _even_diff_at(x, i) if i % 2 == 0 else _odd_diff_at(x, i)


def fold_degree_range(x):
    """Folded degrees whose term can be nonzero, for bounded input."""
    if x.support.is_empty():
        return range(0)
    lo, hi = x.support.lo, x.support.hi
    n = x.N
    first = 2 * ((lo - 2 * n) // n) - 2
    last = 2 * ((hi + 2 * n) // n) + 2
    out = []
    for i in range(first, last + 1):
        if any(x.dim(d) for d in fold_block_degrees(n, i)):
            out.append(i)
    return out


def fold_complex(x):
    """The folded complex of staircase representations of an N-complex.

    Bounded input folds to a bounded complex of support width about 2/N of
    the original; periodic input must have period divisible by N and folds
    to a periodic complex of period 2p/N.
    """
    ring, N = x.ring, x.N
    if x.is_periodic:
        p = x.support.period
        if p % N:
            raise ComplexError(
                f"periodic input must have period divisible by N={N}, got {p}"
            )
        q = 2 * p // N
        return RepComplex.periodic(
            ring, N - 1,
            tuple(_term_at(x, i) for i in range(q)),
            tuple(_diff_at(x, i) for i in range(q)),
        )
    degrees = fold_degree_range(x)
    terms = {i: _term_at(x, i) for i in degrees}
    diffs = {i: _diff_at(x, i) for i in degrees}
    return RepComplex.bounded(ring, N - 1, terms, diffs)


def fold_layout(N, lo, hi):
    """Symbolic description of the fold on a generic complex supported on [lo, hi].

    Entries are None (zero), ("one", sign) for a signed identity, or
    ("d", amplitude, start, sign) for a signed composite differential.
    Useful for structural tests and debugging; mirrors fold_complex exactly.
    """
    terms = {}
    diffs = {}
    first = 2 * ((lo - 2 * N) // N) - 2
    last = 2 * ((hi + 2 * N) // N) + 2
    for i in range(first, last + 1):
        degs = fold_block_degrees(N, i)
        if not any(lo <= d <= hi for d in degs):
            continue
        terms[i] = [
            [d for d in degs[:j] if lo <= d <= hi] for j in range(1, N)
        ]
        m = _fold_base(N, i)
        grid = []
        for j in range(1, N):
            rows = []
            for a0 in range(j):
                row = []
                for b0 in range(j):
                    if i % 2 == 0:
                        if a0 <= b0:
                            row.append(("d", N - 1 - (b0 - a0), m + b0, 1))
                        else:
                            row.append(None)
                    else:
                        if a0 == b0:
                            row.append(("d", 1, degs[a0], 1))
                        elif b0 == a0 + 1:
                            row.append(("one", -1))
                        else:
                            row.append(None)
                rows.append(row)
            grid.append(rows)
        diffs[i] = grid
    return {"terms": terms, "diffs": diffs}


def fold_chain_map(f, folded_source=None, folded_target=None):
    """The folded morphism: blockwise diagonal in the chain map's components."""
    q, p = f.source, f.target
    N, ring = q.N, q.ring
    fq = folded_source if folded_source is not None else fold_complex(q)
    fp = folded_target if folded_target is not None else fold_complex(p)

    def family(i):
        degs = fold_block_degrees(N, i)
        fam = []
        for j in range(1, N):
            blocks = {(a0, a0): f.map(degs[a0]) for a0 in range(j)}
            fam.append(
                block_matrix(
                    ring,
                    [p.dim(degs[a0]) for a0 in range(j)],
                    [q.dim(degs[b0]) for b0 in range(j)],
                    blocks,
                )
            )
        return tuple(fam)

    if fq.is_periodic:
        degrees = range(fq.support.period)
    else:
        degrees = sorted(set(fq.degrees()) | set(fp.degrees()))
    return RepMap(fq, fp, {i: family(i) for i in degrees})


# ---------------------------------------------------------------------------
# Homotopy transport and the two witness directions
# ---------------------------------------------------------------------------

@dataclass
class TransportReport:
    homotopy: RepHomotopy
    from_formula: bool
    notes: list = field(default_factory=list)


def _transport_family(x_src, x_tgt, w, i):
    """Transcribed homotopy family at folded degree i (x_src -> x_tgt fold)."""
    N = x_src.N
    ring = x_src.ring
    src_degs = fold_block_degrees(N, i)
    tgt_degs = fold_block_degrees(N, i - 1)
    m = _fold_base(N, i)
    fam = []
    for j in range(1, N):
        blocks = {}
        if i % 2 == 0:
            for a0 in range(j):
                for b0 in range(a0, j):
                    acc = Mat.zero(ring, x_tgt.dim(tgt_degs[a0]), x_src.dim(src_degs[b0]))
                    for k in range(b0 - a0, N - 1):
                        tail = composite(x_tgt, m + k + a0 + 1 - N, N - 2 - k)
                        head = composite(x_src, m + b0, k - b0 + a0)
                        acc = acc + tail @ w.s(m + k + a0) @ head
                    blocks[(a0, b0)] = acc
        else:
            for a0 in range(j):
                blocks[(a0, a0)] = w.s(m + N - 1 + a0)
        fam.append(
            block_matrix(
                ring,
                [x_tgt.dim(tgt_degs[a0]) for a0 in range(j)],
                [x_src.dim(src_degs[b0]) for b0 in range(j)],
                blocks,
            )
        )
    return tuple(fam)


def transport_homotopy(f, w, folded_map=None):
    """A folded-side homotopy for the fold of a null-homotopic chain map.

    The transcribed block formula is evaluated against the classical homotopy
    identity; on failure the solver fallback produces the witness and the
    discrepancy is recorded.  The returned homotopy always satisfies the
    identity exactly.
    """
    if not verify_witness(f, w):
        raise ComplexError("supplied witness fails its own reconstruction identity")
    ff = folded_map if folded_map is not None else fold_chain_map(f)
    fq, fp = ff.source, ff.target
    x_src, x_tgt = f.source, f.target
    degrees = range(fq.support.period) if fq.is_periodic else sorted(
        set(fq.degrees()) | set(fp.degrees()) | {d + 1 for d in set(fq.degrees()) | set(fp.degrees())}
    )
    maps = {}
    for i in degrees:
        fam = _transport_family(x_src, x_tgt, w, i)
        if any(not m.is_zero() for m in fam):
            maps[_rep_residue(fq, i)] = fam
    t = RepHomotopy(fq, fp, maps)
    notes = []
    if rep_verify_homotopy(ff, t):
        return TransportReport(t, True, notes)
    notes.append("transcribed transport family failed evaluation; solver fallback used")
    t = rep_null_homotopy(ff)
    if t is None:
        raise InternalCheckError(
            "folded image of a null-homotopic map admits no homotopy witness"
        )
    return TransportReport(t, False, notes)


def _subblock(mat, row_dims, col_dims, x0, y0):
    roff = sum(row_dims[:x0])
    coff = sum(col_dims[:y0])
    rows = row_dims[x0]
    cols = col_dims[y0]
    if rows == 0 or cols == 0:
        return Mat.zero(mat.ring, rows, cols)
    data = tuple(
        tuple(mat.data[roff + a][coff + b] for b in range(cols)) for a in range(rows)
    )
    return Mat(mat.ring, rows, cols, data, _normalized=True)


def _block_reader(x_src, x_tgt, fam_map, n, N):
    """Reader for summand blocks of a folded-side map at degree n.

    ``fam_map(n)`` must return the vertexwise family of a morphism
    F(src)^n -> F(tgt)^(n-1); blocks are indexed 1-based by (x, y).
    """
    src_degs = fold_block_degrees(N, n)
    tgt_degs = fold_block_degrees(N, n - 1)
    col_dims = [x_src.dim(d) for d in src_degs]
    row_dims = [x_tgt.dim(d) for d in tgt_degs]
    full = fam_map(n)[N - 2]

    def read(x, y):
        return _subblock(full, row_dims, col_dims, x - 1, y - 1)

    return read


@dataclass
class WitnessReport:
    witness: HomotopyWitness
    from_formula: bool
    notes: list = field(default_factory=list)


def _anchor_range(q, p, n):
    """Anchors r such that degrees N*r..N*r+N-1 can matter for both complexes."""
    if q.is_periodic:
        return range(q.support.period // n)
    degs = list(q.degrees()) + list(p.degrees())
    if not degs:
        return range(0)
    lo, hi = min(degs), max(degs)
    return range((lo - 2 * n) // n, (hi + 2 * n) // n + 1)


def unfold_homotopy(f, t):
    """An N-level witness for f from a folded-side homotopy of its image.

    Extraction follows the three-case display (top two degrees come from the
    neighbouring odd/even blocks, the rest from the previous odd block plus a
    correction sum); the result is re-verified and falls back to the direct
    solver with a recorded discrepancy when the transcription fails.
    """
    q, p = f.source, f.target
    n = q.N
    fq = t.source

    def fam_at(deg):
        return t.s(deg)

    maps = {}
    for r in _anchor_range(q, p, n):
        m = n * r
        read_even = _block_reader(q, p, fam_at, 2 * r, n)
        read_odd_up = _block_reader(q, p, fam_at, 2 * r + 1, n)
        read_odd_down = _block_reader(q, p, fam_at, 2 * r - 1, n)
        targets = {}
        targets[m + n - 1] = read_odd_up(1, 1)
        targets[m + n - 2] = read_even(1, n - 1)
        for c in range(0, n - 2):
            if m + c == m + n - 2:
                continue
            acc = read_odd_down(c + 2, c + 2)
            for k in range(1, n - 1 - c):
                acc = acc + p.diff(m + c - n) @ read_odd_down(c + 1, c + k + 1) @ composite(q, m + c, k - 1)
            targets[m + c] = acc
        for u, mat in targets.items():
            if q.dim(u) and p.dim(u - n + 1) and not mat.is_zero():
                maps[u % q.support.period if q.is_periodic else u] = mat
    w = HomotopyWitness(q, p, maps)
    notes = []
    if verify_witness(f, w):
        return WitnessReport(w, True, notes)
    notes.append("transcribed witness extraction failed evaluation; solver fallback used")
    w = null_homotopy(f)
    if w is None:
        raise InternalCheckError(
            "chain map with null-homotopic fold admits no N-level witness"
        )
    return WitnessReport(w, False, notes)


@dataclass
class UnfoldMapReport:
    chain_map: ChainMapN
    from_formula: bool
    notes: list = field(default_factory=list)


def _unfold_by_solver(phi, q, p):
    """Joint linear solve for f and a folded homotopy with fold(f) - phi = boundary."""
    n = q.N
    ring = q.ring
    fq, fp = phi.source, phi.target
    prob = _LinearProblem(ring)
    window = range(q.support.period) if q.is_periodic else _pair_window_n(q, p)
    for u in window:
        if q.dim(u) and p.dim(u):
            prob.vars.add(("f", _res_n(q, u)), p.dim(u), q.dim(u))
    _add_morphism_var_slots(prob, "t", fq, fp, 1)
    _add_arrow_constraints(prob, "t", fq, fp, 1)
    for u in window:
        if q.dim(u) and p.dim(u + 1):
            key = ("sq", _res_n(q, u))
            prob.eqs.add(key, p.dim(u + 1), q.dim(u))
            prob.add_sandwich(key, ("f", _res_n(q, u + 1)),
                              Mat.identity(ring, p.dim(u + 1)), q.diff(u))
            prob.add_sandwich(key, ("f", _res_n(q, u)),
                              p.diff(u), Mat.identity(ring, q.dim(u)), negate=True)
    for i in _rep_pair_window(fq, fp):
        key = _rep_residue(fq, i)
        src_degs = fold_block_degrees(n, i)
        for v in range(n - 1):
            eq = ("fold", key, v)
            prob.eqs.add(eq, fp.term(i).vdims[v], fq.term(i).vdims[v])
            if not prob.eqs.has(eq):
                continue
            col_dims = [q.dim(d) for d in src_degs[: v + 1]]
            row_dims = [p.dim(d) for d in src_degs[: v + 1]]
            for a0 in range(v + 1):
                roff = sum(row_dims[:a0])
                coff = sum(col_dims[:a0])
                fkey = ("f", _res_n(q, src_degs[a0]))
                if not prob.vars.has(fkey):
                    continue
                rows, cols = prob.vars.shape(fkey)
                for a in range(rows):
                    for b in range(cols):
                        prob.add_coeff(
                            prob.eqs.flat(eq, roff + a, coff + b),
                            prob.vars.flat(fkey, a, b),
                            ring.one(),
                        )
            prob.add_sandwich(eq, ("t", key, v),
                              fp.diff(i - 1)[v], Mat.identity(ring, fq.term(i).vdims[v]),
                              negate=True)
            prob.add_sandwich(eq, ("t", _rep_residue(fq, i + 1), v),
                              Mat.identity(ring, fp.term(i).vdims[v]), fq.diff(i)[v],
                              negate=True)
            prob.add_rhs_block(eq, phi.map(i)[v])
    blocks = prob.solve_blocks()
    if blocks is None:
        return None
    return ChainMapN(q, p, {key[1]: mat for key, mat in blocks.items() if key[0] == "f"})


def _pair_window_n(q, p):
    degs = list(q.degrees()) + list(p.degrees())
    if not degs:
        return range(0)
    n = q.N
    return range(min(degs) - n, max(degs) + n + 1)


def _res_n(x, u):
    return u % x.support.period if x.is_periodic else u


def unfold_chain_map(phi, q, p):
    """A chain map whose fold is homotopic to a given folded-side morphism.

    The transcribed extraction formulas are tried first; the result must be a
    chain map with fold homotopic to phi, otherwise the joint solver fallback
    runs (it always succeeds on genuine chain maps, by full faithfulness).
    """
    if not validate_rep_map(phi):
        raise ComplexError("unfold_chain_map requires a morphism of folded complexes")
    n = q.N
    maps = {}
    for r in _anchor_range(q, p, n):
        m = n * r
        read = {}
        for parity, nn in (("even", 2 * r), ("odd_up", 2 * r + 1), ("odd_down", 2 * r - 1)):
            src_degs = fold_block_degrees(n, nn)
            col_dims = [q.dim(d) for d in src_degs]
            row_dims = [p.dim(d) for d in src_degs]
            full = phi.map(nn)[n - 2]
            read[parity] = (
                lambda full=full, row_dims=row_dims, col_dims=col_dims: lambda x, y: _subblock(
                    full, row_dims, col_dims, x - 1, y - 1
                )
            )()
        for c in range(0, n - 1):
            u = m + c
            if not (q.dim(u) and p.dim(u)):
                continue
            acc = Mat.zero(q.ring, p.dim(u), q.dim(u))
            for y in range(c + 2, n):
                acc = acc + read["odd_down"](c + 2, y) @ composite(q, u, y - c - 2)
            for k in range(1, c + 2):
                acc = acc + composite(p, m + k - 1, c + 1 - k) @ read["even"](k, n - 1) @ composite(q, u, n - 2 - c)
            maps[_res_n(q, u)] = acc
        u = m + n - 1
        if q.dim(u) and p.dim(u):
            acc = Mat.zero(q.ring, p.dim(u), q.dim(u))
            for k in range(1, n):
                acc = acc + read["odd_up"](1, k) @ composite(q, u, k - 1)
            maps[_res_n(q, u)] = acc
    notes = []
    try:
        f = ChainMapN(q, p, maps)
        ok = validate_map(f).ok
    except ComplexError:
        ok = False
    if ok:
        delta = fold_chain_map(f, phi.source, phi.target) - phi
        if rep_null_homotopy(delta) is not None:
            return UnfoldMapReport(f, True, notes)
        ok = False
    notes.append("transcribed chain-map extraction failed; joint solver fallback used")
    f = _unfold_by_solver(phi, q, p)
    if f is None:
        raise InternalCheckError("no preimage found for a morphism of folded complexes")
    if not validate_map(f).ok:
        raise InternalCheckError("solver preimage is not a chain map")
    delta = fold_chain_map(f, phi.source, phi.target) - phi
    if rep_null_homotopy(delta) is None:
        raise InternalCheckError("solver preimage does not fold back to the input")
    return UnfoldMapReport(f, False, notes)


# ---------------------------------------------------------------------------
# Suspension compatibility
# ---------------------------------------------------------------------------

@dataclass
class SuspensionCompat:
    forward: RepMap
    backward: RepMap
    homotopy: RepHomotopy
    notes: list = field(default_factory=list)


def _alpha_family(x, i, folded_src, folded_tgt):
    """Transcribed comparison map F(sigma x)^i -> (F(x)[1])^i, vertexwise."""
    N, ring = x.N, x.ring
    src_term = folded_src.term(i)
    tgt_term = folded_tgt.term(i)
    fam = []
    if i % 2 == 0:
        m = _fold_base(N, i)
        # source blocks: (sigma x)^(m+k0), each a coproduct of x-degrees
        for j in range(1, N):
            col_parts = []
            for k0 in range(j):
                col_parts.extend(x.dim(m + k0 + c0 + 1) for c0 in range(N - 1))
            row_dims = [x.dim(m + N - 1 + a0) for a0 in range(j)]
            blocks = {}
            for a0 in range(j):
                for k0 in range(a0, j):
                    for c0 in range(N - 1):
                        amp = N - k0 - c0 + a0 - 2
                        if amp < 0:
                            continue
                        blocks[(a0, k0 * (N - 1) + c0)] = composite(x, m + k0 + c0 + 1, amp)
            fam.append(block_matrix(ring, row_dims, col_parts, blocks))
    else:
        m = _fold_base(N, i) + N
        for j in range(1, N):
            col_parts = []
            for k0 in range(j):
                col_parts.extend(x.dim(m + k0 - 1 + c0 + 1) for c0 in range(N - 1))
            row_dims = [x.dim(m + a0) for a0 in range(j)]
            blocks = {}
            for k0 in range(j):
                blocks[(k0, k0 * (N - 1))] = Mat.identity(ring, x.dim(m + k0))
            fam.append(block_matrix(ring, row_dims, col_parts, blocks))
    return tuple(fam)


def _beta_family(x, i, folded_src, folded_tgt):
    """Transcribed section (F(x)[1])^i -> F(sigma x)^i, vertexwise."""
    N, ring = x.N, x.ring
    fam = []
    if i % 2 == 0:
        m = _fold_base(N, i)
        for j in range(1, N):
            row_parts = []
            for k0 in range(j):
                row_parts.extend(x.dim(m + k0 + c0 + 1) for c0 in range(N - 1))
            col_dims = [x.dim(m + N - 1 + a0) for a0 in range(j)]
            blocks = {}
            for k0 in range(j):
                blocks[(k0 * (N - 1) + (N - 2), k0)] = Mat.identity(ring, x.dim(m + N - 1 + k0))
            fam.append(block_matrix(ring, row_parts, col_dims, blocks))
    else:
        m = _fold_base(N, i) + N
        for j in range(1, N):
            row_parts = []
            for k0 in range(j):
                row_parts.extend(x.dim(m + k0 + c0) for c0 in range(N - 1))
            col_dims = [x.dim(m + a0) for a0 in range(j)]
            blocks = {}
            for k0 in range(j):
                for a0 in range(k0, j):
                    c0 = a0 - k0
                    blocks[(k0 * (N - 1) + c0, a0)] = Mat.identity(ring, x.dim(m + a0))
            fam.append(block_matrix(ring, row_parts, col_dims, blocks))
    return tuple(fam)


def _psi_homotopy_family(x, i):
    """Transcribed homotopy for beta o alpha - 1 at even folded degrees."""
    N, ring = x.N, x.ring
    m = _fold_base(N, i)
    fam = []
    for j in range(1, N):
        row_parts = []
        for a0 in range(j):
            row_parts.extend(x.dim(m - 1 + a0 + d0 + 1) for d0 in range(N - 1))
        col_parts = []
        for k0 in range(j):
            col_parts.extend(x.dim(m + k0 + g0 + 1) for g0 in range(N - 1))
        blocks = {}
        for a0 in range(j):
            for k0 in range(a0, j):
                c = k0 - a0 + 1
                for g0 in range(N - 1):
                    d0 = g0 + c
                    if d0 >= N - 1:
                        continue
                    blocks[(a0 * (N - 1) + d0, k0 * (N - 1) + g0)] = -Mat.identity(
                        ring, x.dim(m + k0 + g0 + 1)
                    )
        fam.append(block_matrix(ring, row_parts, col_parts, blocks))
    return tuple(fam)


def suspension_compat(x, folded=None):
    """Comparison data between the fold of the suspension and the shifted fold.

    Asserts forward o backward = identity exactly and that backward o forward
    minus the identity is the boundary of the transcribed homotopy; failures
    of the literal transcription fall back to the solver with a note, and the
    identities are re-checked on whatever is returned.
    """
    fx = folded if folded is not None else fold_complex(x)
    fs = fold_complex(sigma(x))
    sh = rep_shift(fx, 1)
    degrees = range(fs.support.period) if fs.is_periodic else sorted(
        set(fs.degrees()) | set(sh.degrees())
    )
    alpha = RepMap(fs, sh, {i: _alpha_family(x, i, fs, sh) for i in degrees})
    beta = RepMap(sh, fs, {i: _beta_family(x, i, fs, sh) for i in degrees})
    notes = []
    if not validate_rep_map(alpha).ok:
        raise InternalCheckError("comparison map fails to be a chain morphism")
    if not validate_rep_map(beta).ok:
        raise InternalCheckError("section fails to be a chain morphism")
    comp = rep_compose(alpha, beta)
    if comp != rep_identity_map(sh):
        raise InternalCheckError("forward o backward is not the identity")
    smaps = {}
    for i in degrees:
        if i % 2 == 0:
            fam = _psi_homotopy_family(x, i)
            if any(not m.is_zero() for m in fam):
                smaps[_rep_residue(fs, i)] = fam
    h = RepHomotopy(fs, fs, smaps)
    delta = rep_compose(beta, alpha) - rep_identity_map(fs)
    if not rep_verify_homotopy(delta, h):
        notes.append("transcribed homotopy failed evaluation; solver fallback used")
        h = rep_null_homotopy(delta)
        if h is None:
            raise InternalCheckError(
                "backward o forward - 1 is not null-homotopic"
            )
    return SuspensionCompat(alpha, beta, h, notes)


# ---------------------------------------------------------------------------
# Generator images
# ---------------------------------------------------------------------------

@dataclass
class GeneratorImage:
    name: str
    computed: RepComplex
    model: RepComplex
    equivalent: bool


def generator_images(N, ring):
    """Folds of shifted one-module complexes against their one/two-term models.

    The shift direction here is the inverse of the bare degree shift: the
    models only match when the single module is moved up in degree, and all
    three stated images (including the two-term one) then hold on the nose.
    """
    base = stalk(N, ring, 0, 1)
    out = []

    first = fold_complex(theta(base, -(N - 1)))
    model_first = one_term_rep_complex(e_lambda(ring, N - 1, 1, 1), 1)
    out.append(
        GeneratorImage(
            "one-term-first-vertex", first, model_first,
            rep_homotopy_equivalence(first, model_first) is not None,
        )
    )

    last = fold_complex(sigma(theta(base, -(N - 2))))
    model_last = one_term_rep_complex(e_lambda(ring, N - 1, N - 1, 1), -1)
    out.append(
        GeneratorImage(
            "one-term-last-vertex", last, model_last,
            rep_homotopy_equivalence(last, model_last) is not None,
        )
    )

    if N >= 3:
        two = fold_complex(theta(base, -(N - 3)))
        top = e_lambda(ring, N - 1, N - 1, 1)
        bottom = e_lambda(ring, N - 1, N - 2, 1)
        fam = tuple(
            Mat.identity(ring, 1) if v == N - 2 and bottom.vdims[v] else Mat.zero(
                ring, bottom.vdims[v], top.vdims[v]
            )
            for v in range(N - 1)
        )
        model_two = RepComplex.bounded(ring, N - 1, {-1: top, 0: bottom}, {-1: fam})
        out.append(
            GeneratorImage(
                "two-term-step", two, model_two,
                rep_homotopy_equivalence(two, model_two) is not None,
            )
        )
    return out
