"""Representations of the A_n line quiver and ordinary complexes of them.

A representation assigns a free module to each of the n vertices and a matrix
to each arrow v -> v+1.  Complexes of such representations model complexes of
projective modules over the lower-triangular matrix ring of order n; the
module category dictionary is documentation only, everything here is stored
vertexwise.

Projective representations are exactly the ones whose arrows are split
injections; they decompose as direct sums of the left-adjoint building blocks
``e_lambda(i, rank)`` (zero before vertex i, identities afterwards).  The
``hat`` functor swaps those for the right-adjoint blocks ``e_rho`` with split
epimorphism arrows, acting as the identity on summand-coordinate components.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .complexes import Bounded, ComplexError, InternalCheckError, Periodic, ValidationReport
from .matrices import Mat, block_matrix, kernel_basis, rank, solve, inverse
from .rings import PrimeField


class RepError(ValueError):
    pass


class LineRep:
    """A representation of the line quiver by free modules."""

    __slots__ = ("ring", "vdims", "arrows")

    def __init__(self, ring, vdims, arrows):
        vdims = tuple(int(d) for d in vdims)
        arrows = tuple(arrows)
        if len(arrows) != max(len(vdims) - 1, 0):
            raise RepError("need one arrow per adjacent vertex pair")
        for v, mat in enumerate(arrows):
            if mat.ring != ring:
                raise RepError(f"arrow {v} ring mismatch")
            if mat.rows != vdims[v + 1] or mat.cols != vdims[v]:
                raise RepError(
                    f"arrow {v} has shape {mat.rows}x{mat.cols}, "
                    f"expected {vdims[v + 1]}x{vdims[v]}"
                )
        self.ring = ring
        self.vdims = vdims
        self.arrows = arrows

    @property
    def nvertices(self):
        return len(self.vdims)

    def arrow(self, v):
        return self.arrows[v]

    def is_zero(self):
        return all(d == 0 for d in self.vdims)

    def total_rank(self):
        return sum(self.vdims)

    def __eq__(self, other):
        return (
            isinstance(other, LineRep)
            and self.ring == other.ring
            and self.vdims == other.vdims
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.ring, self.vdims, self.arrows))

    def __repr__(self):
        return f"LineRep({self.ring}, vdims={list(self.vdims)})"


def zero_rep(ring, n):
    return LineRep(ring, (0,) * n, tuple(Mat.zero(ring, 0, 0) for _ in range(max(n - 1, 0))))


def e_lambda(ring, n, vertex, rk=1):
    """Zero before ``vertex`` (1-based), rank ``rk`` with identities afterwards."""
    if not 1 <= vertex <= n:
        raise RepError(f"vertex {vertex} outside 1..{n}")
    vdims = tuple(rk if v + 1 >= vertex else 0 for v in range(n))
    arrows = []
    for v in range(n - 1):
        if vdims[v] == vdims[v + 1] == rk:
            arrows.append(Mat.identity(ring, rk))
        else:
            arrows.append(Mat.zero(ring, vdims[v + 1], vdims[v]))
    return LineRep(ring, vdims, arrows)


def e_rho(ring, n, vertex, rk=1):
    """Rank ``rk`` with identities up to ``vertex`` (1-based), zero afterwards."""
    if not 1 <= vertex <= n:
        raise RepError(f"vertex {vertex} outside 1..{n}")
    vdims = tuple(rk if v + 1 <= vertex else 0 for v in range(n))
    arrows = []
    for v in range(n - 1):
        if vdims[v] == vdims[v + 1] == rk:
            arrows.append(Mat.identity(ring, rk))
        else:
            arrows.append(Mat.zero(ring, vdims[v + 1], vdims[v]))
    return LineRep(ring, vdims, arrows)


def rep_direct_sum(*reps):
    first = reps[0]
    ring, n = first.ring, first.nvertices
    if any(r.ring != ring or r.nvertices != n for r in reps):
        raise RepError("summands must share the ring and vertex count")
    vdims = tuple(sum(r.vdims[v] for r in reps) for v in range(n))
    arrows = []
    for v in range(n - 1):
        arrows.append(
            block_matrix(
                ring,
                [r.vdims[v + 1] for r in reps],
                [r.vdims[v] for r in reps],
                {(t, t): r.arrows[v] for t, r in enumerate(reps)},
            )
        )
    return LineRep(ring, vdims, arrows)


def staircase_rep(ring, ranks):
    """The standard projective rep with summand ranks P^1..P^n: nested inclusions."""
    n = len(ranks)
    vdims = []
    total = 0
    for r in ranks:
        total += r
        vdims.append(total)
    arrows = []
    for v in range(n - 1):
        arrows.append(
            block_matrix(
                ring, [vdims[v], ranks[v + 1]], [vdims[v]],
                {(0, 0): Mat.identity(ring, vdims[v])},
            )
        )
    return LineRep(ring, tuple(vdims), tuple(arrows))


# ---------------------------------------------------------------------------
# Complexes of representations
# ---------------------------------------------------------------------------

class RepComplex:
    """An ordinary (d^2 = 0) complex whose terms are line-quiver reps."""

    __slots__ = ("ring", "nv", "support", "_terms", "_diffs")

    def __init__(self, ring, nv, support, terms, diffs):
        self.ring = ring
        self.nv = nv
        self.support = support
        self._terms = terms
        self._diffs = diffs

    @classmethod
    def bounded(cls, ring, nv, terms, diffs):
        terms = {i: t for i, t in terms.items() if not t.is_zero()}
        for i, t in terms.items():
            if t.ring != ring or t.nvertices != nv:
                raise RepError(f"term at degree {i} has wrong ring or vertex count")
        kept = {}
        for i, fam in diffs.items():
            src = terms.get(i)
            tgt = terms.get(i + 1)
            if src is None or tgt is None:
                continue
            fam = tuple(fam)
            if len(fam) != nv:
                raise RepError(f"differential at degree {i} must have {nv} components")
            for v in range(nv):
                if fam[v].rows != tgt.vdims[v] or fam[v].cols != src.vdims[v]:
                    raise RepError(f"differential at degree {i}, vertex {v + 1} has wrong shape")
            kept[i] = fam
        return cls(ring, nv, Bounded(min(terms), max(terms)) if terms else Bounded(0, -1), terms, kept)

    @classmethod
    def periodic(cls, ring, nv, terms, diffs):
        terms = tuple(terms)
        diffs = tuple(tuple(fam) for fam in diffs)
        p = len(terms)
        if p < 1 or len(diffs) != p:
            raise RepError("periodic data must supply p terms and p differentials")
        for k in range(p):
            src, tgt = terms[k], terms[(k + 1) % p]
            if len(diffs[k]) != nv:
                raise RepError(f"differential at residue {k} must have {nv} components")
            for v in range(nv):
                if diffs[k][v].rows != tgt.vdims[v] or diffs[k][v].cols != src.vdims[v]:
                    raise RepError(f"differential at residue {k}, vertex {v + 1} has wrong shape")
        return cls(ring, nv, Periodic(p), terms, diffs)

    @property
    def is_periodic(self):
        return isinstance(self.support, Periodic)

    def term(self, i):
        if self.is_periodic:
            return self._terms[i % self.support.period]
        return self._terms.get(i, zero_rep(self.ring, self.nv))

    def diff(self, i):
        if self.is_periodic:
            return self._diffs[i % self.support.period]
        fam = self._diffs.get(i)
        if fam is not None:
            return fam
        src, tgt = self.term(i), self.term(i + 1)
        return tuple(
            Mat.zero(self.ring, tgt.vdims[v], src.vdims[v]) for v in range(self.nv)
        )

    def degrees(self):
        if self.is_periodic:
            return range(self.support.period)
        if self.support.is_empty():
            return range(0)
        return range(self.support.lo, self.support.hi + 1)

    def window(self, margin=1):
        if self.is_periodic:
            return range(self.support.period)
        if self.support.is_empty():
            return range(0)
        return range(self.support.lo - margin, self.support.hi + margin + 1)

    def is_zero(self):
        if self.is_periodic:
            return all(t.is_zero() for t in self._terms)
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, RepComplex):
            return NotImplemented
        if (self.ring, self.nv, self.support) != (other.ring, other.nv, other.support):
            return False
        if self.is_periodic:
            return self._terms == other._terms and self._diffs == other._diffs
        if self._terms != other._terms:
            return False
        keys = set(self._diffs) | set(other._diffs)
        return all(self.diff(i) == other.diff(i) for i in keys)

    def __repr__(self):
        if self.is_periodic:
            return f"RepComplex({self.ring}, nv={self.nv}, periodic p={self.support.period})"
        return f"RepComplex({self.ring}, nv={self.nv}, degrees={sorted(self._terms)})"


def zero_rep_complex(ring, nv):
    return RepComplex.bounded(ring, nv, {}, {})


def one_term_rep_complex(rep, degree=0):
    return RepComplex.bounded(rep.ring, rep.nvertices, {degree: rep}, {})


def validate_rep_complex(rc):
    """Vertexwise d^2 = 0 plus arrow-commutation of every differential."""
    problems = []
    for i in rc.window(1):
        fam, nxt = rc.diff(i), rc.diff(i + 1)
        for v in range(rc.nv):
            if not (nxt[v] @ fam[v]).is_zero():
                problems.append(f"d^2 != 0 at degree {i}, vertex {v + 1}")
        src, tgt = rc.term(i), rc.term(i + 1)
        for v in range(rc.nv - 1):
            if tgt.arrow(v) @ fam[v] != fam[v + 1] @ src.arrow(v):
                problems.append(f"differential at degree {i} does not commute with arrow {v + 1}")
    return ValidationReport(not problems, problems)


class RepMap:
    """A degreewise family of rep morphisms commuting with the differentials."""

    __slots__ = ("source", "target", "_maps")

    def __init__(self, source, target, maps):
        if source.ring != target.ring or source.nv != target.nv:
            raise RepError("rep map endpoints must share the ring and vertex count")
        if source.is_periodic != target.is_periodic:
            raise RepError("rep map endpoints must share the support kind")
        if source.is_periodic and source.support.period != target.support.period:
            raise RepError("periodic rep map endpoints must share the period")
        self.source = source
        self.target = target
        kept = {}
        for i, fam in maps.items():
            if source.is_periodic:
                i %= source.support.period
            fam = tuple(fam)
            src, tgt = source.term(i), target.term(i)
            if len(fam) != source.nv:
                raise RepError(f"component at degree {i} must have {source.nv} vertex maps")
            for v in range(source.nv):
                if fam[v].rows != tgt.vdims[v] or fam[v].cols != src.vdims[v]:
                    raise RepError(f"component at degree {i}, vertex {v + 1} has wrong shape")
            if any(not m.is_zero() for m in fam):
                kept[i] = fam
        self._maps = kept

    def map(self, i):
        if self.source.is_periodic:
            i %= self.source.support.period
        fam = self._maps.get(i)
        if fam is not None:
            return fam
        src, tgt = self.source.term(i), self.target.term(i)
        return tuple(
            Mat.zero(self.source.ring, tgt.vdims[v], src.vdims[v])
            for v in range(self.source.nv)
        )

    def is_zero(self):
        return all(all(m.is_zero() for m in fam) for fam in self._maps.values())

    def __eq__(self, other):
        if not isinstance(other, RepMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        keys = set(self._maps) | set(other._maps)
        return all(self.map(i) == other.map(i) for i in keys)

    def _zip(self, other, op):
        keys = set(self._maps) | set(other._maps)
        return RepMap(
            self.source, self.target,
            {i: tuple(op(a, b) for a, b in zip(self.map(i), other.map(i))) for i in keys},
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return RepMap(self.source, self.target, {i: tuple(-m for m in fam) for i, fam in self._maps.items()})

    def scaled(self, value):
        return RepMap(
            self.source, self.target,
            {i: tuple(m.scaled(value) for m in fam) for i, fam in self._maps.items()},
        )


def rep_identity_map(rc):
    return RepMap(
        rc, rc,
        {i: tuple(Mat.identity(rc.ring, rc.term(i).vdims[v]) for v in range(rc.nv)) for i in rc.degrees()},
    )


def rep_zero_map(a, b):
    return RepMap(a, b, {})


def rep_compose(g, f):
    if f.target != g.source:
        raise RepError("rep maps are not composable")
    keys = set(f._maps) | set(g._maps)
    return RepMap(
        f.source, g.target,
        {i: tuple(gm @ fm for gm, fm in zip(g.map(i), f.map(i))) for i in keys},
    )


def validate_rep_map(f):
    problems = []
    src, tgt = f.source, f.target
    if src.is_periodic:
        window = range(src.support.period)
    else:
        degs = list(src.degrees()) + list(tgt.degrees())
        window = range(min(degs) - 1, max(degs) + 1) if degs else range(0)
    for i in window:
        for v in range(src.nv):
            if f.map(i + 1)[v] @ src.diff(i)[v] != tgt.diff(i)[v] @ f.map(i)[v]:
                problems.append(f"square at degree {i}, vertex {v + 1} does not commute")
        sterm, tterm = src.term(i), tgt.term(i)
        for v in range(src.nv - 1):
            if tterm.arrow(v) @ f.map(i)[v] != f.map(i)[v + 1] @ sterm.arrow(v):
                problems.append(f"component at degree {i} does not commute with arrow {v + 1}")
    return ValidationReport(not problems, problems)


def rep_shift(rc, k=1):
    """The k-fold shift: degree i becomes degree i-k content; d picks up (-1)^k."""
    sign = rc.ring.one() if k % 2 == 0 else rc.ring.neg(rc.ring.one())

    def flip(fam):
        if k % 2 == 0:
            return fam
        return tuple(m.scaled(sign) for m in fam)

    if rc.is_periodic:
        p = rc.support.period
        return RepComplex.periodic(
            rc.ring, rc.nv,
            tuple(rc.term(i + k) for i in range(p)),
            tuple(flip(rc.diff(i + k)) for i in range(p)),
        )
    terms = {i - k: t for i, t in rc._terms.items()}
    diffs = {i - k: flip(fam) for i, fam in rc._diffs.items()}
    return RepComplex.bounded(rc.ring, rc.nv, terms, diffs)


def rep_cone(f):
    """Classical mapping cone of a rep-complex morphism, vertexwise."""
    a, b = f.source, f.target
    ring, nv = a.ring, a.nv

    def term_at(m):
        sa, sb = a.term(m + 1), b.term(m)
        vdims = tuple(sb.vdims[v] + sa.vdims[v] for v in range(nv))
        arrows = []
        for v in range(nv - 1):
            arrows.append(
                block_matrix(
                    ring,
                    [sb.vdims[v + 1], sa.vdims[v + 1]],
                    [sb.vdims[v], sa.vdims[v]],
                    {(0, 0): sb.arrow(v), (1, 1): sa.arrow(v)},
                )
            )
        return LineRep(ring, vdims, arrows)

    def diff_at(m):
        sa, sb = a.term(m + 1), b.term(m)
        ta, tb = a.term(m + 2), b.term(m + 1)
        fam = []
        for v in range(nv):
            fam.append(
                block_matrix(
                    ring,
                    [tb.vdims[v], ta.vdims[v]],
                    [sb.vdims[v], sa.vdims[v]],
                    {
                        (0, 0): b.diff(m)[v],
                        (0, 1): f.map(m + 1)[v],
                        (1, 1): -a.diff(m + 1)[v],
                    },
                )
            )
        return tuple(fam)

    if a.is_periodic:
        p = a.support.period
        return RepComplex.periodic(
            ring, nv,
            tuple(term_at(m) for m in range(p)),
            tuple(diff_at(m) for m in range(p)),
        )
    degs = []
    if not b.support.is_empty():
        degs += [b.support.lo, b.support.hi]
    if not a.support.is_empty():
        degs += [a.support.lo - 1, a.support.hi - 1]
    if not degs:
        return zero_rep_complex(ring, nv)
    rng = range(min(degs), max(degs) + 1)
    return RepComplex.bounded(
        ring, nv,
        {m: term_at(m) for m in rng},
        {m: diff_at(m) for m in rng},
    )


def rep_materialize(rc, lo, hi):
    terms = {i: rc.term(i) for i in range(lo, hi + 1)}
    diffs = {i: rc.diff(i) for i in range(lo, hi)}
    return RepComplex.bounded(rc.ring, rc.nv, terms, diffs)


def rep_inflate_period(rc, q):
    if not rc.is_periodic:
        raise RepError("rep_inflate_period requires a periodic complex")
    p = rc.support.period
    if q % p:
        raise RepError(f"target period {q} is not a multiple of {p}")
    return RepComplex.periodic(
        rc.ring, rc.nv,
        tuple(rc.term(i) for i in range(q)),
        tuple(rc.diff(i) for i in range(q)),
    )


def rep_align_pair(a, b, periods=3):
    if a.is_periodic and b.is_periodic:
        p = lcm(a.support.period, b.support.period)
        if a.support.period != p:
            a = rep_inflate_period(a, p)
        if b.support.period != p:
            b = rep_inflate_period(b, p)
        return a, b
    if a.is_periodic or b.is_periodic:
        per, bnd = (a, b) if a.is_periodic else (b, a)
        p = per.support.period
        if bnd.support.is_empty():
            lo, hi = 0, 0
        else:
            lo, hi = bnd.support.lo, bnd.support.hi
        lo -= periods * p + 2
        hi += periods * p + 2
        per = rep_materialize(per, lo, hi)
        return (per, b) if a.is_periodic else (a, per)
    return a, b


# ---------------------------------------------------------------------------
# Hom-space machinery (classical homotopies: f = d s + s d)
# ---------------------------------------------------------------------------

def _rep_pair_window(a, b):
    if a.is_periodic:
        return range(a.support.period)
    degs = list(a.degrees()) + list(b.degrees())
    if not degs:
        return range(0)
    return range(min(degs) - 2, max(degs) + 3)


def _rep_residue(a, i):
    return i % a.support.period if a.is_periodic else i


def _add_morphism_var_slots(prob, tag, a, b, shift):
    """Variable blocks for degreewise maps a.term(i) -> b.term(i - shift)."""
    for i in _rep_pair_window(a, b):
        key = (tag, _rep_residue(a, i))
        for v in range(a.nv):
            rows = b.term(i - shift).vdims[v]
            cols = a.term(i).vdims[v]
            prob.vars.add(key + (v,), rows, cols)


def _add_arrow_constraints(prob, tag, a, b, shift):
    """Equations forcing each degreewise map to commute with the arrows."""
    ring = a.ring
    for i in _rep_pair_window(a, b):
        key = _rep_residue(a, i)
        sterm, tterm = a.term(i), b.term(i - shift)
        for v in range(a.nv - 1):
            eq = ("arrow", tag, key, v)
            prob.eqs.add(eq, tterm.vdims[v + 1], sterm.vdims[v])
            if not prob.eqs.has(eq):
                continue
            # arrow_B o f_v - f_(v+1) o arrow_A = 0
            prob.add_sandwich(eq, (tag, key, v), tterm.arrow(v), Mat.identity(ring, sterm.vdims[v]))
            prob.add_sandwich(
                eq, (tag, key, v + 1),
                Mat.identity(ring, tterm.vdims[v + 1]), sterm.arrow(v),
                negate=True,
            )


def _rep_chain_map_problem(a, b):
    from .homotopy import _LinearProblem

    prob = _LinearProblem(a.ring)
    _add_morphism_var_slots(prob, "f", a, b, 0)
    _add_arrow_constraints(prob, "f", a, b, 0)
    ring = a.ring
    for i in _rep_pair_window(a, b):
        key = _rep_residue(a, i)
        for v in range(a.nv):
            eq = ("sq", key, v)
            prob.eqs.add(eq, b.term(i + 1).vdims[v], a.term(i).vdims[v])
            if not prob.eqs.has(eq):
                continue
            prob.add_sandwich(
                eq, ("f", _rep_residue(a, i + 1), v),
                Mat.identity(ring, b.term(i + 1).vdims[v]), a.diff(i)[v],
            )
            prob.add_sandwich(
                eq, ("f", key, v),
                b.diff(i)[v], Mat.identity(ring, a.term(i).vdims[v]),
                negate=True,
            )
    return prob


def _rep_homotopy_operator(a, b):
    """Problem carrying s-variables with arrow constraints and the boundary rows.

    The boundary rows express (d s + s d) in the same coordinates the
    chain-map variables of :func:`_rep_chain_map_problem` use.
    """
    from .homotopy import _LinearProblem

    prob = _LinearProblem(a.ring)
    _add_morphism_var_slots(prob, "s", a, b, 1)
    _add_arrow_constraints(prob, "s", a, b, 1)
    ring = a.ring
    for i in _rep_pair_window(a, b):
        key = _rep_residue(a, i)
        for v in range(a.nv):
            eq = ("bnd", key, v)
            prob.eqs.add(eq, b.term(i).vdims[v], a.term(i).vdims[v])
            if not prob.eqs.has(eq):
                continue
            # d_B^(i-1) s^i + s^(i+1) d_A^i
            prob.add_sandwich(
                eq, ("s", key, v),
                b.diff(i - 1)[v], Mat.identity(ring, a.term(i).vdims[v]),
            )
            prob.add_sandwich(
                eq, ("s", _rep_residue(a, i + 1), v),
                Mat.identity(ring, b.term(i).vdims[v]), a.diff(i)[v],
            )
    return prob


def rep_hom_space_dim(a, b):
    """Ground-field dimensions (chain maps, null-homotopic, quotient)."""
    from .homotopy import HomDims

    a, b = rep_align_pair(a, b)
    cm = _rep_chain_map_problem(a, b)
    chain_dim = cm.ground_var_count() - cm.matrix_rank()

    # null-homotopic dim = dim of the boundary image of the arrow-commuting
    # s-families: rank([arrow constraints; boundary rows]) - rank(arrow rows)
    hp = _rep_homotopy_operator(a, b)
    mat = hp.matrix()
    arrow_set = set()
    for k in hp.eqs.keys():
        if k[0] == "arrow":
            off = hp.eqs.offset(k)
            r, c = hp.eqs.shape(k)
            arrow_set.update(range(off, off + r * c))
    arrow_rows = [mat.data[e] for e in range(mat.rows) if e in arrow_set]
    arrow_mat = Mat(a.ring, len(arrow_rows), mat.cols, tuple(arrow_rows), _normalized=True)
    null_dim = rank(mat) - rank(arrow_mat)
    return HomDims(chain_dim, null_dim)


def rep_hom_k_dim(a, b):
    return rep_hom_space_dim(a, b).hom_k_dim


def rep_chain_map_basis(a, b):
    a, b = rep_align_pair(a, b)
    prob = _rep_chain_map_problem(a, b)
    out = []
    for blocks in prob.kernel_block_basis():
        maps = {}
        for (tag, i, v), m in blocks.items():
            maps.setdefault(i, [None] * a.nv)[v] = m
        fams = {}
        for i, fam in maps.items():
            fams[i] = tuple(
                m if m is not None else Mat.zero(a.ring, b.term(i).vdims[v], a.term(i).vdims[v])
                for v, m in enumerate(fam)
            )
        out.append(RepMap(a, b, fams))
    return out


@dataclass
class RepHomotopy:
    """Degreewise rep morphisms s^i: A^i -> B^(i-1)."""

    source: object
    target: object
    maps: dict

    def s(self, i):
        i = _rep_residue(self.source, i)
        fam = self.maps.get(i)
        if fam is not None:
            return fam
        src, tgt = self.source.term(i), self.target.term(i - 1)
        return tuple(
            Mat.zero(self.source.ring, tgt.vdims[v], src.vdims[v])
            for v in range(self.source.nv)
        )


def rep_boundary_of(h):
    """The chain map d s + s d of a homotopy family."""
    a, b = h.source, h.target
    maps = {}
    for i in _rep_pair_window(a, b):
        fam = []
        for v in range(a.nv):
            fam.append(
                b.diff(i - 1)[v] @ h.s(i)[v] + h.s(i + 1)[v] @ a.diff(i)[v]
            )
        maps[_rep_residue(a, i)] = tuple(fam)
    return RepMap(a, b, maps)


def rep_verify_homotopy(f, h):
    g = rep_boundary_of(h)
    for i in _rep_pair_window(f.source, f.target):
        if f.map(i) != g.map(i):
            return False
    return True


def rep_null_homotopy(f):
    """A classical homotopy witness for a rep-complex morphism, or None."""
    a, b = f.source, f.target
    prob = _rep_homotopy_operator(a, b)
    for i in _rep_pair_window(a, b):
        key = _rep_residue(a, i)
        for v in range(a.nv):
            eq = ("bnd", key, v)
            if prob.eqs.has(eq):
                prob.add_rhs_block(eq, f.map(i)[v])
            elif not f.map(i)[v].is_zero():
                return None
    blocks = prob.solve_blocks()
    if blocks is None:
        return None
    maps = {}
    for (tag, i, v), m in blocks.items():
        maps.setdefault(i, [None] * a.nv)[v] = m
    fams = {}
    for i, fam in maps.items():
        fams[i] = tuple(
            m if m is not None else Mat.zero(a.ring, b.term(i - 1).vdims[v], a.term(i).vdims[v])
            for v, m in enumerate(fam)
        )
    h = RepHomotopy(a, b, fams)
    if not rep_verify_homotopy(f, h):
        raise InternalCheckError("rep homotopy solver returned a witness failing re-evaluation")
    return h


def rep_is_null_homotopic(f):
    return rep_null_homotopy(f) is not None


def rep_is_contractible(rc):
    return rep_is_null_homotopic(rep_identity_map(rc))


def rep_is_acyclic(rc):
    """Vertexwise vanishing of classical homology over the support window."""
    for i in rc.window(1):
        for v in range(rc.nv):
            d_in = rc.diff(i - 1)[v]
            d_out = rc.diff(i)[v]
            cycles = kernel_basis(d_out).cols
            if cycles != rank(d_in):
                return False
    return True


def rep_homotopy_equivalence(a, b, rng=None, attempts=25):
    """Search for mutually inverse homotopy classes between two rep complexes."""
    import random as _random

    a2, b2 = rep_align_pair(a, b)
    basis = rep_chain_map_basis(a2, b2)
    if not basis:
        if a2.is_zero() and b2.is_zero():
            return rep_zero_map(a2, b2), rep_zero_map(b2, a2)
        return None
    rng = rng or _random.Random(20811)
    ring = a2.ring
    candidates = list(basis)
    for _ in range(max(0, attempts - len(basis))):
        acc = None
        for g in basis:
            term = g.scaled(ring.random(rng))
            acc = term if acc is None else acc + term
        candidates.append(acc)
    for u in candidates:
        if u.is_zero() and not (a2.is_zero() and b2.is_zero()):
            continue
        if not rep_is_contractible(rep_cone(u)):
            continue
        v = _rep_left_inverse(u)
        if v is None:
            continue
        if rep_is_null_homotopic(rep_compose(v, u) - rep_identity_map(a2)) and rep_is_null_homotopic(
            rep_compose(u, v) - rep_identity_map(b2)
        ):
            return u, v
    return None


def _rep_left_inverse(u):
    """Solve for v: B -> A with v o u homotopic to id_A (joint linear system)."""
    from .homotopy import _LinearProblem

    a, b = u.source, u.target
    ring = a.ring
    prob = _LinearProblem(ring)
    _add_morphism_var_slots(prob, "v", b, a, 0)
    _add_arrow_constraints(prob, "v", b, a, 0)
    _add_morphism_var_slots(prob, "s", a, a, 1)
    _add_arrow_constraints(prob, "s", a, a, 1)
    for i in _rep_pair_window(b, a):
        key = _rep_residue(a, i)
        for v in range(a.nv):
            eq = ("sq", key, v)
            prob.eqs.add(eq, a.term(i + 1).vdims[v], b.term(i).vdims[v])
            if prob.eqs.has(eq):
                prob.add_sandwich(
                    eq, ("v", _rep_residue(a, i + 1), v),
                    Mat.identity(ring, a.term(i + 1).vdims[v]), b.diff(i)[v],
                )
                prob.add_sandwich(
                    eq, ("v", key, v),
                    a.diff(i)[v], Mat.identity(ring, b.term(i).vdims[v]),
                    negate=True,
                )
            rec = ("rec", key, v)
            prob.eqs.add(rec, a.term(i).vdims[v], a.term(i).vdims[v])
            if not prob.eqs.has(rec):
                continue
            prob.add_sandwich(
                rec, ("v", key, v),
                Mat.identity(ring, a.term(i).vdims[v]), u.map(i)[v],
            )
            prob.add_sandwich(
                rec, ("s", key, v),
                a.diff(i - 1)[v], Mat.identity(ring, a.term(i).vdims[v]),
                negate=True,
            )
            prob.add_sandwich(
                rec, ("s", _rep_residue(a, i + 1), v),
                Mat.identity(ring, a.term(i).vdims[v]), a.diff(i)[v],
                negate=True,
            )
            prob.add_rhs_block(rec, Mat.identity(ring, a.term(i).vdims[v]))
    blocks = prob.solve_blocks()
    if blocks is None:
        return None
    maps = {}
    for key, m in blocks.items():
        if key[0] != "v":
            continue
        _, i, v = key
        maps.setdefault(i, [None] * a.nv)[v] = m
    fams = {}
    for i, fam in maps.items():
        fams[i] = tuple(
            m if m is not None else Mat.zero(ring, a.term(i).vdims[v], b.term(i).vdims[v])
            for v, m in enumerate(fam)
        )
    return RepMap(b, a, fams)


# ---------------------------------------------------------------------------
# Projectivity structure and the hat functor
# ---------------------------------------------------------------------------

@dataclass
class ProjDecomposition:
    """Summand ranks P^1..P^n plus per-vertex bases aligning the staircase.

    ``transitions[v]`` is an invertible matrix whose columns express the
    standard summand basis of P^1 + ... + P^(v+1) inside vertex v+1; arrows
    become the standard inclusions in these coordinates.
    """

    ranks: tuple
    transitions: tuple
    inverses: tuple


@dataclass
class NotProjective:
    failing_arrow: int
    reason: str

    def __bool__(self):
        return False


def _residue_matrix(mat):
    """Reduce entries modulo the maximal ideal (identity over fields)."""
    ring = mat.ring
    if ring.is_field:
        return mat
    gf = PrimeField(ring.p)
    data = tuple(tuple(v[0] for v in row) for row in mat.data)
    return Mat(gf, mat.rows, mat.cols, data, _normalized=True)


def _is_split_mono(mat):
    """Over a field: full column rank.  Over the local truncated ring:
    injectivity of the residue matrix (Nakayama lifts the splitting)."""
    return rank(_residue_matrix(mat)) == mat.cols


def decompose_projective(rep):
    """Summand ranks and aligning bases, or a refusal naming the first bad arrow."""
    ring = rep.ring
    n = rep.nvertices
    ranks = []
    transitions = []
    inverses = []
    t_prev = None
    for v in range(n):
        if v == 0:
            ranks.append(rep.vdims[0])
            t = Mat.identity(ring, rep.vdims[0])
        else:
            arrow = rep.arrow(v - 1)
            if not _is_split_mono(arrow):
                return NotProjective(v, f"arrow into vertex {v + 1} is not a split injection")
            ranks.append(rep.vdims[v] - rep.vdims[v - 1])
            carried = arrow @ t_prev
            # greedily extend the carried image by standard basis vectors;
            # over the truncated ring the choice is made on residues and the
            # lifted vectors stay a complement (Nakayama)
            chosen = []
            cur = _residue_matrix(carried)
            gf = cur.ring
            for e in range(rep.vdims[v]):
                if len(chosen) == ranks[-1]:
                    break
                col = Mat.from_rows(
                    gf, [[gf.one() if r == e else gf.zero()] for r in range(rep.vdims[v])]
                )
                cand = cur.hstack(col)
                if rank(cand) > rank(cur):
                    cur = cand
                    chosen.append(e)
            if len(chosen) != ranks[-1]:
                return NotProjective(v, f"no free complement at vertex {v + 1}")
            compl = Mat.from_rows(
                ring,
                [[ring.one() if r == e else ring.zero() for e in chosen] for r in range(rep.vdims[v])],
            )
            t = carried.hstack(compl)
        t_inv = inverse(t)
        if t_inv is None:
            return NotProjective(max(v - 1, 0), f"basis change at vertex {v + 1} is singular")
        transitions.append(t)
        inverses.append(t_inv)
        t_prev = t
    return ProjDecomposition(tuple(ranks), tuple(transitions), tuple(inverses))


def _block_offsets(ranks):
    off = [0]
    for r in ranks:
        off.append(off[-1] + r)
    return off


def summand_components(mat, dec_src, dec_tgt, vertex):
    """Blocks of a vertex map in summand coordinates, as {(x, y): Mat} (0-based)."""
    m = dec_tgt.inverses[vertex] @ mat @ dec_src.transitions[vertex]
    roff = _block_offsets(dec_tgt.ranks[: vertex + 1])
    coff = _block_offsets(dec_src.ranks[: vertex + 1])
    out = {}
    for x in range(vertex + 1):
        for y in range(vertex + 1):
            rows = range(roff[x], roff[x + 1])
            cols = range(coff[y], coff[y + 1])
            blk = Mat.from_rows(
                mat.ring, [[m.data[r][c] for c in cols] for r in rows]
            ) if dec_tgt.ranks[x] and dec_src.ranks[y] else Mat.zero(mat.ring, dec_tgt.ranks[x], dec_src.ranks[y])
            out[(x, y)] = blk
    return out


def morphism_components(fam, dec_src, dec_tgt):
    """Summand components of a rep morphism given vertexwise.

    Components below the diagonal must vanish (there are no nonzero morphisms
    from a later summand to an earlier one); a violation means the input was
    not a rep morphism of projectives and is reported as an internal error.
    The component family is read off the last vertex and cross-checked
    against every earlier vertex.
    """
    n = len(fam)
    full = summand_components(fam[n - 1], dec_src, dec_tgt, n - 1)
    for x in range(n):
        for y in range(n):
            if x > y and not full[(x, y)].is_zero():
                raise InternalCheckError(
                    "summand component below the diagonal is nonzero; "
                    "input is not a morphism of staircase projectives"
                )
    for v in range(n - 1):
        part = summand_components(fam[v], dec_src, dec_tgt, v)
        for x in range(v + 1):
            for y in range(v + 1):
                if part[(x, y)] != full[(x, y)]:
                    raise InternalCheckError(
                        "summand components disagree across vertices"
                    )
    return full


def rho_rep(ring, ranks):
    """The direct sum of e_rho blocks with the given summand ranks."""
    n = len(ranks)
    vdims = tuple(sum(ranks[x] for x in range(v, n)) for v in range(n))
    arrows = []
    for v in range(n - 1):
        arrows.append(
            block_matrix(
                ring,
                [ranks[x] for x in range(v + 1, n)],
                [ranks[x] for x in range(v, n)],
                {(x - (v + 1), x - v): Mat.identity(ring, ranks[x]) for x in range(v + 1, n)},
            )
        )
    return LineRep(ring, vdims, arrows)


def _rho_morphism(components, ranks_src, ranks_tgt, ring):
    """Assemble the rho-side vertex maps from upper-triangular components."""
    n = len(ranks_src)
    fams = []
    for v in range(n):
        rows = [ranks_tgt[x] for x in range(v, n)]
        cols = [ranks_src[y] for y in range(v, n)]
        blocks = {}
        for x in range(v, n):
            for y in range(max(x, v), n):
                blocks[(x - v, y - v)] = components[(x, y)]
        fams.append(block_matrix(ring, rows, cols, blocks))
    return tuple(fams)


def hat_complex(rc, decomps=None):
    """Swap every projective term for its split-epi mirror, componentwise.

    Morphism components are preserved on the nose, so functoriality is exact;
    the output complex is validated.
    """
    ring, nv = rc.ring, rc.nv
    if decomps is None:
        decomps = {}
        for i in rc.degrees():
            dec = decompose_projective(rc.term(i))
            if isinstance(dec, NotProjective):
                raise RepError(f"term at degree {i} is not projective: {dec.reason}")
            decomps[i] = dec

    def dec_at(i):
        if rc.is_periodic:
            return decomps[i % rc.support.period]
        if i in decomps:
            return decomps[i]
        return ProjDecomposition((0,) * nv, tuple(Mat.zero(ring, 0, 0) for _ in range(nv)),
                                 tuple(Mat.zero(ring, 0, 0) for _ in range(nv)))

    def term_at(i):
        return rho_rep(ring, dec_at(i).ranks)

    def diff_at(i):
        comps = morphism_components(rc.diff(i), dec_at(i), dec_at(i + 1))
        return _rho_morphism(comps, dec_at(i).ranks, dec_at(i + 1).ranks, ring)

    if rc.is_periodic:
        p = rc.support.period
        out = RepComplex.periodic(
            ring, nv,
            tuple(term_at(i) for i in range(p)),
            tuple(diff_at(i) for i in range(p)),
        )
    else:
        terms = {i: term_at(i) for i in rc.degrees()}
        diffs = {i: diff_at(i) for i in rc.degrees() if not rc.term(i + 1).is_zero()}
        out = RepComplex.bounded(ring, nv, terms, diffs)
    report = validate_rep_complex(out)
    if not report.ok:
        raise InternalCheckError(f"hat image fails validation: {report.problems[:3]}")
    return out


def hat_map(f, src_decomps=None, tgt_decomps=None):
    """The mirrored morphism between hat images, component-identical."""
    a, b = f.source, f.target

    def build_decomps(rc, given):
        if given is not None:
            return given
        out = {}
        for i in rc.degrees():
            dec = decompose_projective(rc.term(i))
            if isinstance(dec, NotProjective):
                raise RepError(f"term at degree {i} is not projective: {dec.reason}")
            out[i] = dec
        return out

    sdec = build_decomps(a, src_decomps)
    tdec = build_decomps(b, tgt_decomps)
    hat_a = hat_complex(a, sdec)
    hat_b = hat_complex(b, tdec)
    nv, ring = a.nv, a.ring

    def dec_of(table, rc, i):
        if rc.is_periodic:
            return table[i % rc.support.period]
        if i in table:
            return table[i]
        return ProjDecomposition((0,) * nv, tuple(Mat.zero(ring, 0, 0) for _ in range(nv)),
                                 tuple(Mat.zero(ring, 0, 0) for _ in range(nv)))

    maps = {}
    for i in set(a.degrees()) | set(b.degrees()):
        da, db = dec_of(sdec, a, i), dec_of(tdec, b, i)
        comps = morphism_components(f.map(i), da, db)
        maps[i] = _rho_morphism(comps, da.ranks, db.ranks, ring)
    return RepMap(hat_a, hat_b, maps)
