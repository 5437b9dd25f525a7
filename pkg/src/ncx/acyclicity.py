"""Acyclicity predicates: truncation, Hom-vanishing batteries, and the
correspondence with classical acyclicity on the folded side.

The definitional predicates quantify over every bounded complex of finitely
generated projectives.  No finite generation statement is available for that
family, so the predicates here are battery-relative: they sample a documented
finite family (all height-1..N disks over the support window widened by N,
plus seeded random bounded complexes) and are exact under-approximations.
On bounded inputs the Hom-vanishing answer is cross-checked against the
fingerprint computation, which the stalk members make complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .complexes import (
    InternalCheckError,
    NComplex,
    disk,
    dualize,
    inflate_period,
    is_n_exact,
    materialize,
    validate,
)
from .folding import fold_complex
from .homotopy import MATERIALIZE_PERIODS, hom_k_dim
from .linereps import (
    e_lambda,
    one_term_rep_complex,
    rep_hom_k_dim,
    rep_is_acyclic,
)
from .randgen import random_ncomplex, rng_for

DEFAULT_BATTERY_SEED = 20825
DEFAULT_BATTERY_RANDOM = 25


def brutal_truncate(x, n, periods=MATERIALIZE_PERIODS):
    """Discard all terms above degree n without adjusting the rest.

    Periodic input is materialized over ``periods`` periods plus margin N
    below the cut before truncating, producing a bounded complex.
    """
    if x.is_periodic:
        p = x.support.period
        lo = n - periods * p - x.N
        return materialize(x, lo, n)
    if x.support.is_empty() or n >= x.support.hi:
        return x
    return materialize(x, x.support.lo, n)


@dataclass
class TestBattery:
    """A finite family of bounded test complexes with provenance labels."""

    __test__ = False  # not a pytest collection target

    members: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"member-{k}" for k in range(len(self.members))]
        for k, m in enumerate(self.members):
            if m.is_periodic:
                raise ValueError(f"battery member {self.labels[k]} is not bounded")
            if not validate(m).ok:
                raise ValueError(f"battery member {self.labels[k]} fails validation")

    def __len__(self):
        return len(self.members)


def battery_window(x):
    if x.is_periodic:
        w = MATERIALIZE_PERIODS * x.support.period + x.N
        return range(-w, w + 1)
    if x.support.is_empty():
        return range(-x.N, x.N + 1)
    return range(x.support.lo - x.N, x.support.hi + x.N + 1)


def default_battery(x, n_random=DEFAULT_BATTERY_RANDOM, seed=DEFAULT_BATTERY_SEED):
    """All rank-1 disks over the widened support window plus seeded randoms."""
    n, ring = x.N, x.ring
    members = []
    labels = []
    for j in battery_window(x):
        for height in range(1, n + 1):
            members.append(disk(n, ring, j, height, 1))
            labels.append(f"disk(j={j}, height={height})")
    for k in range(n_random):
        rng = rng_for(seed, k)
        members.append(random_ncomplex(rng, n, ring, max_rank=1, max_width=n + 1, depth=1))
        labels.append(f"random-{k}")
    return TestBattery(members, labels)


def is_n_acyclic_hom(x, battery=None):
    """Hom-vanishing from every battery member into x.

    On bounded inputs the verdict is cross-checked against the fingerprint
    criterion (the stalk members compute exactly the amplitude-1 homology,
    which controls all amplitudes); a disagreement is an internal error.
    """
    if battery is None:
        battery = default_battery(x)
    verdict = all(hom_k_dim(p, x) == 0 for p in battery.members)
    if not x.is_periodic:
        expected = is_n_exact(x)
        if verdict != expected:
            raise InternalCheckError(
                f"battery Hom-vanishing ({verdict}) disagrees with the fingerprint ({expected})"
            )
    return verdict


def is_n_totally_acyclic(x, battery=None):
    """Hom-vanishing in both directions over the battery."""
    if battery is None:
        battery = default_battery(x)
    if not is_n_acyclic_hom(x, battery):
        return False
    return all(hom_k_dim(x, p) == 0 for p in battery.members)


def dual_exactness(x):
    """N-exactness of the degreewise dual; a cheaper companion predicate.

    This is reported alongside, and compared with, the battery predicate but
    never substituted for it.
    """
    return is_n_exact(dualize(x))


def _foldable(x):
    if not x.is_periodic:
        return x
    p = x.support.period
    return x if p % x.N == 0 else inflate_period(x, lcm(p, x.N))


@dataclass
class CorrespondenceReport:
    n_side_acyclic: bool
    folded_acyclic: bool
    n_side_totally_acyclic: bool
    folded_totally_acyclic: bool
    dual_exact: bool
    notes: list = field(default_factory=list)

    @property
    def acyclic_match(self):
        return self.n_side_acyclic == self.folded_acyclic

    @property
    def totally_acyclic_match(self):
        return self.n_side_totally_acyclic == self.folded_totally_acyclic

    @property
    def mismatch(self):
        return not (self.acyclic_match and self.totally_acyclic_match)


def _folded_battery(x, battery, fx):
    """Classical-side test family: folds of the battery plus one-term stalks."""
    members = [fold_complex(m) for m in battery.members if not m.is_periodic]
    if fx.is_periodic:
        w = MATERIALIZE_PERIODS * fx.support.period + 2
        degrees = range(-w, w + 1)
    elif fx.support.is_empty():
        degrees = range(-2, 3)
    else:
        degrees = range(fx.support.lo - 2, fx.support.hi + 3)
    for d in degrees:
        for v in range(1, fx.nv + 1):
            members.append(one_term_rep_complex(e_lambda(fx.ring, fx.nv, v, 1), d))
    return members


def correspondence_check(x, battery=None):
    """Compare the N-side predicates with the classical ones on the fold."""
    if battery is None:
        battery = default_battery(x)
    xf = _foldable(x)
    fx = fold_complex(xf)
    n_ac = is_n_exact(x)
    f_ac = rep_is_acyclic(fx)
    n_tac = is_n_totally_acyclic(x, battery)
    f_tac = all(
        rep_hom_k_dim(c, fx) == 0 and rep_hom_k_dim(fx, c) == 0
        for c in _folded_battery(x, battery, fx)
    )
    report = CorrespondenceReport(n_ac, f_ac, n_tac, f_tac, dual_exactness(x))
    if report.mismatch:
        report.notes.append("predicates disagree across the fold")
    return report
