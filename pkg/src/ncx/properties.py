"""Seeded property campaigns, shared by the CLI and the acceptance suite.

Each campaign runs a fixed number of independent trials; trial k of a
campaign with seed s draws everything from the stream ``rng_for(s, k)``, so
results and counterexamples are reproducible and independent of execution
order.  Failures carry replayable JSON documents of the offending inputs.

Trials may run concurrently (the environment variable NCX_THREADS caps the
worker count); per-trial streams make the outcome independent of scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .complexes import (
    compose,
    direct_sum,
    disk,
    homology,
    identity_map,
    is_n_exact,
    sigma,
    sigma_inv,
    validate,
)
from .folding import (
    fold_chain_map,
    fold_complex,
    generator_images,
    suspension_compat,
    transport_homotopy,
    unfold_homotopy,
)
from .homotopy import (
    homotopy_equivalence,
    hom_space_dim,
    is_quasi_iso,
    null_homotopy,
    verify_witness,
)
from .linereps import (
    rep_compose,
    rep_hom_space_dim,
    rep_identity_map,
    rep_is_acyclic,
    rep_verify_homotopy,
)
from .randgen import (
    random_chain_map,
    random_disk_sum,
    random_ncomplex,
    random_null_homotopic_map,
    random_n_exact,
    random_quasi_iso,
    rng_for,
)
from .rings import GF2, GF3, QQ
from .serialize import chain_map_to_document, complex_to_document


DEFAULT_RINGS = (GF2, GF3, QQ)


@dataclass
class TrialFailure:
    trial: int
    description: str
    documents: dict = field(default_factory=dict)


@dataclass
class CampaignResult:
    name: str
    trials: int
    seed: int
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def summary(self):
        status = "ok" if self.passed else f"{len(self.failures)} failure(s)"
        return f"{self.name}: {self.trials} trials, {status}"


def _worker_count():
    raw = os.environ.get("NCX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_campaign(name, trials, seed, trial_fn):
    result = CampaignResult(name, trials, seed)
    jobs = _worker_count()

    def run_one(k):
        rng = rng_for(seed, k)
        try:
            return trial_fn(rng, k)
        except Exception as exc:  # a crash is a failure with the exception text
            return TrialFailure(k, f"exception: {type(exc).__name__}: {exc}")

    if jobs == 1:
        outcomes = [run_one(k) for k in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_one, range(trials)))
    for out in outcomes:
        if isinstance(out, TrialFailure):
            result.failures.append(out)
        elif out:
            result.notes.append(str(out))
    result.failures.sort(key=lambda f: f.trial)
    return result


def _pick(rng, options):
    return options[rng.randrange(len(options))]


# ---------------------------------------------------------------------------
# Campaign bodies
# ---------------------------------------------------------------------------

def _check_homotopy_transport(rng, k, n_values=(2, 3, 4, 5), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    width = 3 * n
    q = random_disk_sum(rng, n, ring, max_rank=1, max_width=width)
    p = random_disk_sum(rng, n, ring, max_rank=1, max_width=width)
    f, w = random_null_homotopic_map(rng, q, p)
    report = transport_homotopy(f, w)
    ff = fold_chain_map(f)
    if not rep_verify_homotopy(ff, report.homotopy):
        return TrialFailure(
            k, "transported homotopy fails the folded identity",
            {"map": chain_map_to_document(f)},
        )
    return "fallback" if not report.from_formula else None


def _check_full_faithfulness(rng, k, n_values=(2, 3, 4), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    q = random_ncomplex(rng, n, ring, max_rank=1, max_width=n + 1, depth=1)
    p = random_ncomplex(rng, n, ring, max_rank=1, max_width=n + 1, depth=1)
    left = hom_space_dim(q, p).hom_k_dim
    right = rep_hom_space_dim(fold_complex(q), fold_complex(p)).hom_k_dim
    if left != right:
        return TrialFailure(
            k, f"hom dimensions differ: {left} before folding, {right} after",
            {"source": complex_to_document(q), "target": complex_to_document(p)},
        )
    return None


def _check_exactness_correspondence(rng, k, n_values=(2, 3, 4, 5), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    if rng.random() < 0.5:
        x = random_n_exact(rng, n, ring, max_rank=1, max_width=n + 1)
    else:
        x = random_ncomplex(rng, n, ring, max_rank=1, max_width=n + 1, depth=1)
    lhs = is_n_exact(x)
    rhs = rep_is_acyclic(fold_complex(x))
    if lhs != rhs:
        return TrialFailure(
            k, f"N-exactness {lhs} but folded acyclicity {rhs}",
            {"complex": complex_to_document(x)},
        )
    return None


def _check_suspension_compat(rng, k, n_values=(2, 3, 4, 5), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    x = random_ncomplex(rng, n, ring, max_rank=1, max_width=n + 1, depth=1)
    sc = suspension_compat(x)
    delta = rep_compose(sc.backward, sc.forward) - rep_identity_map(sc.forward.source)
    if not rep_verify_homotopy(delta, sc.homotopy):
        return TrialFailure(
            k, "suspension comparison homotopy fails evaluation",
            {"complex": complex_to_document(x)},
        )
    return "fallback" if sc.notes else None


def _check_h1_vanishing(rng, k, n_values=(2, 3, 4, 5), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    x = random_n_exact(rng, n, ring, max_rank=1, max_width=n + 1)
    fp = homology(x)
    if any(r == 1 and dim for (_, r), (dim, _) in fp.entries):
        return TrialFailure(
            k, "generator produced nonzero amplitude-1 homology",
            {"complex": complex_to_document(x)},
        )
    if not fp.is_zero():
        return TrialFailure(
            k, "amplitude-1 homology vanishes but a higher amplitude does not",
            {"complex": complex_to_document(x)},
        )
    return None


def _check_functoriality(rng, k, n_values=(2, 3, 4), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    x = random_disk_sum(rng, n, ring, max_rank=1, max_width=n + 1)
    y = random_disk_sum(rng, n, ring, max_rank=1, max_width=n + 1)
    z = random_disk_sum(rng, n, ring, max_rank=1, max_width=n + 1)
    f = random_chain_map(rng, x, y)
    g = random_chain_map(rng, y, z)
    if fold_chain_map(identity_map(x)) != rep_identity_map(fold_complex(x)):
        return TrialFailure(k, "fold of the identity is not the identity",
                            {"complex": complex_to_document(x)})
    lhs = fold_chain_map(compose(g, f))
    rhs = rep_compose(fold_chain_map(g), fold_chain_map(f))
    if lhs != rhs:
        return TrialFailure(
            k, "fold does not respect composition",
            {"first": chain_map_to_document(f), "second": chain_map_to_document(g)},
        )
    return None


def _check_sigma_inverse(rng, k, n_values=(2, 3, 4), rings=(GF2, GF3)):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    x = random_disk_sum(rng, n, ring, max_rank=1, max_width=n)
    if homotopy_equivalence(x, sigma(sigma_inv(x)), rng=rng) is None:
        return TrialFailure(k, "suspension of the desuspension is not equivalent",
                            {"complex": complex_to_document(x)})
    if homotopy_equivalence(x, sigma_inv(sigma(x)), rng=rng) is None:
        return TrialFailure(k, "desuspension of the suspension is not equivalent",
                            {"complex": complex_to_document(x)})
    return None


def _check_solver_completeness(rng, k, n_values=(2, 3, 4, 5), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    q = random_disk_sum(rng, n, ring, max_rank=1, max_width=2 * n)
    p = random_disk_sum(rng, n, ring, max_rank=1, max_width=2 * n)
    f, _ = random_null_homotopic_map(rng, q, p)
    w = null_homotopy(f)
    if w is None or not verify_witness(f, w):
        return TrialFailure(k, "witness solver missed a planted homotopy",
                            {"map": chain_map_to_document(f)})
    return None


def _check_cone_quasi_iso(rng, k, n_values=(2, 3, 4), rings=(GF2, GF3)):
    from ncx.complexes import cone

    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    if rng.random() < 0.5:
        f = random_quasi_iso(rng, n, ring, max_rank=1, max_width=n)
        expected = True
    else:
        x = random_disk_sum(rng, n, ring, max_rank=1, max_width=n)
        y = random_disk_sum(rng, n, ring, max_rank=1, max_width=n)
        f = random_chain_map(rng, x, y)
        expected = None
    verdict = is_quasi_iso(f)  # internally cross-checks cone exactness
    if expected is not None and verdict != expected:
        return TrialFailure(k, f"expected quasi-isomorphism verdict {expected}",
                            {"map": chain_map_to_document(f)})
    if verdict != is_n_exact(cone(f)):
        return TrialFailure(k, "verdict disagrees with cone exactness",
                            {"map": chain_map_to_document(f)})
    return None


def _check_homk_disk_invariance(rng, k, n_values=(2, 3, 4), rings=(GF2, GF3)):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    x = random_disk_sum(rng, n, ring, max_rank=1, max_width=n)
    y = random_disk_sum(rng, n, ring, max_rank=1, max_width=n)
    base = hom_space_dim(x, y).hom_k_dim
    pad = disk(n, ring, rng.randint(0, n), n, rng.randint(1, 2))
    if hom_space_dim(direct_sum(x, pad), y).hom_k_dim != base:
        return TrialFailure(k, "padding the source changed the hom dimension",
                            {"source": complex_to_document(x), "target": complex_to_document(y)})
    if hom_space_dim(x, direct_sum(y, pad)).hom_k_dim != base:
        return TrialFailure(k, "padding the target changed the hom dimension",
                            {"source": complex_to_document(x), "target": complex_to_document(y)})
    return None


def _check_faithful_witness(rng, k, n_values=(2, 3, 4), rings=(GF2, GF3)):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    q = random_disk_sum(rng, n, ring, max_rank=1, max_width=n + 1)
    p = random_disk_sum(rng, n, ring, max_rank=1, max_width=n + 1)
    f, w = random_null_homotopic_map(rng, q, p)
    tr = transport_homotopy(f, w)
    rep = unfold_homotopy(f, tr.homotopy)
    if not verify_witness(f, rep.witness):
        return TrialFailure(k, "extracted witness fails the reconstruction identity",
                            {"map": chain_map_to_document(f)})
    return "fallback" if not rep.from_formula else None


def _check_validate_sweep(rng, k, n_values=(2, 3, 4, 5), rings=DEFAULT_RINGS):
    n = _pick(rng, n_values)
    ring = _pick(rng, rings)
    x = random_ncomplex(rng, n, ring, max_rank=2, max_width=2 * n, depth=2)
    if not validate(x).ok:
        return TrialFailure(k, "random generator emitted an invalid complex",
                            {"complex": complex_to_document(x)})
    return None


def _check_generator_images(rng, k, n_values=(3, 4, 5), rings=(GF2,)):
    n = n_values[k % len(n_values)]
    ring = _pick(rng, rings)
    for image in generator_images(n, ring):
        if not image.equivalent:
            return TrialFailure(k, f"generator image {image.name} not equivalent to its model")
    return None


PROPERTIES = {
    "homotopy-transport": (_check_homotopy_transport, 300),
    "full-faithfulness": (_check_full_faithfulness, 200),
    "exactness-correspondence": (_check_exactness_correspondence, 200),
    "suspension-compat": (_check_suspension_compat, 150),
    "h1-vanishing": (_check_h1_vanishing, 200),
    "functoriality": (_check_functoriality, 200),
    "sigma-inverse": (_check_sigma_inverse, 50),
    "solver-completeness": (_check_solver_completeness, 300),
    "cone-quasi-iso": (_check_cone_quasi_iso, 100),
    "homk-disk-invariance": (_check_homk_disk_invariance, 60),
    "faithful-witness": (_check_faithful_witness, 100),
    "validate-sweep": (_check_validate_sweep, 1000),
    "generator-images": (_check_generator_images, 3),
}


def run_property(name, trials=None, seed=0, **options):
    if name not in PROPERTIES:
        known = ", ".join(sorted(PROPERTIES))
        raise KeyError(f"unknown property {name!r}; known: {known}")
    fn, default_trials = PROPERTIES[name]
    trials = default_trials if trials is None else trials

    def body(rng, k):
        return fn(rng, k, **options) if options else fn(rng, k)

    return _run_campaign(name, trials, seed, body)
