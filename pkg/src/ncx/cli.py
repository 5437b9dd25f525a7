"""Command-line surface.

Commands read and write JSON documents on files or standard streams; every
numeric value is exact (integers, fraction pairs, coefficient arrays), never
a float.  Exit codes: 0 success or property holds, 1 property falsified
(with a replayable counterexample emitted), 2 malformed input.
"""

from __future__ import annotations

import re
import sys

import click

from .acyclicity import (
    DEFAULT_BATTERY_RANDOM,
    DEFAULT_BATTERY_SEED,
    brutal_truncate,
    correspondence_check,
    default_battery,
    is_n_totally_acyclic,
)
from .complexes import ComplexError, cone, disk, homology, sigma, sigma_inv, theta, validate
from .folding import fold_complex
from .homotopy import hom_space_dim, null_homotopy
from .properties import PROPERTIES, run_property
from .randgen import random_ncomplex, rng_for
from .rings import PrimeField, RationalField, TruncatedPolynomials
from .serialize import (
    DocumentError,
    SCHEMA_VERSION,
    chain_map_from_document,
    complex_from_document,
    complex_to_document,
    dumps,
    fingerprint_to_document,
    loads,
    rep_complex_to_document,
)

MALFORMED = 2
FALSIFIED = 1


def _fail_malformed(message):
    click.echo(f"error: {message}", err=True)
    sys.exit(MALFORMED)


def _read_document(stream):
    try:
        return loads(stream.read())
    except DocumentError as exc:
        _fail_malformed(str(exc))


def _read_complex(stream):
    try:
        return complex_from_document(_read_document(stream))
    except DocumentError as exc:
        _fail_malformed(str(exc))


def _read_chain_map(stream):
    try:
        return chain_map_from_document(_read_document(stream))
    except DocumentError as exc:
        _fail_malformed(str(exc))


def _write(doc, stream):
    stream.write(dumps(doc))


_RING_PATTERN = re.compile(r"^gf(\d+)(?:x(\d+))?$")


def parse_ring(text):
    """Ring names: 'q' for the rationals, 'gf7' for GF(7), 'gf2x3' for GF(2)[x]/(x^3)."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return RationalField()
    m = _RING_PATTERN.match(text)
    if not m:
        raise click.BadParameter(f"unrecognized ring {text!r} (try q, gf2, gf2x3)")
    p = int(m.group(1))
    try:
        if m.group(2) is None:
            return PrimeField(p)
        return TruncatedPolynomials(p, int(m.group(2)))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


@click.group()
def main():
    """Exact homological algebra for N-complexes and their folded images."""


_input_arg = click.argument("input", type=click.File("r"), default="-")
_output_opt = click.option("--out", type=click.File("w"), default="-", help="Output file (default stdout).")


@main.command("validate")
@_input_arg
def cmd_validate(input):
    """Check a complex document (shapes and the N-fold vanishing)."""
    x = _read_complex(input)
    report = validate(x)
    if not report.ok:  # unreachable through the checking loader, kept as a guard
        _fail_malformed("; ".join(report.problems))
    click.echo("ok")


@main.command("homology")
@_input_arg
@_output_opt
def cmd_homology(input, out):
    """Amplitude homology fingerprint of a complex."""
    x = _read_complex(input)
    _write(fingerprint_to_document(homology(x)), out)


@main.command("cone")
@_input_arg
@_output_opt
def cmd_cone(input, out):
    """Mapping cone of a chain-map document."""
    f = _read_chain_map(input)
    _write(complex_to_document(cone(f)), out)


@main.command("sigma")
@_input_arg
@_output_opt
@click.option("--inverse", is_flag=True, help="Apply the inverse suspension instead.")
def cmd_sigma(input, out, inverse):
    """Suspension (or inverse suspension) of a complex."""
    x = _read_complex(input)
    _write(complex_to_document(sigma_inv(x) if inverse else sigma(x)), out)


@main.command("theta")
@_input_arg
@_output_opt
@click.option("--k", type=int, default=1, show_default=True, help="Shift amount.")
def cmd_theta(input, out, k):
    """Degree shift (content at degree i+k moves to degree i)."""
    x = _read_complex(input)
    _write(complex_to_document(theta(x, k)), out)


@main.command("disk")
@_output_opt
@click.option("--modulus", "-n", "n_value", type=int, required=True, help="The N of the N-complex.")
@click.option("--ring", "ring_name", default="gf2", show_default=True)
@click.option("--top", "-j", type=int, default=0, show_default=True, help="Top degree of the disk.")
@click.option("--height", "-i", type=int, required=True, help="Number of consecutive degrees (1..N).")
@click.option("--rank", type=int, default=1, show_default=True)
def cmd_disk(out, n_value, ring_name, top, height, rank):
    """Write a disk complex document."""
    ring = parse_ring(ring_name)
    try:
        x = disk(n_value, ring, top, height, rank)
    except ComplexError as exc:
        _fail_malformed(str(exc))
    _write(complex_to_document(x), out)


@main.command("apply-f")
@_input_arg
@_output_opt
@click.option("--inflate/--no-inflate", default=True, show_default=True,
              help="Inflate a periodic input to a period divisible by N first.")
def cmd_apply_f(input, out, inflate):
    """Fold a complex into a complex of line-quiver representations."""
    from math import lcm

    from .complexes import inflate_period

    x = _read_complex(input)
    if inflate and x.is_periodic and x.support.period % x.N:
        x = inflate_period(x, lcm(x.support.period, x.N))
    try:
        _write(rep_complex_to_document(fold_complex(x)), out)
    except ComplexError as exc:
        _fail_malformed(str(exc))


@main.command("hom-dim")
@click.argument("source", type=click.File("r"))
@click.argument("target", type=click.File("r"))
@_output_opt
def cmd_hom_dim(source, target, out):
    """Hom-space dimensions between two complexes (before and after homotopy)."""
    x = _read_complex(source)
    y = _read_complex(target)
    try:
        dims = hom_space_dim(x, y)
    except ComplexError as exc:
        _fail_malformed(str(exc))
    _write(
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "hom_dims",
            "chain_maps_dim": dims.chain_maps_dim,
            "null_homotopic_dim": dims.null_homotopic_dim,
            "hom_k_dim": dims.hom_k_dim,
        },
        out,
    )


@main.command("nullhomotopy")
@_input_arg
@_output_opt
def cmd_nullhomotopy(input, out):
    """Find an exact homotopy witness for a chain-map document.

    Exit code 0 with the witness when one exists, 1 when none does.
    """
    f = _read_chain_map(input)
    w = null_homotopy(f)
    if w is None:
        _write({"schema_version": SCHEMA_VERSION, "kind": "homotopy_witness", "exists": False}, out)
        sys.exit(FALSIFIED)
    from .serialize import _matrix_to_json

    if f.source.is_periodic:
        maps = [_matrix_to_json(w.s(i)) for i in range(f.source.support.period)]
    else:
        maps = {str(i): _matrix_to_json(m) for i, m in sorted(w.maps.items()) if not m.is_zero()}
    _write(
        {"schema_version": SCHEMA_VERSION, "kind": "homotopy_witness", "exists": True, "maps": maps},
        out,
    )


@main.command("truncate")
@_input_arg
@_output_opt
@click.option("--at", type=int, required=True, help="Degree above which terms are discarded.")
@click.option("--periods", type=int, default=3, show_default=True,
              help="Materialization window for periodic input, in periods.")
def cmd_truncate(input, out, at, periods):
    """Brutal truncation of a complex."""
    x = _read_complex(input)
    _write(complex_to_document(brutal_truncate(x, at, periods=periods)), out)


@main.command("tac-check")
@_input_arg
@_output_opt
@click.option("--battery", "battery_random", type=int, default=DEFAULT_BATTERY_RANDOM,
              show_default=True, help="Number of random battery members.")
@click.option("--battery-seed", type=int, default=DEFAULT_BATTERY_SEED, show_default=True)
@click.option("--correspondence/--no-correspondence", default=True,
              help="Also compare against the folded-side predicates.")
def cmd_tac_check(input, out, battery_random, battery_seed, correspondence):
    """Battery-relative total acyclicity, with the folded-side comparison.

    Exit code 0 when the complex is totally acyclic over the battery (and the
    folded comparison agrees), 1 otherwise.
    """
    x = _read_complex(input)
    battery = default_battery(x, n_random=battery_random, seed=battery_seed)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "tac_report",
        "battery_size": len(battery),
    }
    ok = True
    if correspondence:
        report = correspondence_check(x, battery)
        doc.update(
            {
                "n_side_acyclic": report.n_side_acyclic,
                "folded_acyclic": report.folded_acyclic,
                "n_side_totally_acyclic": report.n_side_totally_acyclic,
                "folded_totally_acyclic": report.folded_totally_acyclic,
                "dual_exact": report.dual_exact,
                "mismatch": report.mismatch,
            }
        )
        ok = report.n_side_totally_acyclic and not report.mismatch
    else:
        tac = is_n_totally_acyclic(x, battery)
        doc["n_side_totally_acyclic"] = tac
        ok = tac
    _write(doc, out)
    if not ok:
        sys.exit(FALSIFIED)


@main.command("random")
@_output_opt
@click.option("--seed", type=int, required=True)
@click.option("--modulus", "-n", "n_value", type=int, default=3, show_default=True)
@click.option("--ring", "ring_name", default="gf2", show_default=True)
@click.option("--max-rank", type=int, default=2, show_default=True)
@click.option("--max-width", type=int, default=None)
@click.option("--depth", type=int, default=2, show_default=True)
def cmd_random(out, seed, n_value, ring_name, max_rank, max_width, depth):
    """Write a seeded random valid complex (byte-identical per seed)."""
    ring = parse_ring(ring_name)
    rng = rng_for(seed, 0)
    x = random_ncomplex(rng, n_value, ring, max_rank=max_rank, max_width=max_width, depth=depth)
    _write(complex_to_document(x), out)


@main.command("check")
@click.argument("property", type=click.Choice(sorted(PROPERTIES)))
@_output_opt
@click.option("--trials", type=int, default=None, help="Trial count (property default otherwise).")
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_check(property, out, trials, seed):
    """Run a seeded property campaign.

    Exit code 0 when every trial holds, 1 with counterexample documents when
    a trial is falsified.
    """
    result = run_property(property, trials=trials, seed=seed)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "campaign_report",
        "property": result.name,
        "trials": result.trials,
        "seed": result.seed,
        "passed": result.passed,
        "notes": result.notes,
        "failures": [
            {"trial": f.trial, "description": f.description, "documents": f.documents}
            for f in result.failures
        ],
    }
    _write(doc, out)
    click.echo(result.summary(), err=True)
    if not result.passed:
        sys.exit(FALSIFIED)


if __name__ == "__main__":
    main()
