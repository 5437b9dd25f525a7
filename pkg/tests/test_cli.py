import json

from click.testing import CliRunner

from ncx.cli import main, parse_ring
from ncx.complexes import NComplex, disk
from ncx.matrices import Mat
from ncx.rings import GF2, PrimeField, RationalField, TruncatedPolynomials
from ncx.serialize import complex_to_document, dumps

R23 = TruncatedPolynomials(2, 3)


def x_complex_text():
    x = NComplex.periodic(3, R23, (1,), (Mat.from_rows(R23, [[R23.gen()]]),))
    return dumps(complex_to_document(x))


def run(args, stdin=None):
    return CliRunner().invoke(main, args, input=stdin, catch_exceptions=False)


def test_parse_ring():
    assert parse_ring("gf2") == PrimeField(2)
    assert parse_ring("q") == RationalField()
    assert parse_ring("gf2x3") == TruncatedPolynomials(2, 3)


def test_validate_ok_and_malformed():
    res = run(["validate", "-"], stdin=x_complex_text())
    assert res.exit_code == 0 and "ok" in res.output
    res = run(["validate", "-"], stdin="{broken")
    assert res.exit_code == 2


def test_validate_rejects_bad_differential():
    doc = {
        "schema_version": 1, "kind": "ncomplex", "N": 3,
        "ring": {"kind": "prime_field", "p": 2},
        "support": {"kind": "periodic", "period": 1},
        "dims": [1], "diffs": [[[1]]],
    }
    res = run(["validate", "-"], stdin=json.dumps(doc))
    assert res.exit_code == 2


def test_homology_partial_disk():
    doc = dumps(complex_to_document(disk(3, GF2, 1, 2, 1)))
    res = run(["homology", "-"], stdin=doc)
    assert res.exit_code == 0
    table = json.loads(res.output)
    entries = {(e["degree"], e["amplitude"]): e["dim"] for e in table["entries"]}
    assert entries == {(1, 1): 1, (0, 2): 1}


def test_disk_theta_sigma_pipeline():
    res = run(["disk", "-n", "3", "--ring", "gf3", "-j", "1", "-i", "2"])
    assert res.exit_code == 0
    res2 = run(["theta", "--k", "1", "-"], stdin=res.output)
    assert res2.exit_code == 0
    doc = json.loads(res2.output)
    assert set(doc["dims"]) == {"-1", "0"}
    res3 = run(["sigma", "-"], stdin=res.output)
    assert res3.exit_code == 0
    res4 = run(["sigma", "--inverse", "-"], stdin=res.output)
    assert res4.exit_code == 0


def test_cone_command():
    x = disk(3, GF2, 1, 2, 1)
    from ncx.complexes import identity_map
    from ncx.serialize import chain_map_to_document

    doc = dumps(chain_map_to_document(identity_map(x)))
    res = run(["cone", "-"], stdin=doc)
    assert res.exit_code == 0
    cone_doc = json.loads(res.output)
    assert cone_doc["kind"] == "ncomplex"


def test_hom_dim_command(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(dumps(complex_to_document(disk(3, GF2, 0, 1, 1))))
    res = run(["hom-dim", str(a), str(a)])
    assert res.exit_code == 0
    dims = json.loads(res.output)
    assert dims["chain_maps_dim"] == 1 and dims["hom_k_dim"] == 1


def test_nullhomotopy_command():
    from ncx.complexes import identity_map
    from ncx.serialize import chain_map_to_document

    full = disk(3, GF2, 0, 3, 1)
    res = run(["nullhomotopy", "-"], stdin=dumps(chain_map_to_document(identity_map(full))))
    assert res.exit_code == 0
    witness = json.loads(res.output)
    assert witness["exists"] is True
    partial = disk(3, GF2, 1, 2, 1)
    res = run(["nullhomotopy", "-"], stdin=dumps(chain_map_to_document(identity_map(partial))))
    assert res.exit_code == 1


def test_truncate_command():
    res = run(["truncate", "--at", "0", "-"], stdin=x_complex_text())
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["support"]["kind"] == "bounded"
    assert max(int(k) for k in doc["dims"]) == 0


def test_apply_f_inflates_periodic():
    res = run(["apply-f", "-"], stdin=x_complex_text())
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["kind"] == "rep_complex"
    assert doc["support"] == {"kind": "periodic", "period": 2}
    res = run(["apply-f", "--no-inflate", "-"], stdin=x_complex_text())
    assert res.exit_code == 2


def test_random_is_deterministic():
    res1 = run(["random", "--seed", "5", "-n", "3", "--ring", "gf2"])
    res2 = run(["random", "--seed", "5", "-n", "3", "--ring", "gf2"])
    assert res1.exit_code == 0 and res1.output == res2.output
    res3 = run(["random", "--seed", "6", "-n", "3", "--ring", "gf2"])
    assert res3.output != res1.output
    # output is loadable and valid
    res4 = run(["validate", "-"], stdin=res1.output)
    assert res4.exit_code == 0


def test_tac_check_x_complex_small_battery():
    res = run(["tac-check", "--battery", "2", "--no-correspondence", "-"],
              stdin=x_complex_text())
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["n_side_totally_acyclic"] is True


def test_tac_check_fails_on_stalk():
    doc = dumps(complex_to_document(disk(3, GF2, 0, 1, 1)))
    res = run(["tac-check", "--battery", "2", "--no-correspondence", "-"], stdin=doc)
    assert res.exit_code == 1


def test_check_command_runs_and_reports():
    res = run(["check", "functoriality", "--trials", "4", "--seed", "3"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["passed"] is True and report["trials"] == 4
