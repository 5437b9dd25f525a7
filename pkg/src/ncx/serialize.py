"""JSON documents for complexes and chain maps.

Degree keys are decimal strings (JSON has no integer keys).  Matrix entries
are ring-dependent: plain integers over a prime field, ``[numerator,
denominator]`` pairs over the rationals, and coefficient arrays of length
exactly m over a truncated polynomial ring.

Canonical form sorts keys, normalizes fractions, stores only nonzero ranks
and nonzero differentials (bounded case), and is stable under a
deserialize/serialize round trip.  Every load runs the structural validator
and rejects bad documents with a located error.
"""

from __future__ import annotations

import json

from .complexes import ChainMapN, ComplexError, NComplex, validate, validate_map
from .matrices import Mat
from .rings import ring_from_json, ring_to_json

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _require(cond, message, path):
    if not cond:
        raise DocumentError(message, path)


def _matrix_to_json(mat):
    enc = mat.ring.element_to_json
    return [[enc(v) for v in row] for row in mat.data]


def _matrix_from_json(ring, rows, cols, obj, path):
    _require(isinstance(obj, list), "matrix must be an array of rows", path)
    _require(len(obj) == rows, f"expected {rows} rows, got {len(obj)}", path)
    data = []
    for r, row in enumerate(obj):
        _require(isinstance(row, list), "row must be an array", f"{path}[{r}]")
        _require(len(row) == cols, f"expected {cols} columns, got {len(row)}", f"{path}[{r}]")
        out = []
        for c, v in enumerate(row):
            try:
                out.append(ring.element_from_json(v))
            except ValueError as exc:
                raise DocumentError(str(exc), f"{path}[{r}][{c}]") from None
        data.append(tuple(out))
    return Mat(ring, rows, cols, tuple(data), _normalized=True)


def complex_to_document(x):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "ncomplex",
        "N": x.N,
        "ring": ring_to_json(x.ring),
    }
    if x.is_periodic:
        p = x.support.period
        doc["support"] = {"kind": "periodic", "period": p}
        doc["dims"] = [x.dim(i) for i in range(p)]
        doc["diffs"] = [_matrix_to_json(x.diff(i)) for i in range(p)]
    else:
        doc["support"] = {"kind": "bounded"}
        doc["dims"] = {str(i): x.dim(i) for i in x.degrees() if x.dim(i)}
        diffs = {}
        for i in x.degrees():
            d = x.diff(i)
            if d.rows and d.cols and not d.is_zero():
                diffs[str(i)] = _matrix_to_json(d)
        doc["diffs"] = diffs
    return doc


def _parse_degree(key, path):
    try:
        return int(key)
    except ValueError:
        raise DocumentError(f"degree key {key!r} is not an integer", path) from None


def complex_from_document(doc, check=True):
    _require(isinstance(doc, dict), "document must be an object", "")
    _require(doc.get("kind") == "ncomplex", "kind must be 'ncomplex'", "kind")
    _require(doc.get("schema_version") == SCHEMA_VERSION,
             f"unsupported schema_version {doc.get('schema_version')!r}", "schema_version")
    n = doc.get("N")
    _require(isinstance(n, int) and n >= 2, "N must be an integer >= 2", "N")
    try:
        ring = ring_from_json(doc.get("ring"))
    except ValueError as exc:
        raise DocumentError(str(exc), "ring") from None
    support = doc.get("support")
    _require(isinstance(support, dict) and "kind" in support, "support descriptor missing", "support")
    if support["kind"] == "periodic":
        p = support.get("period")
        _require(isinstance(p, int) and p >= 1, "period must be a positive integer", "support.period")
        dims = doc.get("dims")
        _require(isinstance(dims, list) and len(dims) == p, f"dims must list {p} ranks", "dims")
        for k, d in enumerate(dims):
            _require(isinstance(d, int) and d >= 0, "rank must be a nonnegative integer", f"dims[{k}]")
        raw = doc.get("diffs")
        _require(isinstance(raw, list) and len(raw) == p, f"diffs must list {p} matrices", "diffs")
        diffs = [
            _matrix_from_json(ring, dims[(k + 1) % p], dims[k], raw[k], f"diffs[{k}]")
            for k in range(p)
        ]
        try:
            x = NComplex.periodic(n, ring, dims, diffs)
        except ComplexError as exc:
            raise DocumentError(str(exc), "diffs") from None
    elif support["kind"] == "bounded":
        dims_raw = doc.get("dims")
        _require(isinstance(dims_raw, dict), "dims must be an object", "dims")
        dims = {}
        for key, d in dims_raw.items():
            i = _parse_degree(key, f"dims.{key}")
            _require(isinstance(d, int) and d >= 0, "rank must be a nonnegative integer", f"dims.{key}")
            dims[i] = d
        raw = doc.get("diffs")
        _require(isinstance(raw, dict), "diffs must be an object", "diffs")
        diffs = {}
        for key, mat in raw.items():
            i = _parse_degree(key, f"diffs.{key}")
            rows = dims.get(i + 1, 0)
            cols = dims.get(i, 0)
            diffs[i] = _matrix_from_json(ring, rows, cols, mat, f"diffs.{key}")
        try:
            x = NComplex.bounded(n, ring, dims, diffs)
        except ComplexError as exc:
            raise DocumentError(str(exc), "diffs") from None
    else:
        raise DocumentError(f"unknown support kind {support['kind']!r}", "support.kind")
    if check:
        report = validate(x)
        if not report.ok:
            raise DocumentError(
                f"complex fails validation: {report.problems[0]}",
                f"degree {report.first_bad_degree}" if report.first_bad_degree is not None else "diffs",
            )
    return x


def chain_map_to_document(f):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "chain_map",
        "source": complex_to_document(f.source),
        "target": complex_to_document(f.target),
    }
    if f.source.is_periodic:
        p = f.source.support.period
        doc["maps"] = [_matrix_to_json(f.map(i)) for i in range(p)]
    else:
        maps = {}
        for i in sorted(set(f.source.degrees()) | set(f.target.degrees())):
            m = f.map(i)
            if m.rows and m.cols and not m.is_zero():
                maps[str(i)] = _matrix_to_json(m)
        doc["maps"] = maps
    return doc


def chain_map_from_document(doc, check=True):
    _require(isinstance(doc, dict), "document must be an object", "")
    _require(doc.get("kind") == "chain_map", "kind must be 'chain_map'", "kind")
    source = complex_from_document(doc.get("source"), check=check)
    target = complex_from_document(doc.get("target"), check=check)
    if source.ring != target.ring or source.N != target.N:
        raise DocumentError("source and target disagree on N or the ring", "target")
    raw = doc.get("maps")
    maps = {}
    if source.is_periodic:
        p = source.support.period
        _require(isinstance(raw, list) and len(raw) == p, f"maps must list {p} matrices", "maps")
        for k in range(p):
            maps[k] = _matrix_from_json(
                source.ring, target.dim(k), source.dim(k), raw[k], f"maps[{k}]"
            )
    else:
        _require(isinstance(raw, dict), "maps must be an object", "maps")
        for key, mat in raw.items():
            i = _parse_degree(key, f"maps.{key}")
            maps[i] = _matrix_from_json(
                source.ring, target.dim(i), source.dim(i), mat, f"maps.{key}"
            )
    try:
        f = ChainMapN(source, target, maps)
    except ComplexError as exc:
        raise DocumentError(str(exc), "maps") from None
    if check:
        report = validate_map(f)
        if not report.ok:
            raise DocumentError(f"chain map fails validation: {report.problems[0]}", "maps")
    return f


def rep_complex_to_document(rc):
    """Document form of a complex of line-quiver representations (output only)."""

    def term_json(t):
        return {"vdims": list(t.vdims), "arrows": [_matrix_to_json(a) for a in t.arrows]}

    def fam_json(fam):
        return [_matrix_to_json(m) for m in fam]

    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "rep_complex",
        "vertices": rc.nv,
        "ring": ring_to_json(rc.ring),
    }
    if rc.is_periodic:
        p = rc.support.period
        doc["support"] = {"kind": "periodic", "period": p}
        doc["terms"] = [term_json(rc.term(i)) for i in range(p)]
        doc["diffs"] = [fam_json(rc.diff(i)) for i in range(p)]
    else:
        doc["support"] = {"kind": "bounded"}
        doc["terms"] = {str(i): term_json(rc.term(i)) for i in rc.degrees()}
        doc["diffs"] = {
            str(i): fam_json(rc.diff(i))
            for i in rc.degrees()
            if any(not m.is_zero() for m in rc.diff(i))
        }
    return doc


def fingerprint_to_document(fp):
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "homology_fingerprint",
        "N": fp.N,
        "entries": [
            {"degree": i, "amplitude": r, "dim": dim, "x_ranks": list(xr)}
            for (i, r), (dim, xr) in fp.entries
        ],
    }


def dumps(doc):
    """Canonical serialization: sorted keys, two-space indent, newline at EOF."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}", "") from None


def document_from_any(doc, check=True):
    """Dispatch on the document kind."""
    _require(isinstance(doc, dict), "document must be an object", "")
    kind = doc.get("kind")
    if kind == "ncomplex":
        return complex_from_document(doc, check=check)
    if kind == "chain_map":
        return chain_map_from_document(doc, check=check)
    raise DocumentError(f"unknown document kind {kind!r}", "kind")
