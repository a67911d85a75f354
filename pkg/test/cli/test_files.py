#!/usr/bin/env python3
"""
JSON file formats: cones, polynomials, certificates, decompositions, traces.
"""

import json
import os
import sys
import tempfile
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils import DATA_DIR, DISK_X1_REF, ref_to_grlex, run_tests, small_cones

from rational_wsos.barrier import BarrierContext
from rational_wsos.certify import Certificate, gram_recover, shift_by_constant
from rational_wsos.errors import ParseError
from rational_wsos.io import (
    canonical_json,
    cone_digest,
    cone_from_dict,
    cone_to_dict,
    read_certificate,
    read_cone,
    read_decomposition,
    read_poly,
    read_trace,
    write_certificate,
    write_cone,
    write_decomposition,
    write_poly,
    write_trace,
)
from rational_wsos.polybasis import disk_cone
from rational_wsos.solver import IterationRecord, IterationTrace


def _write_json(directory, name, obj):
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f)
    return path


def test_cone_files():
    print("\nTesting cone files and digests")
    print("=" * 60)
    spec = read_cone(os.path.join(DATA_DIR, "disk_cone.json"))
    assert (spec.n, spec.U, spec.L, spec.nu) == (2, 6, (3, 1), 4)
    with tempfile.TemporaryDirectory() as tmp:
        for i, cone in enumerate(small_cones()):
            path = os.path.join(tmp, f"cone{i}.json")
            write_cone(cone, path)
            again = read_cone(path)
            assert cone_to_dict(again) == cone_to_dict(cone)
            assert cone_digest(again) == cone_digest(cone)
    digests = {cone_digest(c) for c in small_cones()}
    assert len(digests) == len(small_cones())
    assert cone_digest(disk_cone(2)) != cone_digest(spec)
    assert canonical_json({"b": 1, "a": ["1/2"]}) == '{"a":["1/2"],"b":1}'
    print("✓ digests are stable and distinguish cones")


def test_cone_parse_errors():
    print("\nTesting malformed cones")
    print("=" * 60)
    good = cone_to_dict(disk_cone(2))
    bad_cases = [
        dict(good, n=0),
        dict(good, weights=[[0.5, 0, 0, 0, 0, 0]]),
        dict(good, degrees=["1", 0]),
        dict(good, q_basis={"kind": "hermite", "degree": 2}),
        {k: v for k, v in good.items() if k != "weights"},
        [],
    ]
    for obj in bad_cases:
        with pytest.raises(ParseError):
            cone_from_dict(obj)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "broken.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write("{not json")
        with pytest.raises(ParseError):
            read_cone(path)
        with pytest.raises(ParseError):
            read_cone(os.path.join(tmp, "missing.json"))
    print("✓ structural errors are ParseError")


def test_poly_files():
    print("\nTesting polynomial files")
    print("=" * 60)
    t = read_poly(os.path.join(DATA_DIR, "disk_poly.json"), U=6)
    assert t == (0, 2, -1, 3, -6, 1)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "p.json")
        write_poly((Fraction(1, 3), -2), path)
        assert read_poly(path) == (Fraction(1, 3), Fraction(-2))
        bare = _write_json(tmp, "bare.json", ["1", "-2/4"])
        assert read_poly(bare) == (1, Fraction(-1, 2))
        with pytest.raises(ParseError):
            read_poly(bare, U=3)
        floats = _write_json(tmp, "floats.json", {"coeffs": [1.5, 2]})
        with pytest.raises(ParseError):
            read_poly(floats)
    print("✓ exact coefficients only")


def test_certificate_files():
    print("\nTesting certificate files")
    print("=" * 60)
    init = read_certificate(os.path.join(DATA_DIR, "disk_init.json"))
    assert init.x == ref_to_grlex(DISK_X1_REF)
    assert init.c is None and init.cone_digest == "" and init.verified
    cert = Certificate(init.x, Fraction(-39), 5029, "ab" * 32, True, iterations=3)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "cert.json")
        write_certificate(cert, path)
        assert read_certificate(path) == cert
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        assert raw["N"] == "5029" and raw["c"] == "-39"
        bad_n = _write_json(tmp, "bad_n.json", dict(raw, N="1/2"))
        with pytest.raises(ParseError):
            read_certificate(bad_n)
        no_digest = _write_json(tmp, "no_digest.json", {"x": raw["x"]})
        with pytest.raises(ParseError):
            read_certificate(no_digest)
    print("✓ certificates round-trip exactly")


def test_decomposition_and_trace_files():
    print("\nTesting decomposition and trace files")
    print("=" * 60)
    spec = read_cone(os.path.join(DATA_DIR, "disk_cone.json"))
    ctx = BarrierContext.from_spec(spec)
    s = shift_by_constant(ctx, read_poly(os.path.join(DATA_DIR, "disk_poly.json")), Fraction(-39))
    dec = gram_recover(ctx, ref_to_grlex(DISK_X1_REF), s)
    trace = IterationTrace()
    trace.append(IterationRecord(1, Fraction(-36), Fraction(3), 5029, 13, True))
    trace.append(IterationRecord(2, Fraction(-67, 2), Fraction(5, 2), 6000, 14, True))
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "dec.json")
        write_decomposition(dec, path, cone_digest=cone_digest(spec))
        again, digest = read_decomposition(path)
        assert again == dec and digest == cone_digest(spec)
        tpath = os.path.join(tmp, "trace.jsonl")
        write_trace(trace, tpath)
        with open(tpath, encoding="utf-8") as f:
            assert len(f.readlines()) == 2
        assert read_trace(tpath).records == trace.records
        line = {"N": "5029", "c": "-36", "delta_c": "3", "iter": 1, "max_bits_x": 13, "verified": True}
        for bad_n in ("5029/2", "0"):
            bad = os.path.join(tmp, "bad_trace.jsonl")
            with open(bad, "w", encoding="utf-8") as f:
                f.write(json.dumps(dict(line, N=bad_n)) + "\n")
            with pytest.raises(ParseError):
                read_trace(bad)
    print("✓ Gram blocks and trace lines round-trip")


def main():
    return run_tests([
        test_cone_files,
        test_cone_parse_errors,
        test_poly_files,
        test_certificate_files,
        test_decomposition_and_trace_files,
    ])


if __name__ == "__main__":
    sys.exit(main())
